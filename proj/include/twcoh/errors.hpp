#pragma once

#include <stdexcept>
#include <string>

namespace twcoh {

// Base of every error the engine raises. `kind()` is a stable tag used by
// the CLI to map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& w) : Error("dimension-mismatch", w) {}
};
struct AxisOutOfRange : Error {
    explicit AxisOutOfRange(const std::string& w) : Error("axis-out-of-range", w) {}
};
struct NonInvertible : Error {
    explicit NonInvertible(const std::string& w) : Error("non-invertible", w) {}
};
struct UnsupportedStructure : Error {
    explicit UnsupportedStructure(const std::string& w) : Error("unsupported-structure", w) {}
};
struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error("invalid-input", w) {}
};
struct DegreeMismatch : Error {
    explicit DegreeMismatch(const std::string& w) : Error("degree-mismatch", w) {}
};
struct AssemblyError : Error {
    explicit AssemblyError(const std::string& w) : Error("assembly", w) {}
};
// A truncated operator family failed d∘d = 0, or a chain map failed to commute.
struct ComplexPropertyViolation : Error {
    explicit ComplexPropertyViolation(const std::string& w) : Error("complex-property", w) {}
};
struct ChainMapViolation : Error {
    explicit ChainMapViolation(const std::string& w) : Error("chain-map", w) {}
};
struct FixtureError : Error {
    explicit FixtureError(const std::string& w) : Error("fixture", w) {}
};
struct ParseError : Error {
    ParseError(const std::string& w, int line, int column)
        : Error("parse", w + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace twcoh
