#pragma once

// Named fixtures, written as expressions so a catalogue file and the CLI
// config share one format. A fixture is data; `materialize` turns it into
// engine objects and validates it.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "expr.hpp"
#include "serialize.hpp"

namespace twcoh {

struct FixtureSpec {
    std::string name;
    std::string description;
    std::size_t model = 1;
    std::string f = "1";
    std::string theta = "0";
    std::optional<std::string> omega;
    std::optional<std::string> omega_exact_from; // ω := f⁻²·d_{f,θ}ω′
    std::string m = "1";
    std::optional<std::string> map;              // "A;b", relative complex μ: T^k → T^model
    std::optional<std::pair<std::string, std::string>> partition;
    std::optional<std::vector<int>> roots;       // zeros of f at t = qπ/2 (circle only)
    std::optional<int> dmin, dmax;               // suggested schedule
};

/// "t4", "T4" or "4".
inline std::size_t parse_model(const std::string& text) {
    std::string digits = text;
    if (!digits.empty() && (digits[0] == 't' || digits[0] == 'T')) digits.erase(0, 1);
    if (digits.empty() || digits.size() > 2 || digits.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("model must look like t1..t8, got '" + text + "'");
    int n = std::stoi(digits);
    if (n < 1 || n > 8) throw InvalidInput("model dimension must be between 1 and 8, got " + std::to_string(n));
    return static_cast<std::size_t>(n);
}

inline Scalar parse_scalar(const std::string& text) {
    auto p = parse_function(text, 1);
    if (p.is_zero()) return Scalar();
    if (p.size() != 1 || p.coefficient(FreqVector(1)).is_zero())
        throw InvalidInput("expected a constant, got '" + text + "'");
    return p.coefficient(FreqVector(1));
}

/// "A;b": rows of A separated by ',', entries by spaces; b in turns.
/// "2;0" is the doubling map of the circle, "1 1,0 1;1/4 0" a shear plus a quarter turn.
inline AffineTorusMap parse_affine_map(const std::string& text, std::size_t target_dim) {
    auto semi = text.find(';');
    if (semi == std::string::npos) throw InvalidInput("map must be written \"A;b\", got '" + text + "'");
    std::vector<std::vector<int>> A;
    std::stringstream rows(text.substr(0, semi));
    std::string row;
    while (std::getline(rows, row, ',')) {
        std::stringstream entries(row);
        std::vector<int> r;
        std::string e;
        while (entries >> e) {
            if (e.find_first_not_of("-0123456789") != std::string::npos || e == "-")
                throw InvalidInput("map matrix entries must be integers, got '" + e + "'");
            r.push_back(std::stoi(e));
        }
        A.push_back(r);
    }
    std::vector<mpq_class> b;
    std::stringstream shifts(text.substr(semi + 1));
    std::string e;
    while (shifts >> e) b.push_back(rational_from_string(e));
    if (A.empty() || A[0].empty()) throw InvalidInput("map matrix is empty");
    if (A.size() != target_dim)
        throw DimensionMismatch("map matrix has " + std::to_string(A.size()) + " rows but the target is T^" +
                                std::to_string(target_dim));
    std::size_t source = A[0].size();
    return {A, b, source};
}

/// Engine objects built from a FixtureSpec.
struct Fixture {
    FixtureSpec spec;
    TwistData twist;
    Scalar m;
    std::optional<DifferentialForm> omega;
    std::optional<AffineTorusMap> map;
    std::optional<PartitionFixture> partition;

    bool has_lck() const { return omega.has_value(); }
    bool exact_lck() const { return spec.omega_exact_from.has_value(); }
    LckFixture lck() const {
        if (!omega) throw FixtureError("fixture '" + spec.name + "' has no ω");
        return {*omega, twist, m};
    }
    RelativePair relative() const {
        if (!map) throw FixtureError("fixture '" + spec.name + "' has no map");
        return {*map, twist};
    }
    CircleZeroFixture zeros() const {
        if (!spec.roots) throw FixtureError("fixture '" + spec.name + "' declares no zeros");
        return {spec.name, twist.f(), *spec.roots};
    }
};

inline Fixture materialize(const FixtureSpec& s) {
    std::size_t n = s.model;
    TwistData tw(parse_function(s.f, n), parse_form(s.theta, n, 1));
    Fixture fx{s, tw, parse_scalar(s.m), std::nullopt, std::nullopt, std::nullopt};
    if (s.omega && s.omega_exact_from) throw FixtureError("fixture '" + s.name + "' gives both omega and omega_exact_from");
    if (s.omega) fx.omega = parse_form(*s.omega, n, 2);
    if (s.omega_exact_from) {
        if (!tw.f().is_unit()) throw FixtureError("omega_exact_from needs f to be a unit");
        TrigPoly inv = tw.f().unit_inverse();
        fx.omega = (inv * inv) * d_f_theta(tw, parse_form(*s.omega_exact_from, n, 1));
    }
    if (fx.omega) (void)fx.lck(); // validates dω = θ∧ω
    if (s.map) fx.map = parse_affine_map(*s.map, n);
    if (s.partition) fx.partition.emplace(parse_function(s.partition->first, n), parse_function(s.partition->second, n));
    if (s.roots) {
        if (n != 1) throw FixtureError("zero counts are only defined on the circle");
        if (!fx.zeros().roots_verified()) throw FixtureError("fixture '" + s.name + "': f does not vanish at every declared root");
    }
    return fx;
}

inline const std::vector<FixtureSpec>& builtin_fixtures() {
    static const std::vector<FixtureSpec> all = [] {
        std::vector<FixtureSpec> v;
        auto add = [&v](FixtureSpec s) { v.push_back(std::move(s)); };
        add({"circle-cosine", "S^1 with f = cos t, theta = dt", 1, "cos(t1)", "dt1", {}, {}, "1", {}, {}, std::vector<int>{1, 3}, 4, 8});
        add({"circle-cosine-double", "S^1 with f = cos t, theta = 2 dt", 1, "cos(t1)", "2*dt1", {}, {}, "1", {}, {}, {}, 4, 8});
        add({"circle-sine", "S^1 with f = sin t, theta = dt", 1, "sin(t1)", "dt1", {}, {}, "1", {}, {}, std::vector<int>{0, 2}, 4, 8});
        add({"circle-shifted-cosine", "S^1 with the nowhere-zero f = 2 + cos t, theta = dt", 1, "2 + cos(t1)", "dt1", {}, {},
             "1", {}, {}, std::vector<int>{}, 4, 8});
        add({"circle-flat", "S^1 with f = 1, theta = 0 (de Rham)", 1, "1", "0", {}, {}, "1", {}, {}, {}, 2, 8});
        add({"torus2-flat", "T^2 with f = 1, theta = 0 (de Rham)", 2, "1", "0", {}, {}, "1", {}, {}, {}, 2, 6});
        add({"torus2-lichnerowicz", "T^2 with f = 1, theta = dt1", 2, "1", "dt1", {}, {}, "1", {}, {}, {}, 2, 6});
        add({"circle-identity-map", "identity map of S^1 with the cosine twist", 1, "cos(t1)", "dt1", {}, {}, "1", "1;0", {}, {},
             2, 6});
        add({"circle-doubling-map", "doubling map of S^1 with the cosine twist", 1, "cos(t1)", "dt1", {}, {}, "1", "2;0", {}, {},
             2, 6});
        add({"circle-partition", "S^1 split by lambda_U = (1 + cos t)/2 with the cosine twist", 1, "cos(t1)", "dt1", {}, {}, "1",
             {}, std::make_pair(std::string("1/2 + 1/2*cos(t1)"), std::string("1/2 - 1/2*cos(t1)")), {}, 2, 6});
        add({"torus2-lck", "T^2, omega = (2 + cos t2) dt1^dt2, f = cos t1, theta = dt1, m = 1", 2, "cos(t1)", "dt1",
             "(2 + cos(t2))*dt1∧dt2", {}, "1", {}, {}, {}, 2, 6});
        add({"torus2-lck-exact", "T^2, f = 2, theta = 0, f^2 omega exact: omega = f^-2 d_{f,theta}(cos t1 dt2 + 3 dt1)", 2, "2",
             "0", {}, "cos(t1)*dt2 + 3*dt1", "1", {}, {}, {}, 2, 6});
        add({"torus4-lck", "T^4, omega = (2 + cos t2) dt1^dt2, f = cos t1, theta = dt1, m = 1", 4, "cos(t1)", "dt1",
             "(2 + cos(t2))*dt1∧dt2", {}, "1", {}, {}, {}, 3, 5});
        return v;
    }();
    return all;
}

inline Json to_json(const FixtureSpec& s) {
    Json j{{"name", s.name}, {"description", s.description}, {"model", "t" + std::to_string(s.model)},
           {"f", s.f},       {"theta", s.theta},             {"m", s.m}};
    if (s.omega) j["omega"] = *s.omega;
    if (s.omega_exact_from) j["omega_exact_from"] = *s.omega_exact_from;
    if (s.map) j["map"] = *s.map;
    if (s.partition) j["partition"] = {s.partition->first, s.partition->second};
    if (s.roots) j["roots"] = *s.roots;
    if (s.dmin) j["Dmin"] = *s.dmin;
    if (s.dmax) j["Dmax"] = *s.dmax;
    return j;
}

namespace detail {
template <class T>
std::optional<T> optional_field(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}
} // namespace detail

inline FixtureSpec fixture_from_json(const Json& j) {
    try {
        FixtureSpec s;
        s.name = j.at("name").get<std::string>();
        s.description = j.value("description", "");
        const Json& model = j.at("model");
        s.model = parse_model(model.is_number() ? std::to_string(model.get<int>()) : model.get<std::string>());
        s.f = j.value("f", "1");
        s.theta = j.value("theta", "0");
        s.omega = detail::optional_field<std::string>(j, "omega");
        s.omega_exact_from = detail::optional_field<std::string>(j, "omega_exact_from");
        s.m = j.contains("m") && j.at("m").is_number() ? std::to_string(j.at("m").get<long>()) : j.value("m", "1");
        s.map = detail::optional_field<std::string>(j, "map");
        if (j.contains("partition")) {
            auto p = j.at("partition").get<std::vector<std::string>>();
            if (p.size() != 2) throw FixtureError("partition needs exactly two functions");
            s.partition = std::make_pair(p[0], p[1]);
        }
        s.roots = detail::optional_field<std::vector<int>>(j, "roots");
        s.dmin = detail::optional_field<int>(j, "Dmin");
        s.dmax = detail::optional_field<int>(j, "Dmax");
        return s;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed fixture entry: ") + e.what());
    }
}

/// A catalogue file: {"fixtures": [ {...}, ... ]}.
inline std::vector<FixtureSpec> load_catalogue(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open fixture catalogue '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("fixture catalogue '" + path + "' is not valid JSON: " + e.what());
    }
    if (!doc.contains("fixtures") || !doc.at("fixtures").is_array())
        throw InvalidInput("fixture catalogue needs a \"fixtures\" array");
    std::vector<FixtureSpec> out;
    for (const auto& j : doc.at("fixtures")) out.push_back(fixture_from_json(j));
    return out;
}

inline FixtureSpec find_fixture(const std::string& name, const std::vector<FixtureSpec>& extra = {}) {
    for (const auto& s : extra)
        if (s.name == name) return s;
    for (const auto& s : builtin_fixtures())
        if (s.name == name) return s;
    std::string known;
    for (const auto& s : builtin_fixtures()) known += (known.empty() ? "" : ", ") + s.name;
    throw FixtureError("unknown fixture '" + name + "' (built-ins: " + known + ")");
}

} // namespace twcoh
