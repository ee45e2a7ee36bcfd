#pragma once

#include <algorithm>
#include <compare>
#include <cstdlib>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace twcoh {

/// Integer frequency of the monomial e^{i<k,t>} on the n-torus.
struct FreqVector {
    std::vector<int> k;

    FreqVector() = default;
    explicit FreqVector(std::size_t dim) : k(dim, 0) {}
    FreqVector(std::initializer_list<int> values) : k(values) {}
    explicit FreqVector(std::vector<int> values) : k(std::move(values)) {}

    std::size_t dim() const noexcept { return k.size(); }
    int operator[](std::size_t j) const { return k[j]; }
    int& operator[](std::size_t j) { return k[j]; }

    int max_norm() const {
        int m = 0;
        for (int v : k) m = std::max(m, std::abs(v));
        return m;
    }
    FreqVector operator-() const {
        FreqVector out(*this);
        for (int& v : out.k) v = -v;
        return out;
    }
    friend FreqVector operator+(const FreqVector& a, const FreqVector& b) {
        FreqVector out(a);
        for (std::size_t j = 0; j < a.k.size(); ++j) out.k[j] += b.k[j];
        return out;
    }
    friend bool operator==(const FreqVector&, const FreqVector&) = default;
    friend auto operator<=>(const FreqVector&, const FreqVector&) = default;
};

/// Trigonometric polynomial on T^dim with Gaussian-rational coefficients,
/// stored sparsely in the exponential basis. Zero coefficients are never kept.
class TrigPoly {
public:
    using Terms = std::map<FreqVector, Scalar>;

    TrigPoly() = default;
    explicit TrigPoly(std::size_t dim) : dim_(dim) {}

    static TrigPoly zero(std::size_t dim) { return TrigPoly(dim); }
    static TrigPoly constant(std::size_t dim, const Scalar& c) {
        return monomial(FreqVector(dim), c);
    }
    static TrigPoly monomial(const FreqVector& k, const Scalar& c = Scalar(1)) {
        TrigPoly p(k.dim());
        p.add_term(k, c);
        return p;
    }
    /// cos<k,t> = ½e^{i<k,t>} + ½e^{-i<k,t>}
    static TrigPoly cos_mode(const FreqVector& k) {
        TrigPoly p(k.dim());
        p.add_term(k, Scalar::ratio(1, 2));
        p.add_term(-k, Scalar::ratio(1, 2));
        return p;
    }
    /// sin<k,t> = -½i·e^{i<k,t>} + ½i·e^{-i<k,t>}
    static TrigPoly sin_mode(const FreqVector& k) {
        TrigPoly p(k.dim());
        p.add_term(k, Scalar(0, mpq_class(-1, 2)));
        p.add_term(-k, Scalar(0, mpq_class(1, 2)));
        return p;
    }

    std::size_t dim() const noexcept { return dim_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Scalar coefficient(const FreqVector& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Scalar() : it->second;
    }

    /// Adds c·e^{i<k,t>} in place, dropping the term if it cancels.
    void add_term(const FreqVector& k, const Scalar& c) {
        if (k.dim() != dim_) throw DimensionMismatch("frequency length differs from torus dimension");
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    /// max_j |k_j| over stored terms; 0 for the zero polynomial.
    int degree() const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, k.max_norm());
        return d;
    }
    int axis_degree(std::size_t j) const {
        int d = 0;
        for (const auto& [k, c] : terms_) d = std::max(d, std::abs(k[j]));
        return d;
    }
    std::vector<int> degree_vector() const {
        std::vector<int> out(dim_, 0);
        for (std::size_t j = 0; j < dim_; ++j) out[j] = axis_degree(j);
        return out;
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        check_dim(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    TrigPoly& operator-=(const TrigPoly& o) {
        check_dim(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    TrigPoly& operator*=(const Scalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend TrigPoly operator*(TrigPoly a, const Scalar& s) { return a *= s; }
    friend TrigPoly operator*(const Scalar& s, TrigPoly a) { return a *= s; }
    TrigPoly operator-() const { return *this * Scalar(-1); }

    /// Convolution of the frequency maps.
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        a.check_dim(b);
        TrigPoly out(a.dim_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) out.add_term(ka + kb, ca * cb);
        return out;
    }
    TrigPoly& operator*=(const TrigPoly& o) { return *this = *this * o; }

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    /// ∂/∂t_axis: c·e^{i<k,t>} ↦ (i·k_axis)·c·e^{i<k,t>}.
    TrigPoly partial(std::size_t axis) const {
        if (axis >= dim_)
            throw AxisOutOfRange("axis " + std::to_string(axis + 1) + " outside torus of dimension " +
                                 std::to_string(dim_));
        TrigPoly out(dim_);
        for (const auto& [k, c] : terms_)
            if (k[axis] != 0) out.terms_.emplace(k, c * Scalar(0, k[axis]));
        return out;
    }

    /// Units of the ring are exactly the single nonzero monomials.
    bool is_unit() const { return terms_.size() == 1; }

    TrigPoly unit_inverse() const {
        if (!is_unit()) throw NonInvertible("trigonometric polynomial is not a unit (not a single monomial)");
        const auto& [k, c] = *terms_.begin();
        return monomial(-k, c.inverse());
    }

    /// Real-valued iff coefficient(-k) == conj(coefficient(k)) for all k.
    bool is_real() const {
        for (const auto& [k, c] : terms_)
            if (coefficient(-k) != c.conj()) return false;
        return true;
    }

    TrigPoly conj() const {
        TrigPoly out(dim_);
        for (const auto& [k, c] : terms_) out.terms_.emplace(-k, c.conj());
        return out;
    }

    /// Exact value at the point t_j = (π/2)·quarters[j], where e^{i<k,t>} = i^{<k,quarters>}.
    Scalar evaluate_at_quarter_turns(std::span<const int> quarters) const {
        if (quarters.size() != dim_) throw DimensionMismatch("evaluation point has wrong dimension");
        static const Scalar powers[4] = {Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)};
        Scalar sum;
        for (const auto& [k, c] : terms_) {
            long e = 0;
            for (std::size_t j = 0; j < dim_; ++j) e += static_cast<long>(k[j]) * quarters[j];
            sum += c * powers[((e % 4) + 4) % 4];
        }
        return sum;
    }

private:
    void check_dim(const TrigPoly& o) const {
        if (o.dim_ != dim_)
            throw DimensionMismatch("trigonometric polynomials on T^" + std::to_string(dim_) + " and T^" +
                                    std::to_string(o.dim_));
    }

    std::size_t dim_ = 0;
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const TrigPoly& p) {
    if (p.is_zero()) return os << "0";
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ")e^{i(";
        for (std::size_t j = 0; j < k.dim(); ++j) os << (j ? "," : "") << k[j];
        os << ")t}";
    }
    return os;
}

inline TrigPoly pow(const TrigPoly& base, unsigned exp) {
    TrigPoly out = TrigPoly::constant(base.dim(), Scalar(1));
    TrigPoly b = base;
    while (exp) {
        if (exp & 1U) out *= b;
        exp >>= 1U;
        if (exp) b *= b;
    }
    return out;
}

} // namespace twcoh
