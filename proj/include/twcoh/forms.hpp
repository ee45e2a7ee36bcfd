#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "trig_poly.hpp"

namespace twcoh {

/// Strictly increasing 0-based axis indices; dt_I = dt_{I[0]} ∧ … ∧ dt_{I[r-1]}.
using MultiIndex = std::vector<int>;

namespace detail {

/// Sign of the shuffle that sorts I ++ J, or nullopt when I and J overlap.
inline std::optional<std::pair<int, MultiIndex>> merge_indices(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out;
    out.reserve(a.size() + b.size());
    int inversions = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            inversions += static_cast<int>(a.size() - i);
            out.push_back(b[j++]);
        } else {
            return std::nullopt;
        }
    }
    return std::make_pair(inversions % 2 ? -1 : 1, std::move(out));
}

inline bool strictly_increasing(const MultiIndex& I, std::size_t dim) {
    for (std::size_t k = 0; k < I.size(); ++k) {
        if (I[k] < 0 || static_cast<std::size_t>(I[k]) >= dim) return false;
        if (k > 0 && I[k - 1] >= I[k]) return false;
    }
    return true;
}

} // namespace detail

/// Homogeneous r-form on T^dim with trigonometric-polynomial coefficients.
/// Degrees above dim are allowed and always hold the zero form.
class DifferentialForm {
public:
    using Components = std::map<MultiIndex, TrigPoly>;

    DifferentialForm() = default;
    DifferentialForm(std::size_t dim, int degree) : dim_(dim), degree_(degree) {
        if (degree < 0) throw DegreeMismatch("negative form degree");
    }

    static DifferentialForm zero(std::size_t dim, int degree) { return {dim, degree}; }
    static DifferentialForm function(const TrigPoly& f) {
        DifferentialForm out(f.dim(), 0);
        out.add(MultiIndex{}, f);
        return out;
    }
    static DifferentialForm basis(std::size_t dim, const MultiIndex& I, const TrigPoly& coeff) {
        DifferentialForm out(dim, static_cast<int>(I.size()));
        out.add(I, coeff);
        return out;
    }
    /// The constant 1-form dt_axis.
    static DifferentialForm dt(std::size_t dim, int axis) {
        return basis(dim, {axis}, TrigPoly::constant(dim, Scalar(1)));
    }

    std::size_t dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    const Components& components() const noexcept { return comps_; }
    bool is_zero() const noexcept { return comps_.empty(); }

    TrigPoly component(const MultiIndex& I) const {
        auto it = comps_.find(I);
        return it == comps_.end() ? TrigPoly(dim_) : it->second;
    }

    void add(const MultiIndex& I, const TrigPoly& coeff) {
        if (static_cast<int>(I.size()) != degree_)
            throw DegreeMismatch("multi-index length " + std::to_string(I.size()) + " in a " +
                                 std::to_string(degree_) + "-form");
        if (!detail::strictly_increasing(I, dim_)) throw InvalidInput("multi-index is not strictly increasing");
        if (coeff.dim() != dim_) throw DimensionMismatch("coefficient lives on a different torus");
        if (coeff.is_zero()) return;
        auto [it, inserted] = comps_.try_emplace(I, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) comps_.erase(it);
        }
    }

    DifferentialForm& operator+=(const DifferentialForm& o) {
        check_same_space(o);
        for (const auto& [I, c] : o.comps_) add(I, c);
        return *this;
    }
    DifferentialForm& operator-=(const DifferentialForm& o) {
        check_same_space(o);
        for (const auto& [I, c] : o.comps_) add(I, -c);
        return *this;
    }
    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    DifferentialForm operator-() const { return *this * Scalar(-1); }

    friend DifferentialForm operator*(const Scalar& s, const DifferentialForm& a) { return a * s; }
    friend DifferentialForm operator*(const DifferentialForm& a, const Scalar& s) {
        DifferentialForm out(a.dim_, a.degree_);
        if (s.is_zero()) return out;
        for (const auto& [I, c] : a.comps_) out.comps_.emplace(I, c * s);
        return out;
    }
    /// Multiplication by a function.
    friend DifferentialForm operator*(const TrigPoly& f, const DifferentialForm& a) {
        if (f.dim() != a.dim_) throw DimensionMismatch("function and form live on different tori");
        DifferentialForm out(a.dim_, a.degree_);
        for (const auto& [I, c] : a.comps_) out.add(I, f * c);
        return out;
    }

    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
    }

    /// Largest |k_j| over all coefficient frequencies, per axis.
    std::vector<int> degree_vector() const {
        std::vector<int> out(dim_, 0);
        for (const auto& [I, c] : comps_)
            for (std::size_t j = 0; j < dim_; ++j) out[j] = std::max(out[j], c.axis_degree(j));
        return out;
    }

private:
    void check_same_space(const DifferentialForm& o) const {
        if (o.dim_ != dim_) throw DimensionMismatch("forms live on different tori");
        if (o.degree_ != degree_)
            throw DegreeMismatch("adding a " + std::to_string(o.degree_) + "-form to a " + std::to_string(degree_) +
                                 "-form");
    }

    std::size_t dim_ = 0;
    int degree_ = 0;
    Components comps_;
};

inline std::ostream& operator<<(std::ostream& os, const DifferentialForm& f) {
    os << "[" << f.degree() << "-form on T^" << f.dim() << ": ";
    if (f.is_zero()) os << "0";
    bool first = true;
    for (const auto& [I, c] : f.components()) {
        if (!first) os << " + ";
        first = false;
        os << "{" << c << "}";
        for (int j : I) os << " dt" << j + 1;
    }
    return os << "]";
}

/// Graded-commutative wedge product with signs computed from index shuffles.
inline DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms on different tori");
    DifferentialForm out(a.dim(), a.degree() + b.degree());
    for (const auto& [I, ca] : a.components())
        for (const auto& [J, cb] : b.components()) {
            auto merged = detail::merge_indices(I, J);
            if (!merged) continue;
            TrigPoly c = ca * cb;
            if (merged->first < 0) c *= Scalar(-1);
            out.add(merged->second, c);
        }
    return out;
}

/// Exterior derivative: d(a dt_I) = Σ_j ∂_j a dt_j ∧ dt_I.
inline DifferentialForm ext_d(const DifferentialForm& form) {
    DifferentialForm out(form.dim(), form.degree() + 1);
    for (const auto& [I, c] : form.components())
        for (std::size_t j = 0; j < form.dim(); ++j) {
            if (std::binary_search(I.begin(), I.end(), static_cast<int>(j))) continue;
            TrigPoly dc = c.partial(j);
            if (dc.is_zero()) continue;
            auto merged = detail::merge_indices(MultiIndex{static_cast<int>(j)}, I);
            if (merged->first < 0) dc *= Scalar(-1);
            out.add(merged->second, dc);
        }
    return out;
}

/// d of a function, as a 1-form.
inline DifferentialForm ext_d(const TrigPoly& f) { return ext_d(DifferentialForm::function(f)); }

/// Affine torus map s ↦ A s + b from T^source_dim to T^target_dim.
/// `matrix` is target_dim × source_dim with integer entries; the translation
/// is given in turns (mod 1) and must be a multiple of 1/4 so that the phases
/// e^{2πi<k,b>} stay in the Gaussian rationals.
class AffineTorusMap {
public:
    AffineTorusMap(std::vector<std::vector<int>> matrix, std::vector<mpq_class> translation, std::size_t source_dim)
        : matrix_(std::move(matrix)), source_dim_(source_dim) {
        for (const auto& row : matrix_)
            if (row.size() != source_dim_) throw DimensionMismatch("affine map matrix rows must have source_dim entries");
        if (translation.size() != matrix_.size())
            throw DimensionMismatch("translation length must equal the target dimension");
        for (auto& b : translation) {
            mpq_class quarters = b * 4;
            quarters.canonicalize();
            if (quarters.get_den() != 1)
                throw InvalidInput("translation " + rational_to_string(b) +
                                   " is not a multiple of a quarter turn; the pullback would leave the coefficient field");
            mpz_class q = quarters.get_num() % 4;
            if (q < 0) q += 4;
            quarters_.push_back(static_cast<int>(q.get_si()));
        }
    }
    static AffineTorusMap linear(std::vector<std::vector<int>> matrix, std::size_t source_dim) {
        std::vector<mpq_class> zero(matrix.size(), 0);
        return {std::move(matrix), std::move(zero), source_dim};
    }
    static AffineTorusMap identity(std::size_t dim) {
        std::vector<std::vector<int>> m(dim, std::vector<int>(dim, 0));
        for (std::size_t j = 0; j < dim; ++j) m[j][j] = 1;
        return linear(std::move(m), dim);
    }

    std::size_t source_dim() const noexcept { return source_dim_; }
    std::size_t target_dim() const noexcept { return matrix_.size(); }
    const std::vector<std::vector<int>>& matrix() const noexcept { return matrix_; }
    std::vector<mpq_class> translation() const {
        std::vector<mpq_class> out;
        for (int q : quarters_) out.emplace_back(q, 4);
        for (auto& b : out) b.canonicalize();
        return out;
    }

    /// Cutoff on the source torus that contains the pullback of every
    /// frequency bounded per-axis by `target_cutoff`: |(Aᵀk)_l| ≤ Σ_j |A_jl| c_j.
    std::vector<int> pushed_cutoff(const std::vector<int>& target_cutoff) const {
        std::vector<int> out(source_dim_, 0);
        for (std::size_t l = 0; l < source_dim_; ++l)
            for (std::size_t j = 0; j < matrix_.size(); ++j) out[l] += std::abs(matrix_[j][l]) * target_cutoff[j];
        return out;
    }

    TrigPoly pullback(const TrigPoly& f) const {
        if (f.dim() != target_dim()) throw DimensionMismatch("pullback of a function from the wrong torus");
        static const Scalar phases[4] = {Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)};
        TrigPoly out(source_dim_);
        for (const auto& [k, c] : f.terms()) {
            FreqVector ks(source_dim_);
            long phase = 0;
            for (std::size_t j = 0; j < target_dim(); ++j) {
                for (std::size_t l = 0; l < source_dim_; ++l) ks[l] += matrix_[j][l] * k[j];
                phase += static_cast<long>(k[j]) * quarters_[j];
            }
            out.add_term(ks, c * phases[((phase % 4) + 4) % 4]);
        }
        return out;
    }

    DifferentialForm pullback(const DifferentialForm& form) const {
        if (form.dim() != target_dim()) throw DimensionMismatch("pullback of a form from the wrong torus");
        DifferentialForm out(source_dim_, form.degree());
        for (const auto& [I, c] : form.components()) {
            DifferentialForm frame = DifferentialForm::function(pullback(c));
            for (int j : I) frame = wedge(frame, pulled_dt(j));
            out += frame;
        }
        return out;
    }

private:
    DifferentialForm pulled_dt(int j) const {
        DifferentialForm out(source_dim_, 1);
        for (std::size_t l = 0; l < source_dim_; ++l)
            if (matrix_[j][l] != 0)
                out.add({static_cast<int>(l)}, TrigPoly::constant(source_dim_, Scalar(matrix_[j][l])));
        return out;
    }

    std::vector<std::vector<int>> matrix_;
    std::vector<int> quarters_;
    std::size_t source_dim_;
};

} // namespace twcoh
