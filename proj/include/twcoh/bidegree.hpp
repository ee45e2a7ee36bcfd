#pragma once

#include <set>
#include <utility>
#include <vector>

#include "forms.hpp"

namespace twcoh {

// Complex structure on T^{2m}: z_j = t_{2j} + i·t_{2j+1} (0-based axes).
// A BidegreeForm stores coefficients in the frame e_{2j} = dz_j,
// e_{2j+1} = dz̄_j, so a frame multi-index I has bidegree
// (#even entries, #odd entries).

namespace detail {

inline void require_even(std::size_t dim) {
    if (dim % 2 != 0)
        throw UnsupportedStructure("complex structure needs an even-dimensional torus, got T^" + std::to_string(dim));
}

/// Rewrites every dt_j (resp. e_j) through `image(j)`, a constant 1-form.
template <class ImageFn>
DifferentialForm change_frame(const DifferentialForm& form, ImageFn image) {
    std::size_t n = form.dim();
    std::vector<DifferentialForm> images;
    images.reserve(n);
    for (std::size_t j = 0; j < n; ++j) images.push_back(image(static_cast<int>(j)));
    DifferentialForm out(n, form.degree());
    for (const auto& [I, c] : form.components()) {
        DifferentialForm acc = DifferentialForm::function(c);
        for (int j : I) acc = wedge(acc, images[j]);
        out += acc;
    }
    return out;
}

inline DifferentialForm constant_one_form(std::size_t dim, std::initializer_list<std::pair<int, Scalar>> entries) {
    DifferentialForm out(dim, 1);
    for (const auto& [axis, c] : entries) out.add({axis}, TrigPoly::constant(dim, c));
    return out;
}

inline int holomorphic_count(const MultiIndex& I) {
    int p = 0;
    for (int j : I) p += (j % 2 == 0);
    return p;
}

} // namespace detail

class BidegreeForm {
public:
    BidegreeForm() = default;
    explicit BidegreeForm(DifferentialForm frame) : frame_(std::move(frame)) { detail::require_even(frame_.dim()); }

    /// Re-express a dt-basis form in the dz/dz̄ frame.
    static BidegreeForm from_form(const DifferentialForm& form) {
        detail::require_even(form.dim());
        std::size_t n = form.dim();
        const Scalar half = Scalar::ratio(1, 2);
        const Scalar half_i(0, mpq_class(1, 2));
        return BidegreeForm(detail::change_frame(form, [&](int j) {
            int even = j - j % 2;
            if (j % 2 == 0) return detail::constant_one_form(n, {{even, half}, {even + 1, half}});
            return detail::constant_one_form(n, {{even, -half_i}, {even + 1, half_i}});
        }));
    }

    /// Back to the dt basis: dz_j = dt_{2j} + i dt_{2j+1}, dz̄_j = dt_{2j} − i dt_{2j+1}.
    DifferentialForm to_form() const {
        std::size_t n = frame_.dim();
        return detail::change_frame(frame_, [&](int j) {
            int even = j - j % 2;
            Scalar sign = j % 2 == 0 ? Scalar(0, 1) : Scalar(0, -1);
            return detail::constant_one_form(n, {{even, Scalar(1)}, {even + 1, sign}});
        });
    }

    const DifferentialForm& frame() const noexcept { return frame_; }
    std::size_t dim() const noexcept { return frame_.dim(); }
    int degree() const noexcept { return frame_.degree(); }
    bool is_zero() const noexcept { return frame_.is_zero(); }

    /// The (p,q) component.
    BidegreeForm part(int p, int q) const {
        DifferentialForm out(frame_.dim(), frame_.degree());
        if (p + q == frame_.degree())
            for (const auto& [I, c] : frame_.components())
                if (detail::holomorphic_count(I) == p) out.add(I, c);
        return BidegreeForm(std::move(out));
    }

    std::set<std::pair<int, int>> bidegrees() const {
        std::set<std::pair<int, int>> out;
        for (const auto& [I, c] : frame_.components()) {
            int p = detail::holomorphic_count(I);
            out.emplace(p, frame_.degree() - p);
        }
        return out;
    }

    BidegreeForm& operator+=(const BidegreeForm& o) {
        frame_ += o.frame_;
        return *this;
    }
    BidegreeForm& operator-=(const BidegreeForm& o) {
        frame_ -= o.frame_;
        return *this;
    }
    friend BidegreeForm operator+(BidegreeForm a, const BidegreeForm& b) { return a += b; }
    friend BidegreeForm operator-(BidegreeForm a, const BidegreeForm& b) { return a -= b; }
    friend BidegreeForm operator*(const TrigPoly& f, const BidegreeForm& a) { return BidegreeForm(f * a.frame_); }
    friend BidegreeForm operator*(const Scalar& s, const BidegreeForm& a) { return BidegreeForm(s * a.frame_); }
    friend bool operator==(const BidegreeForm& a, const BidegreeForm& b) { return a.frame_ == b.frame_; }

private:
    DifferentialForm frame_;
};

inline BidegreeForm bidegree_split(const DifferentialForm& form) { return BidegreeForm::from_form(form); }

inline BidegreeForm wedge(const BidegreeForm& a, const BidegreeForm& b) {
    return BidegreeForm(wedge(a.frame(), b.frame()));
}

namespace detail {

// holomorphic = true: ∂ with ∂/∂z_j = ½(∂_{2j} − i∂_{2j+1}) along e_{2j};
// otherwise ∂̄ with ∂/∂z̄_j = ½(∂_{2j} + i∂_{2j+1}) along e_{2j+1}.
inline DifferentialForm wirtinger_d(const DifferentialForm& frame, bool holomorphic) {
    std::size_t n = frame.dim();
    const Scalar half = Scalar::ratio(1, 2);
    const Scalar half_i(0, holomorphic ? mpq_class(-1, 2) : mpq_class(1, 2));
    DifferentialForm out(n, frame.degree() + 1);
    for (const auto& [I, c] : frame.components())
        for (std::size_t j = 0; 2 * j < n; ++j) {
            int axis = static_cast<int>(2 * j + (holomorphic ? 0 : 1));
            if (std::binary_search(I.begin(), I.end(), axis)) continue;
            TrigPoly dc = c.partial(2 * j) * half + c.partial(2 * j + 1) * half_i;
            if (dc.is_zero()) continue;
            auto merged = merge_indices(MultiIndex{axis}, I);
            if (merged->first < 0) dc *= Scalar(-1);
            out.add(merged->second, dc);
        }
    return out;
}

} // namespace detail

inline BidegreeForm del(const BidegreeForm& a) { return BidegreeForm(detail::wirtinger_d(a.frame(), true)); }
inline BidegreeForm delbar(const BidegreeForm& a) { return BidegreeForm(detail::wirtinger_d(a.frame(), false)); }
inline BidegreeForm del(const TrigPoly& f) { return del(BidegreeForm(DifferentialForm::function(f))); }
inline BidegreeForm delbar(const TrigPoly& f) { return delbar(BidegreeForm(DifferentialForm::function(f))); }

/// (∂φ, ∂̄φ) of a dt-basis form; their sum re-expresses ext_d(φ).
inline std::pair<BidegreeForm, BidegreeForm> d_split(const DifferentialForm& form) {
    BidegreeForm b = bidegree_split(form);
    return {del(b), delbar(b)};
}

} // namespace twcoh
