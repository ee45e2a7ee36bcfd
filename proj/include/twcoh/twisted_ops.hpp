#pragma once

#include <utility>

#include "bidegree.hpp"
#include "forms.hpp"

namespace twcoh {

/// The pair (f, θ) that parametrizes every twisted operator. θ must be a
/// closed 1-form on the same torus as f; this is checked once, here.
class TwistData {
public:
    TwistData(TrigPoly f, DifferentialForm theta) : f_(std::move(f)), theta_(std::move(theta)) {
        if (theta_.degree() != 1) throw InvalidInput("θ must be a 1-form");
        if (f_.dim() != theta_.dim()) throw DimensionMismatch("f and θ live on different tori");
        if (!ext_d(theta_).is_zero()) throw InvalidInput("θ is not closed (dθ ≠ 0)");
    }
    /// f with θ = 0.
    static TwistData untwisted(TrigPoly f) {
        std::size_t n = f.dim();
        return {std::move(f), DifferentialForm(n, 1)};
    }
    /// f = 1 with the given θ.
    static TwistData lichnerowicz(DifferentialForm theta) {
        std::size_t n = theta.dim();
        return {TrigPoly::constant(n, Scalar(1)), std::move(theta)};
    }

    const TrigPoly& f() const noexcept { return f_; }
    const DifferentialForm& theta() const noexcept { return theta_; }
    std::size_t dim() const noexcept { return f_.dim(); }

    TwistData with_f(TrigPoly f) const { return {std::move(f), theta_}; }
    TwistData with_theta(DifferentialForm theta) const { return {f_, std::move(theta)}; }
    /// Same f, θ scaled by s (θ₀ = mθ, θ₁ = (m+1)θ).
    TwistData scaled_theta(const Scalar& s) const { return {f_, s * theta_}; }

    /// Per-axis frequency growth of d_{f,θ}, d_{θ,f}, d_f and d_θ style operators:
    /// max(deg f, deg f + deg θ) along each axis.
    std::vector<int> growth() const {
        auto wf = f_.degree_vector();
        auto wt = theta_.degree_vector();
        std::vector<int> out(dim());
        for (std::size_t j = 0; j < dim(); ++j) out[j] = theta_.is_zero() ? wf[j] : wf[j] + wt[j];
        return out;
    }

    friend bool operator==(const TwistData&, const TwistData&) = default;

private:
    TrigPoly f_;
    DifferentialForm theta_;
};

namespace detail {
inline void check_dims(const TwistData& tw, std::size_t dim) {
    if (tw.dim() != dim) throw DimensionMismatch("twist data and form live on different tori");
}
} // namespace detail

/// d_θ φ = dφ − θ∧φ
inline DifferentialForm d_theta(const DifferentialForm& theta, const DifferentialForm& form) {
    if (theta.dim() != form.dim()) throw DimensionMismatch("θ and form live on different tori");
    return ext_d(form) - wedge(theta, form);
}
inline DifferentialForm d_theta(const TwistData& tw, const DifferentialForm& form) {
    return d_theta(tw.theta(), form);
}

/// d_f φ = f dφ − r df∧φ
inline DifferentialForm d_f(const TrigPoly& f, const DifferentialForm& form) {
    if (f.dim() != form.dim()) throw DimensionMismatch("f and form live on different tori");
    DifferentialForm out = f * ext_d(form);
    if (form.degree() > 0) out -= Scalar(form.degree()) * wedge(ext_d(f), form);
    return out;
}
inline DifferentialForm d_f(const TwistData& tw, const DifferentialForm& form) { return d_f(tw.f(), form); }

/// d_{f,θ} φ = d_f φ − fθ∧φ
inline DifferentialForm d_f_theta(const TwistData& tw, const DifferentialForm& form) {
    detail::check_dims(tw, form.dim());
    return d_f(tw.f(), form) - tw.f() * wedge(tw.theta(), form);
}

/// The equivalent form f·d_θφ − r df∧φ.
inline DifferentialForm d_f_theta_alt(const TwistData& tw, const DifferentialForm& form) {
    detail::check_dims(tw, form.dim());
    DifferentialForm out = tw.f() * d_theta(tw, form);
    if (form.degree() > 0) out -= Scalar(form.degree()) * wedge(ext_d(tw.f()), form);
    return out;
}

/// d_θ applied to the function f, as a 1-form: df − fθ.
inline DifferentialForm d_theta_of(const TwistData& tw) {
    return d_theta(tw.theta(), DifferentialForm::function(tw.f()));
}

/// d_{θ,f} φ = f d_θφ − r d_θf∧φ; squares to fθ∧d_f rather than zero.
inline DifferentialForm d_theta_f(const TwistData& tw, const DifferentialForm& form) {
    detail::check_dims(tw, form.dim());
    DifferentialForm out = tw.f() * d_theta(tw, form);
    if (form.degree() > 0) out -= Scalar(form.degree()) * wedge(d_theta_of(tw), form);
    return out;
}

// --- bidegree splittings on T^{2m} ------------------------------------------

/// ∂_f φ = f∂φ − (p+q)∂f∧φ
inline BidegreeForm del_f(const TwistData& tw, const BidegreeForm& form) {
    detail::check_dims(tw, form.dim());
    BidegreeForm out = tw.f() * del(form);
    if (form.degree() > 0) out -= Scalar(form.degree()) * wedge(del(tw.f()), form);
    return out;
}
/// ∂̄_f φ = f∂̄φ − (p+q)∂̄f∧φ
inline BidegreeForm delbar_f(const TwistData& tw, const BidegreeForm& form) {
    detail::check_dims(tw, form.dim());
    BidegreeForm out = tw.f() * delbar(form);
    if (form.degree() > 0) out -= Scalar(form.degree()) * wedge(delbar(tw.f()), form);
    return out;
}

inline BidegreeForm theta_10(const TwistData& tw) { return bidegree_split(tw.theta()).part(1, 0); }
inline BidegreeForm theta_01(const TwistData& tw) { return bidegree_split(tw.theta()).part(0, 1); }

/// ∂_{f,θ} = ∂_f − fθ^{1,0}∧
inline BidegreeForm del_f_theta(const TwistData& tw, const BidegreeForm& form) {
    return del_f(tw, form) - tw.f() * wedge(theta_10(tw), form);
}
/// ∂̄_{f,θ} = ∂̄_f − fθ^{0,1}∧
inline BidegreeForm delbar_f_theta(const TwistData& tw, const BidegreeForm& form) {
    return delbar_f(tw, form) - tw.f() * wedge(theta_01(tw), form);
}

// --- chain maps ---------------------------------------------------------------

/// χ(φ) = f^r φ; intertwines d_θ on singular forms with d_{f,θ}.
inline DifferentialForm chi_map(const TwistData& tw, const DifferentialForm& form) {
    detail::check_dims(tw, form.dim());
    return pow(tw.f(), static_cast<unsigned>(form.degree())) * form;
}

/// Φ(φ) = φ / h^r for a unit h.
inline DifferentialForm phi_map(const TrigPoly& h, const DifferentialForm& form) {
    if (h.dim() != form.dim()) throw DimensionMismatch("h and form live on different tori");
    return pow(h.unit_inverse(), static_cast<unsigned>(form.degree())) * form;
}

/// Gauge by a unit u: returns (u·φ, (f, θ − u⁻¹du)), so that
/// d_{f,θ}(u·φ) = u·d_{f,θ'}(φ).
inline std::pair<DifferentialForm, TwistData> unit_gauge(const TwistData& tw, const TrigPoly& u,
                                                         const DifferentialForm& form) {
    detail::check_dims(tw, form.dim());
    TrigPoly inv = u.unit_inverse();
    DifferentialForm shifted = tw.theta() - inv * ext_d(u);
    return {u * form, tw.with_theta(std::move(shifted))};
}

/// A morphism of pairs: an affine torus map together with a unit α.
class PairMorphism {
public:
    PairMorphism(AffineTorusMap map, TrigPoly alpha) : map_(std::move(map)), alpha_(std::move(alpha)) {
        if (alpha_.dim() != map_.source_dim()) throw DimensionMismatch("α must live on the source torus");
        if (!alpha_.is_unit()) throw NonInvertible("α must be a unit of the coefficient ring");
    }
    const AffineTorusMap& map() const noexcept { return map_; }
    const TrigPoly& alpha() const noexcept { return alpha_; }

    /// Source twist (α⁻¹·μ*f', μ*θ) that makes Φ* a chain map.
    TwistData source_twist(const TwistData& target) const {
        return {alpha_.unit_inverse() * map_.pullback(target.f()), map_.pullback(target.theta())};
    }

private:
    AffineTorusMap map_;
    TrigPoly alpha_;
};

/// Φ*(φ) = μ*φ / α^r
inline DifferentialForm morphism_pullback(const PairMorphism& m, const DifferentialForm& form) {
    DifferentialForm pulled = m.map().pullback(form);
    return pow(m.alpha().unit_inverse(), static_cast<unsigned>(form.degree())) * pulled;
}

/// Pullback of a twist along a plain map: (μ*f, μ*θ).
inline TwistData pullback_twist(const AffineTorusMap& mu, const TwistData& tw) {
    return {mu.pullback(tw.f()), mu.pullback(tw.theta())};
}

} // namespace twcoh
