#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"

namespace twcoh {

// --- relative complex of an affine map --------------------------------------

/// μ: M → M′ with a twist on M′; M carries the pulled-back twist (μ*f, μ*θ).
class RelativePair {
public:
    RelativePair(AffineTorusMap mu, TwistData target)
        : mu_(std::move(mu)), target_(std::move(target)), source_(pullback_twist(mu_, target_)) {
        if (target_.dim() != mu_.target_dim()) throw DimensionMismatch("twist must live on the target torus of μ");
    }
    const AffineTorusMap& map() const noexcept { return mu_; }
    const TwistData& target_twist() const noexcept { return target_; }
    const TwistData& source_twist() const noexcept { return source_; }

private:
    AffineTorusMap mu_;
    TwistData target_;
    TwistData source_;
};

/// d̃(φ, ψ) = (d′_{f,θ}φ, μ*φ − d_{μ*f,μ*θ}ψ)
inline std::pair<DifferentialForm, DifferentialForm> rel_d(const RelativePair& rp, const DifferentialForm& phi,
                                                           const DifferentialForm& psi) {
    if (phi.dim() != rp.map().target_dim() || psi.dim() != rp.map().source_dim())
        throw DimensionMismatch("relative cochain (φ, ψ) must live on (M′, M)");
    if (psi.degree() != phi.degree() - 1 && !(phi.degree() == 0 && psi.is_zero()))
        throw DegreeMismatch("relative cochain needs deg ψ = deg φ − 1");
    DifferentialForm second = rp.map().pullback(phi);
    if (phi.degree() > 0) second -= d_f_theta(rp.source_twist(), psi);
    return {d_f_theta(rp.target_twist(), phi), second};
}

/// Ω^r(μ) = Ω^r(M′) ⊕ Ω^{r−1}(M); cutoffs live on M′ and are pushed to M through μ.
inline CochainComplex relative_complex(const RelativePair& rp) {
    CochainComplex cx;
    cx.name = "relative d_f_theta";
    std::size_t nt = rp.map().target_dim(), ns = rp.map().source_dim();
    cx.cutoff_dim = nt;
    cx.max_degree = static_cast<int>(std::max(nt, ns + 1));
    cx.growth = rp.target_twist().growth();
    AffineTorusMap mu = rp.map();
    cx.layout = [nt, ns, mu](int r, const Cutoff& D) {
        bool empty = false;
        for (int c : D) empty = empty || c < 0;
        Cutoff pushed = empty ? Cutoff(ns, -1) : mu.pushed_cutoff(D);
        return Layout(std::vector<BasisSpec>{BasisSpec(nt, r, D), BasisSpec(ns, r - 1, pushed)});
    };
    cx.differential = [rp](int r, const Cochain& x) {
        DifferentialForm second = rp.map().pullback(x.at(0));
        if (r > 0) second -= d_f_theta(rp.source_twist(), x.at(1));
        return Cochain{d_f_theta(rp.target_twist(), x.at(0)), second};
    };
    return cx;
}

inline CohomologyReport rel_cohomology_dim(const RelativePair& rp, const std::vector<int>& degrees,
                                           const std::vector<int>& schedule, int stability = kDefaultStability) {
    return cohomology_dim(relative_complex(rp), degrees, schedule, stability);
}

/// One term Σ_r (−1)^r [h^{r−1}(M) − h^r(μ) + h^r(M′)] of the long sequence, summed.
struct EulerCheck {
    std::vector<long> source, relative, target; // indexed by degree
    long alternating_sum = 0;
    bool complete = false; // every strand stabilized
};

inline EulerCheck relative_euler_check(const RelativePair& rp, const std::vector<int>& schedule,
                                       int stability = kDefaultStability) {
    std::size_t ns = rp.map().source_dim(), nt = rp.map().target_dim();
    int top = static_cast<int>(std::max(nt, ns + 1));
    std::vector<int> degrees;
    for (int r = 0; r <= top; ++r) degrees.push_back(r);
    auto src = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, rp.source_twist()), degrees, schedule, stability);
    auto tgt = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, rp.target_twist()), degrees, schedule, stability);
    auto rel = rel_cohomology_dim(rp, degrees, schedule, stability);
    EulerCheck out;
    out.complete = true;
    auto value = [&out](const DegreeReport& d) {
        out.complete = out.complete && d.stabilized;
        return d.stabilized_dim.value_or(d.rows.back().dim);
    };
    for (int r = 0; r <= top; ++r) {
        out.source.push_back(value(src.degree(r)));
        out.relative.push_back(value(rel.degree(r)));
        out.target.push_back(value(tgt.degree(r)));
    }
    for (int r = 0; r <= top; ++r) {
        long below = r > 0 ? out.source[static_cast<std::size_t>(r - 1)] : 0;
        long term = below - out.relative[static_cast<std::size_t>(r)] + out.target[static_cast<std::size_t>(r)];
        out.alternating_sum += (r % 2 ? -term : term);
    }
    return out;
}

// --- Mayer–Vietoris cochain maps -------------------------------------------

class PartitionFixture {
public:
    PartitionFixture(TrigPoly lambda_u, TrigPoly lambda_v) : u_(std::move(lambda_u)), v_(std::move(lambda_v)) {
        if (u_.dim() != v_.dim()) throw DimensionMismatch("partition functions live on different tori");
        if (u_ + v_ != TrigPoly::constant(u_.dim(), Scalar(1)))
            throw FixtureError("λ_U + λ_V ≠ 1: not a partition of unity");
    }
    const TrigPoly& lambda_u() const noexcept { return u_; }
    const TrigPoly& lambda_v() const noexcept { return v_; }

private:
    TrigPoly u_, v_;
};

struct MayerVietorisImages {
    std::pair<DifferentialForm, DifferentialForm> alpha; // (σ|U, σ|V)
    DifferentialForm beta_alpha;                         // β(α(σ)), zero
    DifferentialForm connecting;                         // d_f λ_V ∧ σ
    DifferentialForm connecting_from_u;                  // −d_f λ_U ∧ σ
};

/// Restrictions are the identity on global trigonometric forms, so α and β
/// act on the same coefficient data; the connecting representative is d_fλ_V∧σ.
inline MayerVietorisImages mv_maps(const PartitionFixture& pf, const TwistData& tw, const DifferentialForm& sigma) {
    detail::check_dims(tw, sigma.dim());
    DifferentialForm du = d_f(tw, DifferentialForm::function(pf.lambda_u()));
    DifferentialForm dv = d_f(tw, DifferentialForm::function(pf.lambda_v()));
    if (!(du + dv).is_zero()) throw ComplexPropertyViolation("d_f λ_U + d_f λ_V ≠ 0");
    MayerVietorisImages out{{sigma, sigma}, sigma - sigma, wedge(dv, sigma), -wedge(du, sigma)};
    if (!out.beta_alpha.is_zero()) throw ComplexPropertyViolation("β∘α ≠ 0");
    if (out.connecting != out.connecting_from_u)
        throw ComplexPropertyViolation("d_f λ_V ∧ σ and −d_f λ_U ∧ σ disagree");
    return out;
}

// --- Künneth map -------------------------------------------------------------

inline AffineTorusMap projection(std::size_t n1, std::size_t n2, bool first) {
    std::size_t n = n1 + n2, k = first ? n1 : n2, off = first ? 0 : n1;
    std::vector<std::vector<int>> m(k, std::vector<int>(n, 0));
    for (std::size_t j = 0; j < k; ++j) m[j][off + j] = 1;
    return AffineTorusMap::linear(std::move(m), n);
}

/// Ψ(φ, ψ) = pr₁*φ ∧ pr₂*ψ on T^{n₁+n₂}.
inline DifferentialForm kunneth_map(const DifferentialForm& phi, const DifferentialForm& psi) {
    return wedge(projection(phi.dim(), psi.dim(), true).pullback(phi), projection(phi.dim(), psi.dim(), false).pullback(psi));
}

struct KunnethCheck {
    bool hypothesis_holds = false; // pr₁*f₁ = pr₂*f₂, which forces both to be the same constant
    DifferentialForm defect;       // d_{f,θ}Ψ(φ,ψ) − Ψ(d_{f₁,θ₁}φ, ψ) − (−1)^p Ψ(φ, d_{f₂,θ₂}ψ)
};

/// Tests the product identity with f := pr₁*f₁ and θ := pr₁*θ₁ + pr₂*θ₂.
/// The identity is only expected when the hypothesis flag is set.
inline KunnethCheck kunneth_check(const TwistData& t1, const TwistData& t2, const DifferentialForm& phi,
                                  const DifferentialForm& psi) {
    std::size_t n1 = t1.dim(), n2 = t2.dim();
    auto p1 = projection(n1, n2, true), p2 = projection(n1, n2, false);
    TrigPoly f = p1.pullback(t1.f());
    TwistData tw(f, p1.pullback(t1.theta()) + p2.pullback(t2.theta()));
    KunnethCheck out;
    out.hypothesis_holds = f == p2.pullback(t2.f());
    Scalar sign(phi.degree() % 2 ? -1 : 1);
    out.defect = d_f_theta(tw, kunneth_map(phi, psi)) - kunneth_map(d_f_theta(t1, phi), psi) -
                 sign * kunneth_map(phi, d_f_theta(t2, psi));
    return out;
}

// --- locally conformally Kähler fixtures -----------------------------------

/// (ω, f, θ, m) with dω = θ∧ω; θ₀ = mθ and θ₁ = (m+1)θ.
class LckFixture {
public:
    LckFixture(DifferentialForm omega, TwistData tw, Scalar m) : omega_(std::move(omega)), tw_(std::move(tw)), m_(std::move(m)) {
        if (omega_.degree() != 2) throw FixtureError("ω must be a 2-form");
        if (omega_.dim() != tw_.dim()) throw DimensionMismatch("ω and the twist live on different tori");
        if (ext_d(omega_) != wedge(tw_.theta(), omega_)) throw FixtureError("dω ≠ θ∧ω: θ is not the Lee form of ω");
    }
    const DifferentialForm& omega() const noexcept { return omega_; }
    const TwistData& twist() const noexcept { return tw_; }
    const Scalar& m() const noexcept { return m_; }
    TwistData theta0() const { return tw_.scaled_theta(m_); }
    TwistData theta1() const { return tw_.scaled_theta(m_ + Scalar(1)); }
    DifferentialForm lee_class() const { return tw_.f() * tw_.theta(); }
    DifferentialForm kahler_class() const { return (tw_.f() * tw_.f()) * omega_; }

private:
    DifferentialForm omega_;
    TwistData tw_;
    Scalar m_;
};

struct Certificate {
    std::string name;
    bool passed = false;
};

struct LckClasses {
    std::vector<Certificate> certificates;
    BasisSpec lee_basis, kahler_basis;
    SparseVector lee_coordinates, kahler_coordinates;

    bool all_passed() const {
        for (const auto& c : certificates)
            if (!c.passed) return false;
        return true;
    }
};

inline LckClasses lck_classes(const LckFixture& fx) {
    const TwistData& tw = fx.twist();
    DifferentialForm lee = fx.lee_class(), kahler = fx.kahler_class();
    std::vector<Certificate> certs{
        {"d_f(f theta) = 0", d_f(tw, lee).is_zero()},
        {"d_theta(omega) = 0", d_theta(tw, fx.omega()).is_zero()},
        {"d_f_theta(f^2 omega) = 0", d_f_theta(tw, kahler).is_zero()},
    };
    if (tw.dim() % 2 == 0) {
        BidegreeForm k = bidegree_split(kahler);
        certs.push_back({"del_f_theta(f^2 omega) = 0", del_f_theta(tw, k).is_zero()});
        certs.push_back({"delbar_f_theta(f^2 omega) = 0", delbar_f_theta(tw, k).is_zero()});
    }
    BasisSpec lb(tw.dim(), 1, lee.degree_vector()), kb(tw.dim(), 2, kahler.degree_vector());
    return {certs, lb, kb, Layout(lb).coordinates({lee}), Layout(kb).coordinates({kahler})};
}

/// d̂(φ, ψ) = (d_{f,θ₁}φ − f²ω∧ψ, −d_{f,θ₀}ψ)
inline std::pair<DifferentialForm, DifferentialForm> hat_d(const LckFixture& fx, const DifferentialForm& phi,
                                                           const DifferentialForm& psi) {
    if (psi.degree() != phi.degree() - 1 && !(phi.degree() == 0 && psi.is_zero()))
        throw DegreeMismatch("hat cochain needs deg ψ = deg φ − 1");
    DifferentialForm first = d_f_theta(fx.theta1(), phi);
    if (phi.degree() == 0) return {first, DifferentialForm(phi.dim(), 0)};
    return {first - wedge(fx.kahler_class(), psi), -d_f_theta(fx.theta0(), psi)};
}

inline CochainComplex hat_complex(const LckFixture& fx) {
    CochainComplex cx;
    cx.name = "hat d_f";
    std::size_t n = fx.twist().dim();
    cx.cutoff_dim = n;
    cx.max_degree = static_cast<int>(n) + 1;
    cx.growth = cutoff_max(fx.theta0().growth(), fx.theta1().growth());
    // The ψ slot sits lower by deg(f²ω) − w so that f²ω∧ψ never outgrows the
    // φ slot; otherwise the narrowed incoming map would miss boundary modes.
    Cutoff offset = fx.kahler_class().degree_vector() - cx.growth;
    for (int& a : offset) a = std::max(a, 0);
    cx.layout = [n, offset](int r, const Cutoff& D) {
        return Layout(std::vector<BasisSpec>{BasisSpec(n, r, D), BasisSpec(n, r - 1, D - offset)});
    };
    cx.differential = [fx, n](int r, const Cochain& x) {
        if (r == 0) {
            auto [a, b] = hat_d(fx, x.at(0), DifferentialForm(n, 0));
            return Cochain{a, DifferentialForm(n, 0)};
        }
        auto [a, b] = hat_d(fx, x.at(0), x.at(1));
        return Cochain{a, b};
    };
    cx.symbol = [fx](int r) {
        BlockSymbol s;
        s.entries.emplace_back(0, 0, operator_symbol(OperatorKind::d_f_theta, fx.theta1(), r));
        if (r > 0) {
            s.entries.emplace_back(0, 1, WedgeSymbol::constant_wedge(Scalar(-1) * fx.kahler_class()));
            s.entries.emplace_back(1, 1, operator_symbol(OperatorKind::d_f_theta, fx.theta0(), r - 1).negated());
        }
        return s;
    };
    return cx;
}

/// Chain map φ ↦ φ∧f²ω from (Ω, d_{f,θ₀}) to (Ω, d_{f,θ₁}), raising degree by 2.
inline ChainMap kahler_wedge_map(const LckFixture& fx) {
    DifferentialForm k = fx.kahler_class();
    return {"wedge f^2 omega", k.degree_vector(), [k](const Cochain& x) { return Cochain{wedge(x.at(0), k)}; }};
}

struct HatDegree {
    int degree = 0;
    std::optional<long> hat, h1, h0_below; // Ĥ^r, H^r_{θ₁}, H^{r−1}_{θ₀}
    std::optional<long> rank_before, rank_at; // rank δ^{r−2}, rank δ^{r−1}
    bool identity_holds = false;              // dimension identity for Ĥ^r
    bool split_holds = false;                 // Ĥ^r = H^r_{θ₁} ⊕ H^{r−1}_{θ₀}
};

struct HatReport {
    CohomologyReport hat, theta0, theta1;
    std::vector<std::vector<std::size_t>> delta_ranks; // [r][schedule index] rank of δ on H^r_{θ₀}
    std::vector<HatDegree> degrees;
};

inline std::optional<long> stable_value(const std::vector<long>& values, int s) {
    if (s <= 0 || values.size() < static_cast<std::size_t>(s)) return std::nullopt;
    for (std::size_t k = values.size() - static_cast<std::size_t>(s); k < values.size(); ++k)
        if (values[k] != values.back()) return std::nullopt;
    return values.back();
}

/// dim Ĥ^r against (h^r_{θ₁} − rank δ^{r−2}) + (h^{r−1}_{θ₀} − rank δ^{r−1}) at stabilized values.
inline HatReport hat_cohomology_and_delta(const LckFixture& fx, const std::vector<int>& degrees,
                                          const std::vector<int>& schedule, int stability = kDefaultStability) {
    int n = static_cast<int>(fx.twist().dim());
    std::vector<int> all;
    for (int r = 0; r <= n; ++r) all.push_back(r);
    auto c0 = single_torus_complex(OperatorKind::d_f_theta, fx.theta0());
    auto c1 = single_torus_complex(OperatorKind::d_f_theta, fx.theta1());
    c0.name = "d_f_theta0";
    c1.name = "d_f_theta1";
    HatReport rep;
    rep.hat = cohomology_dim(hat_complex(fx), degrees, schedule, stability);
    rep.theta1 = cohomology_dim(c1, all, schedule, stability);

    // θ₀ strands and δ share the cocycle bases, so they are computed together.
    // Commutation of δ is verified on every basis element of the first cutoff.
    check_schedule(schedule);
    ChainMap delta = kahler_wedge_map(fx);
    rep.theta0 = {c0.name, stability, {}};
    for (int r : all) rep.theta0.degrees.push_back({r, "H^" + std::to_string(r), {}, false, std::nullopt, {}});
    rep.delta_ranks.assign(all.size(), {});
    for (std::size_t si = 0; si < schedule.size(); ++si) {
        int D = schedule[si];
        for (int r : all) {
            std::vector<SparseVector> cocycles;
            CohomologyRow row = cohomology_row(c0, r, uniform_cutoff(c0.cutoff_dim, D), &cocycles);
            row.cutoff = D;
            rep.theta0.degrees[static_cast<std::size_t>(r)].rows.push_back(row);
            std::size_t k = r + 2 <= n ? induced_map_rank(c0, r, c1, r + 2, delta, D, &cocycles, si == 0) : 0;
            rep.delta_ranks[static_cast<std::size_t>(r)].push_back(k);
        }
    }
    for (auto& d : rep.theta0.degrees) finalize_stability(d, stability);
    std::vector<std::optional<long>> ranks;
    for (const auto& row : rep.delta_ranks) {
        std::vector<long> as_long(row.begin(), row.end());
        ranks.push_back(stable_value(as_long, stability));
    }
    auto h = [](const CohomologyReport& c, int r) -> std::optional<long> {
        for (const auto& d : c.degrees)
            if (d.degree == r) return d.stabilized_dim;
        return 0L; // outside 0..n the group is zero
    };
    auto rank_of = [&ranks, n](int r) -> std::optional<long> {
        if (r < 0 || r > n) return 0L;
        return ranks[static_cast<std::size_t>(r)];
    };
    for (int r : degrees) {
        HatDegree d;
        d.degree = r;
        d.hat = h(rep.hat, r);
        d.h1 = h(rep.theta1, r);
        d.h0_below = h(rep.theta0, r - 1);
        d.rank_before = rank_of(r - 2);
        d.rank_at = rank_of(r - 1);
        if (d.hat && d.h1 && d.h0_below && d.rank_before && d.rank_at) {
            d.identity_holds = *d.hat == (*d.h1 - *d.rank_before) + (*d.h0_below - *d.rank_at);
            d.split_holds = *d.hat == *d.h1 + *d.h0_below;
        }
        rep.degrees.push_back(d);
    }
    return rep;
}

// --- twisted-cohomology homomorphisms ----------------------------------------

struct CMapImage {
    DifferentialForm image;     // fθ∧φ
    bool certified = false;     // d_f(fθ∧φ) = 0
};

/// c([φ]) = [fθ∧φ] for d_{θ,f}-closed φ.
inline CMapImage c_map(const TwistData& tw, const DifferentialForm& phi) {
    if (!d_theta_f(tw, phi).is_zero()) throw InvalidInput("c map needs a d_theta_f-closed form");
    DifferentialForm image = wedge(tw.f() * tw.theta(), phi);
    return {image, d_f(tw, image).is_zero()};
}

/// fθ∧η: the generic element of the ideal subcomplex.
inline DifferentialForm ideal_element(const TwistData& tw, const DifferentialForm& eta) {
    return wedge(tw.f() * tw.theta(), eta);
}

/// On the ideal generated by fθ the two operators coincide.
inline bool ideal_operators_agree(const TwistData& tw, const DifferentialForm& eta) {
    DifferentialForm xi = ideal_element(tw, eta);
    return d_theta_f(tw, xi) == d_f(tw, xi);
}

/// Finds η with frequencies inside `cutoff` such that ξ = fθ∧η, if one exists.
inline std::optional<DifferentialForm> ideal_membership(const TwistData& tw, const DifferentialForm& xi,
                                                        const Cutoff& cutoff) {
    detail::check_dims(tw, xi.dim());
    if (xi.degree() < 1) return xi.is_zero() ? std::optional<DifferentialForm>(DifferentialForm(xi.dim(), 0)) : std::nullopt;
    Layout source(BasisSpec(tw.dim(), xi.degree() - 1, cutoff));
    Layout target(BasisSpec(tw.dim(), xi.degree(), cutoff_max(cutoff + tw.growth(), xi.degree_vector())));
    auto m = assemble("f theta wedge", lift([tw](const DifferentialForm& e) { return ideal_element(tw, e); }), source, target);
    SparseMatrix stacked(target.size(), source.size() + 1);
    for (std::size_t j = 0; j < source.size(); ++j) stacked.set_column(j, m.entries.column(j));
    SparseVector rhs = target.coordinates({xi});
    rhs.scale(Scalar(-1));
    stacked.set_column(source.size(), rhs);
    for (auto& v : kernel_basis(stacked)) {
        Scalar last = v.at(source.size());
        if (last.is_zero()) continue;
        v.scale(last.inverse());
        std::vector<SparseVector::Entry> head;
        for (const auto& e : v.entries())
            if (e.first < source.size()) head.push_back(e);
        return source.from_coordinates(SparseVector::from_entries(head)).at(0);
    }
    return std::nullopt;
}

// --- zero counts for circle fixtures --------------------------------------------

/// A function on S¹ with declared zeros at quarter turns t = qπ/2.
struct CircleZeroFixture {
    std::string name;
    TrigPoly f;
    std::vector<int> quarter_turn_roots;

    /// Evaluates f exactly at every declared root.
    bool roots_verified() const {
        if (f.dim() != 1) return false;
        for (int q : quarter_turn_roots) {
            std::vector<int> at{q};
            if (!f.evaluate_at_quarter_turns(at).is_zero()) return false;
        }
        return true;
    }
    long zero_count() const { return static_cast<long>(quarter_turn_roots.size()); }
};

} // namespace twcoh
