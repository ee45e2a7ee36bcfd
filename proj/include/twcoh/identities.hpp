#pragma once

#include <functional>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "random.hpp"

namespace twcoh {

/// Outcome of one named identity suite. Every check is an exact equality.
struct SuiteResult {
    std::string name;
    std::string description;
    int trials = 0;
    long checks = 0;
    long passed = 0;
    long failed = 0;
    std::vector<std::string> failures; // first few, "trial k: identity"

    bool ok() const { return failed == 0; }
};

namespace detail {

class Recorder {
public:
    explicit Recorder(SuiteResult& out) : out_(out) {}
    void set_trial(int t) { trial_ = t; }
    void check(bool holds, const char* identity) {
        ++out_.checks;
        if (holds) {
            ++out_.passed;
            return;
        }
        ++out_.failed;
        if (out_.failures.size() < 8) out_.failures.push_back("trial " + std::to_string(trial_) + ": " + identity);
    }

private:
    SuiteResult& out_;
    int trial_ = 0;
};

inline Scalar parity_sign(int p) { return Scalar(p % 2 ? -1 : 1); }
inline TrigPoly one(std::size_t n) { return TrigPoly::constant(n, Scalar(1)); }
inline std::size_t small_dim(RandomInputs& gen) { return static_cast<std::size_t>(gen.uniform(1, 3)); }

inline const std::vector<AffineTorusMap>& sample_maps() {
    static const std::vector<AffineTorusMap> maps{
        AffineTorusMap::linear({{2}}, 1),
        AffineTorusMap({{1, 1}, {0, 1}}, {mpq_class(1, 4), mpq_class(0)}, 2),
        AffineTorusMap::linear({{1}, {3}}, 1),
        AffineTorusMap::linear({{1, -1}}, 2),
        AffineTorusMap({{-1, 0}, {0, 2}}, {mpq_class(1, 2), mpq_class(3, 4)}, 2),
    };
    return maps;
}

/// Random l.c.K. data: ω = g(t₁,t₂)dt₁∧dt₂ and θ a constant combination of
/// dt₁, dt₂, so dω = 0 = θ∧ω; f and m are arbitrary.
inline LckFixture random_lck(RandomInputs& gen, std::size_t n) {
    TrigPoly g(n);
    int terms = gen.uniform(1, 3);
    for (int t = 0; t < terms; ++t) {
        FreqVector k(n);
        k[0] = gen.uniform(-2, 2);
        k[1] = gen.uniform(-2, 2);
        g.add_term(k, gen.scalar());
    }
    DifferentialForm theta(n, 1);
    theta.add({0}, TrigPoly::constant(n, gen.nonzero_scalar()));
    if (gen.uniform(0, 1)) theta.add({1}, TrigPoly::constant(n, gen.scalar()));
    return {DifferentialForm::basis(n, {0, 1}, g), TwistData(gen.poly(n), theta), gen.scalar()};
}

using TrialBody = std::function<void(RandomInputs&, Recorder&)>;

struct SuiteDef {
    const char* name;
    const char* description;
    TrialBody body;
};

inline const std::vector<SuiteDef>& suite_registry() {
    static const std::vector<SuiteDef> defs{
        {"complex-property", "d_{f,θ}∘d_{f,θ}, d_f∘d_f and d_θ∘d_θ vanish",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto phi = gen.form_up_to(n, 2);
             rec.check(d_f_theta(tw, d_f_theta(tw, phi)).is_zero(), "d_f_theta squared is zero");
             rec.check(d_f(tw, d_f(tw, phi)).is_zero(), "d_f squared is zero");
             rec.check(d_theta(tw, d_theta(tw, phi)).is_zero(), "d_theta squared is zero");
         }},
        {"function-algebra", "d_{f,θ} is additive and obeys the product rule in f",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto g = gen.poly(n);
             auto phi = gen.form_up_to(n, 2);
             rec.check(d_f_theta(tw.with_f(tw.f() + g), phi) == d_f_theta(tw, phi) + d_f_theta(tw.with_f(g), phi),
                       "d_{f+g,theta} = d_{f,theta} + d_{g,theta}");
             rec.check(d_f_theta(tw.with_f(Scalar(-1) * tw.f()), phi) == Scalar(-1) * d_f_theta(tw, phi),
                       "d_{-f,theta} = -d_{f,theta}");
             rec.check(d_f_theta(tw.with_f(tw.f() * g), phi) ==
                           tw.f() * d_f_theta(tw.with_f(g), phi) + g * d_f_theta(tw, phi) - (tw.f() * g) * d_theta(tw, phi),
                       "d_{fg,theta} = f d_{g,theta} + g d_{f,theta} - fg d_theta");
         }},
        {"wedge-rules", "antiderivation laws of d_θ and d_f and the split wedge rule for d_{f,θ+θ'}",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto theta2 = gen.closed_one_form(n);
             auto phi = gen.form_up_to(n, 2), psi = gen.form_up_to(n, 2);
             Scalar s = parity_sign(phi.degree());
             rec.check(d_theta(tw, wedge(phi, psi)) == wedge(d_theta(tw, phi), psi) + s * wedge(phi, ext_d(psi)),
                       "d_theta(phi^psi) = d_theta phi ^ psi + (-1)^p phi ^ d psi");
             rec.check(d_f(tw, wedge(phi, psi)) == wedge(d_f(tw, phi), psi) + s * wedge(phi, d_f(tw, psi)),
                       "d_f(phi^psi) = d_f phi ^ psi + (-1)^p phi ^ d_f psi");
             rec.check(d_f_theta(tw, wedge(phi, psi)) == wedge(d_f(tw, phi), psi) + s * wedge(phi, d_f_theta(tw, psi)),
                       "d_{f,theta}(phi^psi) = d_f phi ^ psi + (-1)^p phi ^ d_{f,theta} psi");
             auto sum = tw.with_theta(tw.theta() + theta2);
             rec.check(d_f_theta(sum, wedge(phi, psi)) ==
                           wedge(d_f_theta(tw, phi), psi) + s * wedge(phi, d_f_theta(tw.with_theta(theta2), psi)),
                       "d_{f,theta+theta'}(phi^psi) = d_{f,theta}phi ^ psi + (-1)^p phi ^ d_{f,theta'}psi");
         }},
        {"alternate-form", "d_{f,θ}φ = f d_θφ − r df∧φ",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto phi = gen.form_up_to(n, 3);
             rec.check(d_f_theta(tw, phi) == d_f_theta_alt(tw, phi), "d_{f,theta} = f d_theta - r df^");
         }},
        {"singular-forms", "d_{f,θ}(f^r φ) = f^{r+1} d_θ φ",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto phi = gen.form_up_to(n, 2);
             auto r = static_cast<unsigned>(phi.degree());
             rec.check(d_f_theta(tw, chi_map(tw, phi)) == pow(tw.f(), r + 1) * d_theta(tw, phi),
                       "d_{f,theta}(f^r phi) = f^{r+1} d_theta phi");
         }},
        {"unit-rescaling", "φ ↦ φ/h^r intertwines d_{fh,θ} and d_{f,θ} for a unit h",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto phi = gen.form_up_to(n, 2);
             TrigPoly h = gen.unit(n);
             rec.check(phi_map(h, d_f_theta(tw.with_f(tw.f() * h), phi)) == d_f_theta(tw, phi_map(h, phi)),
                       "Phi d_{fh,theta} = d_{f,theta} Phi");
         }},
        {"gauge", "d_{f,θ}(uφ) = u d_{f,θ−u⁻¹du}φ for a unit u",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto phi = gen.form_up_to(n, 2);
             TrigPoly u = gen.unit(n);
             auto [uphi, gauged] = unit_gauge(tw, u, phi);
             rec.check(d_f_theta(tw, uphi) == u * d_f_theta(gauged, phi), "d_{f,theta}(u phi) = u d_{f,theta - du/u} phi");
         }},
        {"pullback", "affine pullbacks commute with d_f and d_{f,θ}",
         [](RandomInputs& gen, Recorder& rec) {
             const auto& maps = sample_maps();
             const auto& mu = maps[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(maps.size()) - 1))];
             auto tw = gen.twist(mu.target_dim());
             auto phi = gen.form_up_to(mu.target_dim(), 2);
             rec.check(d_f(mu.pullback(tw.f()), mu.pullback(phi)) == mu.pullback(d_f(tw, phi)), "d_{mu*f} mu* = mu* d_f");
             rec.check(d_f_theta(pullback_twist(mu, tw), mu.pullback(phi)) == mu.pullback(d_f_theta(tw, phi)),
                       "d_{mu*f,mu*theta} mu* = mu* d_{f,theta}");
         }},
        {"pair-morphism", "Φ*(φ) = μ*φ/α^r is a chain map between the paired operators",
         [](RandomInputs& gen, Recorder& rec) {
             const auto& maps = sample_maps();
             const auto& mu = maps[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(maps.size()) - 1))];
             auto tw = gen.twist(mu.target_dim());
             auto phi = gen.form_up_to(mu.target_dim(), 2);
             PairMorphism m(mu, gen.unit(mu.source_dim()));
             rec.check(morphism_pullback(m, d_f_theta(tw, phi)) == d_f_theta(m.source_twist(tw), morphism_pullback(m, phi)),
                       "Phi* d_{f',theta'} = d_{f,theta} Phi*");
         }},
        {"twisted-operator", "algebra of d_{θ,f} = f d_θ − r d_θf∧",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             auto g = gen.poly(n);
             auto phi = gen.form_up_to(n, 2), psi = gen.form_up_to(n, 2);
             Scalar r(phi.degree());
             auto tg = tw.with_f(g);
             auto t1 = tw.with_f(one(n));
             rec.check(d_theta_f(tw.with_f(tw.f() + g), phi) == d_theta_f(tw, phi) + d_theta_f(tg, phi),
                       "d_{theta,f+g} = d_{theta,f} + d_{theta,g}");
             rec.check(d_theta_f(t1, phi) == d_theta(tw, phi) + r * wedge(tw.theta(), phi),
                       "d_{theta,1} = d_theta + r theta^");
             rec.check(d_theta_f(tw.with_f(tw.f() * g), phi) ==
                           tw.f() * d_theta_f(tg, phi) + g * d_theta_f(tw, phi) - (tw.f() * g) * d_theta_f(t1, phi),
                       "d_{theta,fg} = f d_{theta,g} + g d_{theta,f} - fg d_{theta,1}");
             rec.check(d_theta_f(tw, wedge(phi, psi)) == wedge(d_theta_f(tw, phi), psi) +
                                                             parity_sign(phi.degree()) * wedge(phi, d_theta_f(tw, psi)) +
                                                             tw.f() * wedge(tw.theta(), wedge(phi, psi)),
                       "d_{theta,f}(phi^psi) = d_{theta,f}phi ^ psi + (-1)^p phi ^ d_{theta,f}psi + f theta ^ phi ^ psi");
             rec.check(d_theta_f(tw, d_theta_f(tw, phi)) == tw.f() * wedge(tw.theta(), d_f(tw, phi)),
                       "d_{theta,f} squared = f theta ^ d_f");
             rec.check(d_theta_f(tw, phi) == d_f_theta(tw, phi) + r * (tw.f() * wedge(tw.theta(), phi)),
                       "d_{theta,f} = d_{f,theta} + r f theta^");
             auto eta = gen.form_up_to(n, 1);
             rec.check(ideal_operators_agree(tw, eta), "d_{theta,f} = d_f on the ideal f theta ^ Omega");
         }},
        {"lee-class", "d_f(fθ) = 0",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             auto tw = gen.twist(n);
             rec.check(d_f(tw, tw.f() * tw.theta()).is_zero(), "d_f(f theta) = 0");
         }},
        {"bidegree", "∂_{f,θ} + ∂̄_{f,θ} = d_{f,θ} with the bidegree and square-zero relations",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = gen.uniform(0, 3) ? 2 : 4;
             auto tw = gen.twist(n);
             auto phi = bidegree_split(gen.form_up_to(n, 2));
             auto a = del_f_theta(tw, phi), b = delbar_f_theta(tw, phi);
             rec.check((a + b).to_form() == d_f_theta(tw, phi.to_form()), "del_{f,theta} + delbar_{f,theta} = d_{f,theta}");
             rec.check(del_f_theta(tw, a).is_zero(), "del_{f,theta} squared is zero");
             rec.check(delbar_f_theta(tw, b).is_zero(), "delbar_{f,theta} squared is zero");
             rec.check((del_f_theta(tw, b) + delbar_f_theta(tw, a)).is_zero(), "del delbar + delbar del = 0");
             bool types = true;
             for (auto [p, q] : phi.bidegrees()) {
                 auto part = phi.part(p, q);
                 for (auto pq : del_f_theta(tw, part).bidegrees()) types = types && pq == std::make_pair(p + 1, q);
                 for (auto pq : delbar_f_theta(tw, part).bidegrees()) types = types && pq == std::make_pair(p, q + 1);
             }
             rec.check(types, "del raises p, delbar raises q");
         }},
        {"relative", "the relative differential squares to zero",
         [](RandomInputs& gen, Recorder& rec) {
             const auto& maps = sample_maps();
             const auto& mu = maps[static_cast<std::size_t>(gen.uniform(0, static_cast<int>(maps.size()) - 1))];
             RelativePair rp(mu, gen.twist(mu.target_dim()));
             int r = gen.uniform(1, 2);
             auto phi = gen.form(mu.target_dim(), r);
             auto psi = gen.form(mu.source_dim(), r - 1);
             auto [a, b] = rel_d(rp, phi, psi);
             auto [c, e] = rel_d(rp, a, b);
             rec.check(c.is_zero() && e.is_zero(), "relative d squared is zero");
         }},
        {"lck-pair", "the l.c.K. pair differential squares to zero",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = static_cast<std::size_t>(gen.uniform(2, 4));
             auto fx = random_lck(gen, n);
             int r = gen.uniform(1, 2);
             auto phi = gen.form(n, r);
             auto psi = gen.form(n, r - 1);
             auto [a, b] = hat_d(fx, phi, psi);
             auto [c, e] = hat_d(fx, a, b);
             rec.check(c.is_zero() && e.is_zero(), "hat d squared is zero");
             rec.check(d_f_theta(fx.twist(), fx.kahler_class()).is_zero(), "d_{f,theta}(f^2 omega) = 0");
         }},
        {"kunneth", "the product map is a chain map when the two functions agree",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n1 = static_cast<std::size_t>(gen.uniform(1, 2)), n2 = static_cast<std::size_t>(gen.uniform(1, 2));
             Scalar c = gen.nonzero_scalar();
             TwistData t1(TrigPoly::constant(n1, c), gen.closed_one_form(n1));
             TwistData t2(TrigPoly::constant(n2, c), gen.closed_one_form(n2));
             auto check = kunneth_check(t1, t2, gen.form_up_to(n1, 1), gen.form_up_to(n2, 1));
             rec.check(check.hypothesis_holds && check.defect.is_zero(), "d_{f,theta} Psi = Psi(d phi, psi) + (-1)^p Psi(phi, d psi)");
         }},
        {"mayer-vietoris", "partition-of-unity maps: β∘α = 0 and both connecting representatives agree",
         [](RandomInputs& gen, Recorder& rec) {
             std::size_t n = small_dim(gen);
             TrigPoly lu = gen.poly(n);
             PartitionFixture pf(lu, one(n) - lu);
             auto tw = gen.twist(n);
             auto sigma = gen.form_up_to(n, 2);
             bool holds = true;
             try {
                 auto img = mv_maps(pf, tw, sigma);
                 holds = img.beta_alpha.is_zero() && img.connecting == img.connecting_from_u;
             } catch (const ComplexPropertyViolation&) {
                 holds = false;
             }
             rec.check(holds, "Mayer-Vietoris cochain identities");
         }},
    };
    return defs;
}

} // namespace detail

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& d : detail::suite_registry()) out.emplace_back(d.name);
    return out;
}

/// Runs one named suite; "all" is handled by run_suites.
inline SuiteResult run_suite(const std::string& name, std::uint64_t seed, int trials) {
    if (trials < 1) throw InvalidInput("trial count must be positive");
    for (const auto& d : detail::suite_registry()) {
        if (name != d.name) continue;
        SuiteResult out{d.name, d.description, trials, 0, 0, 0, {}};
        detail::Recorder rec(out);
        RandomInputs gen(seed);
        for (int t = 0; t < trials; ++t) {
            rec.set_trial(t);
            d.body(gen, rec);
        }
        return out;
    }
    std::string known;
    for (const auto& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidInput("unknown identity suite '" + name + "' (known: " + known + ", all)");
}

inline std::vector<SuiteResult> run_suites(const std::string& name, std::uint64_t seed, int trials) {
    if (name != "all") return {run_suite(name, seed, trials)};
    std::vector<SuiteResult> out;
    for (const auto& n : suite_names()) out.push_back(run_suite(n, seed, trials));
    return out;
}

} // namespace twcoh
