// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support/dense_oracle.hpp"
#include "twcoh/job.hpp"

using namespace twcoh;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<int> all_degrees(int top) {
    std::vector<int> v;
    for (int r = 0; r <= top; ++r) v.push_back(r);
    return v;
}

Fixture fixture(const std::string& name) { return materialize(find_fixture(name)); }

long stable(const CohomologyReport& rep, int r, Outcome& o) {
    const auto& d = rep.degree(r);
    o.require(d.stabilized, rep.complex_name + " H^" + std::to_string(r) + " did not stabilize");
    return d.stabilized_dim.value_or(-1);
}

std::string dims(const CohomologyReport& rep) {
    std::string s = "(";
    for (const auto& d : rep.degrees)
        s += (s.size() > 1 ? "," : "") + (d.stabilized_dim ? std::to_string(*d.stabilized_dim) : std::string("?"));
    return s + ")";
}

// --- hand Fourier-mode oracle -------------------------------------------------
// For constant θ = Σ a_j dt_j and f = 1, d_θ acts on the mode e^{i⟨k,t⟩} as
// (i k − a)∧, a Koszul complex: exact unless i k = a, where every form is a
// class. So dim H^r_θ(D) = C(n, r) · #{|k_j| ≤ D : i k = a}.
long koszul_count(const std::vector<Scalar>& a, int r, int D) {
    std::size_t n = a.size();
    long modes = 1;
    for (std::size_t j = 0; j < n; ++j) {
        // i k_j = a_j has an integer solution only for a_j = i·k_j with |k_j| ≤ D.
        Scalar k = a[j] * Scalar(0, -1);
        bool integral = sgn(k.im()) == 0 && k.re().get_den() == 1 && abs(k.re()) <= D;
        if (!integral) modes = 0;
    }
    long binom = 1;
    for (int j = 0; j < r; ++j) binom = binom * static_cast<long>(n - static_cast<std::size_t>(j)) / (j + 1);
    return r < 0 || r > static_cast<int>(n) ? 0 : modes * binom;
}

// --- dense oracle plumbing ---------------------------------------------------

std::vector<int> uniform(std::size_t n, int D) { return std::vector<int>(n, D); }

std::vector<int> vmax(std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::max(a[j], b[j]);
    return a;
}

/// Per-axis frequency reach of multiplying by a function, computed from its terms.
std::vector<int> reach(const TrigPoly& p) {
    std::vector<int> w(p.dim(), 0);
    for (const auto& [k, c] : p.terms())
        for (std::size_t j = 0; j < p.dim(); ++j) w[j] = std::max(w[j], std::abs(k.k[j]));
    return w;
}
std::vector<int> reach(const DifferentialForm& f) {
    std::vector<int> w(f.dim(), 0);
    for (const auto& [I, c] : f.components()) w = vmax(w, reach(c));
    return w;
}
std::vector<int> twist_reach(const TwistData& tw) {
    std::vector<int> w = reach(tw.f());
    if (!tw.theta().is_zero()) {
        auto t = reach(tw.theta());
        for (std::size_t j = 0; j < w.size(); ++j) w[j] += t[j];
    }
    return w;
}

/// Axes on which no datum depends: the operators never move frequencies there.
std::vector<std::size_t> conserved_axes(std::size_t n, const std::vector<std::vector<int>>& reaches) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
        bool free = true;
        for (const auto& w : reaches) free = free && w[j] == 0;
        if (free) out.push_back(j);
    }
    return out;
}

oracle::CochainOp single(std::function<DifferentialForm(const DifferentialForm&)> op) {
    return [op](const std::vector<DifferentialForm>& x) { return std::vector<DifferentialForm>{op(x.at(0))}; };
}

struct RowCompare {
    std::size_t compared = 0, mismatched = 0, invalid_fibers = 0;
    std::string first_mismatch;
    void add(const std::string& label, const CohomologyRow& engine, const oracle::Totals& ref) {
        ++compared;
        if (ref.escaped || !ref.covered) ++invalid_fibers;
        if (engine.kernel != ref.kernel || engine.incoming_rank != ref.incoming_rank || engine.quotient_by != ref.quotient_by) {
            ++mismatched;
            if (first_mismatch.empty())
                first_mismatch = label + " engine (" + std::to_string(engine.kernel) + "," + std::to_string(engine.incoming_rank) +
                                 "," + std::to_string(engine.quotient_by) + ") oracle (" + std::to_string(ref.kernel) + "," +
                                 std::to_string(ref.incoming_rank) + "," + std::to_string(ref.quotient_by) + ")";
        }
    }
};

/// Every degree of a single-torus operator at D against the dense oracle.
void compare_single(RowCompare& cmp, const std::string& label, OperatorKind kind, const TwistData& tw, int D) {
    std::size_t n = tw.dim();
    std::vector<int> w;
    switch (kind) {
    case OperatorKind::d: w = uniform(n, 0); break;
    case OperatorKind::d_theta: w = reach(tw.theta()); break;
    case OperatorKind::d_f: w = reach(tw.f()); break;
    default: w = twist_reach(tw);
    }
    auto op = single(form_operator(kind, tw));
    auto axes = conserved_axes(n, {reach(tw.f()), reach(tw.theta())});
    auto fibers = oracle::fibers(axes, D);
    oracle::LayoutFn layout = [n](int r, const std::vector<int>& c) { return std::vector<oracle::BlockSpec>{{n, r, c}}; };
    auto cx = single_torus_complex(kind, tw);
    for (int r = 0; r <= static_cast<int>(n); ++r)
        cmp.add(label + " " + to_string(kind) + " r=" + std::to_string(r), cohomology_row(cx, r, uniform_cutoff(n, D)),
                oracle::fibered_strand(op, layout, r, uniform(n, D), w, fibers, n));
}

void compare_relative(RowCompare& cmp, const std::string& label, const RelativePair& rp, int D) {
    const AffineTorusMap& mu = rp.map();
    std::size_t nt = mu.target_dim(), ns = mu.source_dim();
    TwistData src(mu.pullback(rp.target_twist().f()), mu.pullback(rp.target_twist().theta()));
    const TwistData& tgt = rp.target_twist();
    oracle::CochainOp op = [&](const std::vector<DifferentialForm>& x) {
        DifferentialForm second = mu.pullback(x.at(0));
        if (x.at(0).degree() > 0) second = second - d_f_theta(src, x.at(1));
        return std::vector<DifferentialForm>{d_f_theta(tgt, x.at(0)), second};
    };
    // Source cutoffs: |A|ᵀ D, so μ* of a target mode always has a slot. A negative target cutoff empties both.
    oracle::LayoutFn layout = [&](int r, const std::vector<int>& c) {
        std::vector<int> pushed(ns, 0);
        bool empty = false;
        for (int x : c) empty = empty || x < 0;
        for (std::size_t l = 0; l < ns; ++l)
            for (std::size_t j = 0; j < nt; ++j) pushed[l] += std::abs(mu.matrix()[j][l]) * c[j];
        if (empty) pushed.assign(ns, -1);
        return std::vector<oracle::BlockSpec>{{nt, r, c}, {ns, r - 1, pushed}};
    };
    auto cx = relative_complex(rp);
    for (int r = 0; r <= cx.max_degree + 1; ++r)
        cmp.add(label + " relative r=" + std::to_string(r), cohomology_row(cx, r, uniform_cutoff(nt, D)),
                oracle::fibered_strand(op, layout, r, uniform(nt, D), twist_reach(tgt), oracle::fibers({}, 0), 0));
}

void compare_hat(RowCompare& cmp, const std::string& label, const LckFixture& fx, int D) {
    std::size_t n = fx.twist().dim();
    TwistData t0 = fx.theta0(), t1 = fx.theta1();
    DifferentialForm kahler = (fx.twist().f() * fx.twist().f()) * fx.omega();
    oracle::CochainOp op = [&](const std::vector<DifferentialForm>& x) {
        if (x.at(0).degree() == 0) return std::vector<DifferentialForm>{d_f_theta(t1, x.at(0)), DifferentialForm(n, 0)};
        return std::vector<DifferentialForm>{d_f_theta(t1, x.at(0)) - wedge(kahler, x.at(1)), Scalar(-1) * d_f_theta(t0, x.at(1))};
    };
    std::vector<int> w = vmax(twist_reach(t0), twist_reach(t1));
    std::vector<int> offset = reach(kahler);
    for (std::size_t j = 0; j < n; ++j) offset[j] = std::max(offset[j] - w[j], 0);
    oracle::LayoutFn layout = [n, offset](int r, const std::vector<int>& c) {
        return std::vector<oracle::BlockSpec>{{n, r, c}, {n, r - 1, oracle::shift(c, offset, -1)}};
    };
    auto axes = conserved_axes(n, {reach(fx.twist().f()), reach(fx.twist().theta()), reach(fx.omega())});
    auto fibers = oracle::fibers(axes, D);
    auto cx = hat_complex(fx);
    for (int r = 0; r <= static_cast<int>(n) + 1; ++r)
        cmp.add(label + " hat r=" + std::to_string(r), cohomology_row(cx, r, uniform_cutoff(n, D)),
                oracle::fibered_strand(op, layout, r, uniform(n, D), w, fibers, n));

    // δ = ∧f²ω from θ₀- to θ₁-cohomology, two degrees up.
    auto c0 = single_torus_complex(OperatorKind::d_f_theta, t0), c1 = single_torus_complex(OperatorKind::d_f_theta, t1);
    ChainMap delta = kahler_wedge_map(fx);
    for (int r = 0; r + 2 <= static_cast<int>(n); ++r) {
        std::size_t escaped = 0;
        std::size_t ref = oracle::fibered_induced_rank(
            [t0](const DifferentialForm& x) { return d_f_theta(t0, x); }, [t1](const DifferentialForm& x) { return d_f_theta(t1, x); },
            [kahler](const DifferentialForm& x) { return wedge(x, kahler); }, n, r, r + 2, uniform(n, D), twist_reach(t0),
            reach(kahler), twist_reach(t1), fibers, &escaped);
        std::size_t got = induced_map_rank(c0, r, c1, r + 2, delta, D);
        ++cmp.compared;
        if (escaped) ++cmp.invalid_fibers;
        if (got != ref) {
            ++cmp.mismatched;
            if (cmp.first_mismatch.empty())
                cmp.first_mismatch = label + " delta r=" + std::to_string(r) + " engine " + std::to_string(got) + " oracle " +
                                     std::to_string(ref);
        }
    }
}

// --- criteria ------------------------------------------------------------------

constexpr std::uint64_t kSeed = 20240607;

void identity_suites(Outcome& o) {
    long checks = 0, failed = 0;
    int suites = 0;
    for (const auto& s : run_suites("all", kSeed, 100)) {
        ++suites;
        checks += s.checks;
        failed += s.failed;
        o.require(s.failed == 0, "suite " + s.name);
        o.require(s.trials >= 100, "suite " + s.name + " ran fewer than 100 trials");
    }
    o.detail << suites << " suites, " << checks << " exact checks, " << failed << " failures";
}

void cosine_h0(Outcome& o) {
    for (const char* name : {"circle-cosine", "circle-cosine-double"}) {
        Fixture fx = fixture(name);
        auto rep = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, fx.twist), {0}, schedule_range(4, 8));
        long h0 = stable(rep, 0, o);
        o.require(h0 == 0, std::string(name) + " H^0 = " + std::to_string(h0));
        o.detail << name << " H^0=" << h0 << "; ";
    }
}

void zeros_raise_h1(Outcome& o) {
    for (const char* name : {"circle-cosine", "circle-sine"}) {
        Fixture fx = fixture(name);
        auto sched = schedule_range(4, 8);
        auto twisted = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, fx.twist), {1}, sched);
        auto lich = cohomology_dim(single_torus_complex(OperatorKind::d_theta, fx.twist), {1}, sched);
        long h = stable(twisted, 1, o), hl = stable(lich, 1, o), zeros = fx.zeros().zero_count();
        o.require(fx.zeros().roots_verified(), std::string(name) + " roots");
        o.require(h == hl + zeros && h == 2, std::string(name) + " H^1_{f,theta}=" + std::to_string(h) +
                                                 " vs H^1_theta + #zeros = " + std::to_string(hl + zeros));
        o.detail << name << " H^1_{f,theta}=" << h << " H^1_theta=" << hl << " zeros=" << zeros << "; ";
    }
}

void nowhere_zero_factor(Outcome& o) {
    Fixture fx = fixture("circle-shifted-cosine");
    auto sched = schedule_range(4, 8);
    auto twisted = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, fx.twist), {0, 1}, sched);
    auto lich = cohomology_dim(single_torus_complex(OperatorKind::d_theta, fx.twist), {0, 1}, sched);
    for (int r : {0, 1}) {
        long a = stable(twisted, r, o), b = stable(lich, r, o);
        o.require(a == b, "H^" + std::to_string(r) + "_{f,theta}=" + std::to_string(a) + " but H^" + std::to_string(r) +
                              "_theta=" + std::to_string(b));
    }
    o.detail << "f=2+cos t: H_{f,theta}=" << dims(twisted) << " H_theta=" << dims(lich)
             << "; 1/f is not a trigonometric polynomial, so the isomorphism does not survive truncation";
}

void lichnerowicz_baseline(Outcome& o) {
    auto sched = default_schedule();
    Fixture flat = fixture("torus2-flat"), lich = fixture("torus2-lichnerowicz");
    auto a = cohomology_dim(single_torus_complex(OperatorKind::d_f_theta, flat.twist), all_degrees(2), sched);
    std::vector<long> want{1, 2, 1};
    for (const auto& d : a.degrees)
        for (const auto& row : d.rows)
            o.require(row.dim == want[static_cast<std::size_t>(d.degree)],
                      "flat H^" + std::to_string(d.degree) + " at D=" + std::to_string(row.cutoff));
    auto b = cohomology_dim(single_torus_complex(OperatorKind::d_theta, lich.twist), all_degrees(2), sched);
    // Hand oracle: θ = dt₁ has constant coefficients a = (1, 0); θ = 0 has a = (0, 0).
    std::vector<Scalar> a_lich{Scalar(1), Scalar(0)}, a_flat{Scalar(0), Scalar(0)};
    for (const auto& d : b.degrees)
        for (const auto& row : d.rows) {
            o.require(row.dim == 0, "theta=dt1 H^" + std::to_string(d.degree) + " at D=" + std::to_string(row.cutoff));
            o.require(row.dim == koszul_count(a_lich, d.degree, row.cutoff), "hand oracle (theta=dt1)");
        }
    for (const auto& d : a.degrees)
        for (const auto& row : d.rows) o.require(row.dim == koszul_count(a_flat, d.degree, row.cutoff), "hand oracle (flat)");
    o.detail << "flat " << dims(a) << " at D=2..8; theta=dt1 " << dims(b) << "; hand mode oracle agrees";
}

void relative_complex_checks(Outcome& o) {
    auto sched = schedule_range(2, 6);
    Fixture id = fixture("circle-identity-map");
    RelativePair rp = id.relative();
    int top = static_cast<int>(std::max(rp.map().target_dim(), rp.map().source_dim() + 1));
    auto rel = rel_cohomology_dim(rp, all_degrees(top + 2), sched);
    for (const auto& d : rel.degrees) {
        o.require(d.stabilized && d.stabilized_dim == 0L, "H^" + std::to_string(d.degree) + "(id) != 0");
        if (d.degree > top)
            for (const auto& row : d.rows) o.require(row.dim == 0, "vanishing above the top degree");
    }
    Fixture dbl = fixture("circle-doubling-map");
    RelativePair rd = dbl.relative();
    auto rel2 = rel_cohomology_dim(rd, {top + 1, top + 2}, sched);
    for (const auto& d : rel2.degrees)
        for (const auto& row : d.rows) o.require(row.dim == 0, "doubling map: vanishing above the top degree");
    EulerCheck e = relative_euler_check(rd, sched);
    o.require(e.complete, "doubling map strands did not all stabilize");
    o.require(e.alternating_sum == 0, "Euler sum " + std::to_string(e.alternating_sum));
    o.detail << "H(id)=" << dims(rel) << "; doubling map H(mu)=(";
    for (std::size_t r = 0; r < e.relative.size(); ++r) o.detail << (r ? "," : "") << e.relative[r];
    o.detail << ") Euler sum " << e.alternating_sum;
}

void lck_suite(Outcome& o) {
    struct Case {
        const char* name;
        std::vector<int> schedule;
    };
    for (const Case& c : {Case{"torus4-lck", schedule_range(3, 5)}, Case{"torus2-lck-exact", schedule_range(2, 6)}}) {
        Fixture fx = fixture(c.name);
        LckFixture lf = fx.lck();
        auto classes = lck_classes(lf);
        for (const auto& cert : classes.certificates) o.require(cert.passed, std::string(c.name) + " certificate " + cert.name);
        int n = static_cast<int>(lf.twist().dim());
        HatReport rep = hat_cohomology_and_delta(lf, all_degrees(n + 1), c.schedule);
        for (const auto& d : rep.degrees) {
            bool complete = d.hat && d.h1 && d.h0_below && d.rank_before && d.rank_at;
            o.require(complete, std::string(c.name) + " degree " + std::to_string(d.degree) + " did not stabilize");
            o.require(d.identity_holds, std::string(c.name) + " dimension identity at degree " + std::to_string(d.degree));
            if (fx.exact_lck()) o.require(d.split_holds, std::string(c.name) + " split at degree " + std::to_string(d.degree));
        }
        o.detail << c.name << " hat=" << dims(rep.hat) << "; ";
    }
}

void twisted_suite(Outcome& o) {
    // f = 1, θ = 0: the quotient is de Rham cohomology.
    for (std::size_t n : {1u, 2u, 3u}) {
        TwistData tw = TwistData::untwisted(TrigPoly::constant(n, Scalar(1)));
        auto rep = twisted_cohomology_dim(tw, all_degrees(static_cast<int>(n)), schedule_range(2, 5));
        for (const auto& d : rep.degrees) {
            long binom = 1;
            for (int j = 0; j < d.degree; ++j) binom = binom * static_cast<long>(n - static_cast<std::size_t>(j)) / (j + 1);
            o.require(d.stabilized_dim == binom, "T^" + std::to_string(n) + " H^" + std::to_string(d.degree) + " != de Rham");
        }
    }
    // c map on cocycles found by the engine.
    std::size_t checked = 0, certified = 0;
    for (const char* name : {"torus2-lck", "circle-cosine", "torus2-lichnerowicz"}) {
        Fixture fx = fixture(name);
        auto cx = single_torus_complex(OperatorKind::d_theta_f, fx.twist);
        Cutoff D = uniform_cutoff(fx.twist.dim(), 3);
        for (int r = 0; r <= cx.max_degree; ++r) {
            std::vector<SparseVector> cocycles;
            cohomology_row(cx, r, D, &cocycles);
            Layout layout = cx.layout_at(r, D);
            for (const auto& k : cocycles) {
                ++checked;
                if (c_map(fx.twist, layout.from_coordinates(k).at(0)).certified) ++certified;
            }
        }
    }
    o.require(checked >= 20, "fewer than 20 closed forms");
    o.require(certified == checked, "c map certificate");
    // Dense cross-check at D = 2.
    RowCompare cmp;
    for (const char* name : {"circle-cosine", "circle-sine", "torus2-lck", "torus2-lichnerowicz"})
        compare_single(cmp, name, OperatorKind::d_theta_f, fixture(name).twist, 2);
    o.require(cmp.mismatched == 0, cmp.first_mismatch);
    o.detail << "de Rham dims on T^1..T^3; c map certified on " << certified << "/" << checked << " cocycles; " << cmp.compared
             << " strands match the dense oracle";
}

void oracle_equivalence(Outcome& o) {
    RowCompare cmp;
    for (const auto& spec : builtin_fixtures()) {
        Fixture fx = materialize(spec);
        for (auto kind : {OperatorKind::d, OperatorKind::d_theta, OperatorKind::d_f, OperatorKind::d_f_theta,
                          OperatorKind::d_theta_f})
            compare_single(cmp, spec.name, kind, fx.twist, 2);
        if (fx.map) compare_relative(cmp, spec.name, fx.relative(), 2);
        if (fx.has_lck()) compare_hat(cmp, spec.name, fx.lck(), 2);
    }
    o.require(cmp.mismatched == 0, cmp.first_mismatch);
    o.require(cmp.invalid_fibers == 0, "a frequency fiber was not invariant");
    o.detail << builtin_fixtures().size() << " fixtures, " << cmp.compared << " kernel/rank triples and delta ranks, "
             << cmp.mismatched << " mismatches";
}

void determinism(Outcome& o) {
    std::vector<JobConfig> jobs;
    JobConfig v;
    v.command = "verify", v.suite = "all", v.trials = 25, v.seed = 7;
    jobs.push_back(v);
    JobConfig c;
    c.command = "cohomology", c.fixture = "circle-cosine", c.seed = 7;
    jobs.push_back(c);
    JobConfig l;
    l.command = "lck", l.fixture = "torus2-lck", l.dmin = 2, l.dmax = 5;
    jobs.push_back(l);
    JobConfig t;
    t.command = "twisted", t.fixture = "torus2-lck", t.dmin = 2, t.dmax = 4;
    jobs.push_back(t);
    for (const auto& j : jobs) {
        std::string first = dump(run(j).report), second = dump(run(j).report);
        o.require(first == second, j.command + " report differs between runs");
    }
    o.detail << jobs.size() << " jobs, each run twice, byte-identical";
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_seconds; // 0 = none stated
        std::function<void(Outcome&)> body;
    };
    std::vector<Criterion> criteria{
        {1, "identity suites, 100 exact trials each", 120, identity_suites},
        {2, "f = cos t, theta = dt and 2dt: H^0 = 0", 10, cosine_h0},
        {3, "zeros of f add to H^1 (cos t and sin t)", 30, zeros_raise_h1},
        {4, "nowhere-zero f = 2 + cos t: H_{f,theta} = H_theta", 0, nowhere_zero_factor},
        {5, "Lichnerowicz baseline on T^2", 0, lichnerowicz_baseline},
        {6, "relative complex: identity, vanishing, Euler sum", 0, relative_complex_checks},
        {7, "l.c.K. certificates, dimension identity and split", 300, lck_suite},
        {8, "twisted quotient and c map", 0, twisted_suite},
        {9, "dense oracle equivalence at D = 2", 0, oracle_equivalence},
        {10, "byte-identical reports", 0, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail << " [error: " << e.what() << "]";
        }
        double secs = seconds_since(t0);
        if (c.budget_seconds > 0 && secs > c.budget_seconds) {
            o.passed = false;
            o.detail << " [over the " << c.budget_seconds << " s budget]";
        }
        if (!o.passed) ++failures;
        std::printf("criterion %2d: %s  %s (%.1f s) -- %s\n", c.id, o.passed ? "PASS" : "FAIL", c.title, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
