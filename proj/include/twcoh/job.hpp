#pragma once

// One CLI invocation: a JobConfig (from a JSON config file and/or flags) is
// resolved against an optional fixture, run, and turned into a report with
// an exit code. 0 = every check passed, 1 = a mathematical check failed,
// 2 = the job could not be set up.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace twcoh {

enum ExitCode { kExitOk = 0, kExitCheckFailed = 1, kExitConfigError = 2 };

struct JobConfig {
    std::string command;
    std::optional<std::string> fixture, catalogue;
    std::optional<std::string> model, f, theta, omega, omega_exact_from, m, map, op, suite;
    std::optional<std::vector<int>> degrees;
    std::optional<int> dmin, dmax, stability, trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::map<int, long>> expect;
    std::optional<std::pair<int, int>> bidegree;
    std::optional<int> c_map_limit;
    std::optional<std::string> out;

    /// Fields set in `over` win.
    void merge(const JobConfig& over) {
        if (!over.command.empty()) command = over.command;
        auto take = [](auto& mine, const auto& theirs) {
            if (theirs) mine = theirs;
        };
        take(fixture, over.fixture), take(catalogue, over.catalogue), take(model, over.model), take(f, over.f);
        take(theta, over.theta), take(omega, over.omega), take(omega_exact_from, over.omega_exact_from);
        take(m, over.m), take(map, over.map), take(op, over.op), take(suite, over.suite), take(degrees, over.degrees);
        take(dmin, over.dmin), take(dmax, over.dmax), take(stability, over.stability), take(trials, over.trials);
        take(seed, over.seed), take(expect, over.expect), take(bidegree, over.bidegree);
        take(c_map_limit, over.c_map_limit), take(out, over.out);
    }
};

inline const std::vector<std::string>& job_commands() {
    static const std::vector<std::string> c{"verify", "cohomology", "relative", "lck", "twisted", "fixtures"};
    return c;
}

inline constexpr std::uint64_t kDefaultSeed = 20240607;
inline constexpr int kDefaultTrials = 100;

/// "0=0,1=2" → {0:0, 1:2}
inline std::map<int, long> parse_expectations(const std::string& text) {
    std::map<int, long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        try {
            if (eq == std::string::npos) throw std::invalid_argument(item);
            std::size_t used = 0;
            int r = std::stoi(item.substr(0, eq), &used);
            long d = std::stol(item.substr(eq + 1));
            out[r] = d;
        } catch (const std::logic_error&) {
            throw InvalidInput("expectations look like \"0=0,1=2\", got '" + item + "'");
        }
    }
    return out;
}

inline std::vector<int> parse_degree_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            throw InvalidInput("degrees look like \"0,1,2\", got '" + text + "'");
        out.push_back(std::stoi(item));
    }
    return out;
}

/// Keys mirror the long CLI flags.
inline JobConfig job_config_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    static const std::vector<std::string> known{"command", "fixture", "catalogue", "model",  "f",      "theta",
                                                "omega",   "omega_exact_from", "m", "map", "operator", "suite",
                                                "degrees", "Dmin",    "Dmax",      "stability", "trials", "seed",
                                                "expect",  "bidegree", "c_map_limit", "out"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("unknown config key '" + k + "'");
    try {
        JobConfig c;
        c.command = j.value("command", "");
        auto str = [&j](const char* key) { return detail::optional_field<std::string>(j, key); };
        c.fixture = str("fixture"), c.catalogue = str("catalogue"), c.f = str("f"), c.theta = str("theta");
        c.omega = str("omega"), c.omega_exact_from = str("omega_exact_from"), c.map = str("map");
        c.op = str("operator"), c.suite = str("suite"), c.out = str("out");
        if (j.contains("model"))
            c.model = j["model"].is_number() ? std::to_string(j["model"].get<int>()) : j["model"].get<std::string>();
        if (j.contains("m")) c.m = j["m"].is_number() ? std::to_string(j["m"].get<long>()) : j["m"].get<std::string>();
        c.degrees = detail::optional_field<std::vector<int>>(j, "degrees");
        c.dmin = detail::optional_field<int>(j, "Dmin"), c.dmax = detail::optional_field<int>(j, "Dmax");
        c.stability = detail::optional_field<int>(j, "stability"), c.trials = detail::optional_field<int>(j, "trials");
        c.c_map_limit = detail::optional_field<int>(j, "c_map_limit");
        c.seed = detail::optional_field<std::uint64_t>(j, "seed");
        if (j.contains("expect")) {
            std::map<int, long> e;
            for (const auto& [k, v] : j["expect"].items()) e[std::stoi(k)] = v.get<long>();
            c.expect = e;
        }
        if (j.contains("bidegree")) {
            auto b = j["bidegree"].get<std::vector<int>>();
            if (b.size() != 2) throw InvalidInput("bidegree needs two entries [p, q]");
            c.bidegree = std::make_pair(b[0], b[1]);
        }
        return c;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed config: ") + e.what());
    } catch (const std::logic_error& e) {
        throw InvalidInput(std::string("malformed config: ") + e.what());
    }
}

inline JobConfig load_job_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config '" + path + "'");
    try {
        return job_config_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
        throw InvalidInput("config '" + path + "' is not valid JSON: " + e.what());
    }
}

struct JobResult {
    Json report;
    int exit_code = kExitOk;
};

namespace job_detail {

struct Checks {
    Json list = Json::array();
    bool all = true;
    void add(const std::string& name, bool passed, Json detail = nullptr) {
        Json c{{"check", name}, {"passed", passed}};
        if (!detail.is_null()) c["detail"] = std::move(detail);
        list.push_back(std::move(c));
        all = all && passed;
    }
};

inline Json stabilization(const CohomologyReport& rep) {
    Json out = Json::array();
    for (const auto& d : rep.degrees)
        out.push_back({{"degree", d.degree}, {"stabilized", d.stabilized}, {"dim", optional_json(d.stabilized_dim)}});
    return out;
}

inline void check_expectations(const JobConfig& cfg, const CohomologyReport& rep, Checks& checks) {
    if (!cfg.expect) return;
    for (const auto& [r, want] : *cfg.expect) {
        std::optional<long> got;
        bool present = false;
        for (const auto& d : rep.degrees)
            if (d.degree == r) got = d.stabilized_dim, present = true;
        if (!present) throw InvalidInput("expectation for degree " + std::to_string(r) + " but that degree was not computed");
        checks.add(rep.complex_name + " H^" + std::to_string(r) + " = " + std::to_string(want), got && *got == want,
                   {{"expected", want}, {"stabilized_dim", optional_json(got)}});
    }
}

struct Resolved {
    FixtureSpec spec;
    std::vector<int> schedule;
    int stability = kDefaultStability;
    std::optional<std::vector<int>> degrees;
};

inline Resolved resolve(const JobConfig& cfg) {
    Resolved r;
    std::vector<FixtureSpec> extra;
    if (cfg.catalogue) extra = load_catalogue(*cfg.catalogue);
    if (cfg.fixture) {
        r.spec = find_fixture(*cfg.fixture, extra);
    } else {
        if (!cfg.model) throw InvalidInput("either --fixture or --model is required");
        r.spec.name = "";
        r.spec.model = parse_model(*cfg.model);
    }
    if (cfg.model && cfg.fixture && parse_model(*cfg.model) != r.spec.model)
        throw DimensionMismatch("--model disagrees with fixture '" + *cfg.fixture + "'");
    if (cfg.f) r.spec.f = *cfg.f;
    if (cfg.theta) r.spec.theta = *cfg.theta;
    if (cfg.omega) r.spec.omega = *cfg.omega, r.spec.omega_exact_from.reset();
    if (cfg.omega_exact_from) r.spec.omega_exact_from = *cfg.omega_exact_from, r.spec.omega.reset();
    if (cfg.m) r.spec.m = *cfg.m;
    if (cfg.map) r.spec.map = *cfg.map;
    int lo = cfg.dmin.value_or(r.spec.dmin.value_or(default_schedule().front()));
    int hi = cfg.dmax.value_or(r.spec.dmax.value_or(default_schedule().back()));
    if (lo < 0) throw InvalidInput("Dmin must be non-negative");
    if (hi > 12) throw InvalidInput("Dmax above 12 is outside desk scale");
    r.schedule = schedule_range(lo, hi);
    r.stability = cfg.stability.value_or(kDefaultStability);
    if (r.stability < 1) throw InvalidInput("stability must be at least 1");
    r.degrees = cfg.degrees;
    return r;
}

inline std::vector<int> degrees_or(const std::optional<std::vector<int>>& d, int top) {
    if (d) return *d;
    std::vector<int> all;
    for (int r = 0; r <= top; ++r) all.push_back(r);
    return all;
}

inline Json inputs(const Resolved& r) {
    Json j = to_json(r.spec);
    j.erase("description");
    j.erase("name");
    j.erase("Dmin");
    j.erase("Dmax");
    j["schedule"] = r.schedule;
    j["stability"] = r.stability;
    return j;
}

inline void run_cohomology(const JobConfig& cfg, const Resolved& rs, Json& results, Checks& checks) {
    Fixture fx = materialize(rs.spec);
    OperatorKind kind = operator_kind_from_string(cfg.op.value_or("d_f_theta"));
    auto rep = cohomology_dim(single_torus_complex(kind, fx.twist), degrees_or(rs.degrees, static_cast<int>(fx.twist.dim())),
                              rs.schedule, rs.stability);
    results["cohomology"] = to_json(rep);
    results["stabilization"] = stabilization(rep);
    if (cfg.bidegree) {
        auto [p, q] = *cfg.bidegree;
        results["bott_chern"] = to_json(bott_chern_dim(fx.twist, p, q, rs.schedule, rs.stability));
    }
    check_expectations(cfg, rep, checks);
}

inline void run_relative(const JobConfig& cfg, const Resolved& rs, Json& results, Checks& checks) {
    Fixture fx = materialize(rs.spec);
    RelativePair rp = fx.relative();
    int top = static_cast<int>(std::max(rp.map().target_dim(), rp.map().source_dim() + 1));
    auto rep = rel_cohomology_dim(rp, degrees_or(rs.degrees, top + 1), rs.schedule, rs.stability);
    results["cohomology"] = to_json(rep);
    results["stabilization"] = stabilization(rep);
    for (const auto& d : rep.degrees)
        if (d.degree > top)
            checks.add("H^" + std::to_string(d.degree) + "(mu) = 0 above the top degree",
                       std::all_of(d.rows.begin(), d.rows.end(), [](const CohomologyRow& row) { return row.dim == 0; }));
    EulerCheck e = relative_euler_check(rp, rs.schedule, rs.stability);
    results["euler"] = to_json(e);
    if (e.complete) checks.add("alternating sum of the long exact sequence vanishes", e.alternating_sum == 0);
    check_expectations(cfg, rep, checks);
}

inline void run_lck(const JobConfig& cfg, const Resolved& rs, Json& results, Checks& checks) {
    Fixture fx = materialize(rs.spec);
    LckFixture lf = fx.lck();
    LckClasses classes = lck_classes(lf);
    Json certs = Json::array();
    for (const auto& c : classes.certificates) {
        certs.push_back(to_json(c));
        checks.add("certificate: " + c.name, c.passed);
    }
    results["certificates"] = certs;
    int n = static_cast<int>(lf.twist().dim());
    HatReport hat = hat_cohomology_and_delta(lf, degrees_or(rs.degrees, n + 1), rs.schedule, rs.stability);
    results["hat"] = to_json(hat);
    results["stabilization"] = stabilization(hat.hat);
    for (const auto& d : hat.degrees) {
        bool complete = d.hat && d.h1 && d.h0_below && d.rank_before && d.rank_at;
        if (!complete) continue;
        checks.add("dimension identity for hat H^" + std::to_string(d.degree), d.identity_holds);
        if (fx.exact_lck()) checks.add("hat H^" + std::to_string(d.degree) + " splits", d.split_holds);
    }
    check_expectations(cfg, hat.hat, checks);
}

inline void run_twisted(const JobConfig& cfg, const Resolved& rs, Json& results, Checks& checks) {
    Fixture fx = materialize(rs.spec);
    const TwistData& tw = fx.twist;
    int n = static_cast<int>(tw.dim());
    auto degrees = degrees_or(rs.degrees, n);
    auto rep = twisted_cohomology_dim(tw, degrees, rs.schedule, rs.stability);
    results["cohomology"] = to_json(rep);
    results["stabilization"] = stabilization(rep);

    // c([φ]) = [fθ∧φ] on the cocycles the engine finds at the largest cutoff.
    std::size_t limit = static_cast<std::size_t>(cfg.c_map_limit.value_or(32));
    CochainComplex cx = single_torus_complex(OperatorKind::d_theta_f, tw);
    Cutoff D = uniform_cutoff(tw.dim(), rs.schedule.back());
    std::size_t checked = 0, certified = 0;
    Json per_degree = Json::array();
    for (int r : degrees) {
        if (r < 0 || r > n) continue;
        std::vector<SparseVector> cocycles;
        cohomology_row(cx, r, D, &cocycles);
        Layout layout = cx.layout_at(r, D);
        std::size_t here = 0, ok = 0;
        for (std::size_t k = 0; k < cocycles.size() && k < limit; ++k, ++here)
            if (c_map(tw, layout.from_coordinates(cocycles[k]).at(0)).certified) ++ok;
        per_degree.push_back({{"degree", r}, {"checked", here}, {"certified", ok}});
        checked += here;
        certified += ok;
    }
    results["c_map"] = {{"cutoff", rs.schedule.back()}, {"checked", checked}, {"certified", certified}, {"degrees", per_degree}};
    checks.add("c map certificate d_f(f theta ^ phi) = 0", certified == checked,
               {{"checked", checked}, {"certified", certified}});
    check_expectations(cfg, rep, checks);
}

inline void run_verify(const JobConfig& cfg, Json& results, Json& suites, Checks& checks) {
    int trials = cfg.trials.value_or(kDefaultTrials);
    if (trials < 1) throw InvalidInput("trials must be positive");
    for (const auto& s : run_suites(cfg.suite.value_or("all"), cfg.seed.value_or(kDefaultSeed), trials)) {
        suites.push_back(to_json(s));
        checks.add("suite " + s.name, s.failed == 0, {{"passed", s.passed}, {"failed", s.failed}});
    }
    results["trials"] = trials;
}

inline void run_fixtures(const JobConfig& cfg, Json& results) {
    Json list = Json::array();
    for (const auto& s : builtin_fixtures()) list.push_back(to_json(s));
    if (cfg.catalogue)
        for (const auto& s : load_catalogue(*cfg.catalogue)) list.push_back(to_json(s));
    results["fixtures"] = list;
}

} // namespace job_detail

inline JobResult run(const JobConfig& cfg) {
    using namespace job_detail;
    Json report{{"command", cfg.command},
                {"fixture", cfg.fixture ? Json(*cfg.fixture) : Json(nullptr)},
                {"seed", cfg.seed.value_or(kDefaultSeed)},
                {"engine_version", engine_version()},
                {"suites", Json::array()},
                {"verdicts", Json::array()}};
    Checks checks;
    Json results = Json::object();
    try {
        const auto& cmds = job_commands();
        if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
            throw InvalidInput("unknown command '" + cfg.command + "'");
        if (cfg.command == "verify") {
            run_verify(cfg, results, report["suites"], checks);
        } else if (cfg.command == "fixtures") {
            run_fixtures(cfg, results);
        } else {
            Resolved rs = resolve(cfg);
            report["inputs"] = inputs(rs);
            if (cfg.command == "cohomology") run_cohomology(cfg, rs, results, checks);
            if (cfg.command == "relative") run_relative(cfg, rs, results, checks);
            if (cfg.command == "lck") run_lck(cfg, rs, results, checks);
            if (cfg.command == "twisted") run_twisted(cfg, rs, results, checks);
        }
    } catch (const ComplexPropertyViolation& e) {
        checks.add(e.kind(), false, e.what());
    } catch (const ChainMapViolation& e) {
        checks.add(e.kind(), false, e.what());
    } catch (const AssemblyError& e) {
        checks.add(e.kind(), false, e.what());
    } catch (const Error& e) {
        report["status"] = "config-error";
        report["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        return {report, kExitConfigError};
    }
    report["results"] = results;
    report["verdicts"] = checks.list;
    report["status"] = checks.all ? "ok" : "check-failed";
    return {report, checks.all ? kExitOk : kExitCheckFailed};
}

} // namespace twcoh
