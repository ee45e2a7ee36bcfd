// Command-line front end: flags (and/or --config FILE) → JobConfig → report.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "twcoh/job.hpp"

using namespace twcoh;

namespace {

struct Flags {
    std::string config, fixture, catalogue, model, f, theta, omega, omega_exact_from, m, map, op, suite, degrees, expect,
        bidegree, out;
    int dmin = -1, dmax = -1, stability = -1, trials = -1, c_map_limit = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* sub, Flags& fl) {
    sub->add_option("--config", fl.config, "JSON file whose keys mirror these flags; flags win");
    sub->add_option("--out", fl.out, "write the report here instead of stdout");
}

void add_model(CLI::App* sub, Flags& fl) {
    sub->add_option("--fixture", fl.fixture, "start from a named fixture (see `fixtures`)");
    sub->add_option("--catalogue", fl.catalogue, "extra fixture catalogue (JSON)");
    sub->add_option("--model", fl.model, "torus dimension: t1 … t8");
    sub->add_option("--f", fl.f, "conformal factor, e.g. \"cos(t1)\"");
    sub->add_option("--theta", fl.theta, "closed 1-form, e.g. \"dt1\"");
    sub->add_option("--degrees", fl.degrees, "comma-separated degrees (default: all)");
    sub->add_option("--Dmin", fl.dmin, "smallest frequency cutoff");
    sub->add_option("--Dmax", fl.dmax, "largest frequency cutoff");
    sub->add_option("--stability", fl.stability, "consecutive equal values needed to call a degree stable");
    sub->add_option("--expect", fl.expect, "expected stabilized dims, e.g. \"0=0,1=2\"; a mismatch exits 1");
}

JobConfig from_flags(const std::string& command, const Flags& fl) {
    JobConfig c;
    c.command = command;
    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); };
    auto num = [](int v) { return v < 0 ? std::nullopt : std::optional<int>(v); };
    c.fixture = opt(fl.fixture), c.catalogue = opt(fl.catalogue), c.model = opt(fl.model), c.f = opt(fl.f);
    c.theta = opt(fl.theta), c.omega = opt(fl.omega), c.omega_exact_from = opt(fl.omega_exact_from), c.m = opt(fl.m);
    c.map = opt(fl.map), c.op = opt(fl.op), c.suite = opt(fl.suite), c.out = opt(fl.out);
    c.dmin = num(fl.dmin), c.dmax = num(fl.dmax), c.stability = num(fl.stability), c.trials = num(fl.trials);
    c.c_map_limit = num(fl.c_map_limit);
    if (fl.seed_set) c.seed = fl.seed;
    if (!fl.degrees.empty()) c.degrees = parse_degree_list(fl.degrees);
    if (!fl.expect.empty()) c.expect = parse_expectations(fl.expect);
    if (!fl.bidegree.empty()) {
        auto b = parse_degree_list(fl.bidegree);
        if (b.size() != 2) throw InvalidInput("--bidegree needs \"p,q\"");
        c.bidegree = std::make_pair(b[0], b[1]);
    }
    return c;
}

int emit(const JobResult& res, const std::optional<std::string>& out) {
    std::string text = dump(res.report);
    if (out) {
        std::ofstream f(*out, std::ios::binary);
        if (!f) {
            std::cerr << "twcoh: cannot write '" << *out << "'\n";
            return kExitConfigError;
        }
        f << text;
    } else {
        std::cout << text;
    }
    if (res.report.contains("error")) std::cerr << "twcoh: " << res.report["error"]["message"].get<std::string>() << "\n";
    for (const auto& v : res.report["verdicts"])
        if (!v["passed"].get<bool>()) std::cerr << "twcoh: check failed: " << v["check"].get<std::string>() << "\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted cohomology of trigonometric forms on tori, computed exactly on frequency truncations"};
    app.require_subcommand(1);
    Flags fl;

    auto* verify = app.add_subcommand("verify", "run randomized identity suites");
    verify->add_option("--suite", fl.suite, "suite name or \"all\"");
    verify->add_option("--trials", fl.trials, "trials per suite (default 100)");

    auto* coh = app.add_subcommand("cohomology", "truncated cohomology of one operator on T^n");
    add_model(coh, fl);
    coh->add_option("--operator", fl.op, "d, d_theta, d_f, d_f_theta (default) or d_theta_f");
    coh->add_option("--bidegree", fl.bidegree, "also report the Bott–Chern group of bidegree \"p,q\" (even n)");

    auto* rel = app.add_subcommand("relative", "relative complex of an affine map into T^n");
    add_model(rel, fl);
    rel->add_option("--map", fl.map, "\"A;b\": rows of A separated by ',', translation b in turns");

    auto* lck = app.add_subcommand("lck", "hat complex, δ ranks and class certificates of an l.c.K. fixture");
    add_model(lck, fl);
    lck->add_option("--omega", fl.omega, "2-form with dω = θ∧ω");
    lck->add_option("--omega-exact-from", fl.omega_exact_from, "1-form ω′; uses ω = f⁻² d_{f,θ}ω′ (f a unit)");
    lck->add_option("--m", fl.m, "rational m; θ₀ = mθ, θ₁ = (m+1)θ");

    auto* tw = app.add_subcommand("twisted", "quotient cohomology of d_theta_f and the c map");
    add_model(tw, fl);
    tw->add_option("--c-map-limit", fl.c_map_limit, "cocycles per degree fed to the c map (default 32)");

    auto* fixtures = app.add_subcommand("fixtures", "list built-in fixtures");
    fixtures->add_option("--catalogue", fl.catalogue, "also list fixtures from this catalogue");

    for (auto* sub : {verify, coh, rel, lck, tw, fixtures}) {
        add_common(sub, fl);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&fl](std::uint64_t s) { fl.seed = s, fl.seed_set = true; }, "random seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    JobConfig cfg;
    try {
        if (!fl.config.empty()) cfg = load_job_config(fl.config);
        JobConfig flags = from_flags(chosen->get_name(), fl);
        if (!cfg.command.empty() && cfg.command != flags.command)
            throw InvalidInput("config is for '" + cfg.command + "' but the command is '" + flags.command + "'");
        cfg.merge(flags);
    } catch (const Error& e) {
        JobResult bad{{{"command", chosen->get_name()},
                       {"status", "config-error"},
                       {"error", {{"kind", e.kind()}, {"message", e.what()}}},
                       {"engine_version", engine_version()},
                       {"verdicts", Json::array()}},
                      kExitConfigError};
        return emit(bad, std::nullopt);
    }
    return emit(run(cfg), cfg.out);
}
