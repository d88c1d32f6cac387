#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "modalnf/dynamics.hpp"
#include "modalnf/engine.hpp"
#include "modalnf/errors.hpp"
#include "modalnf/problem.hpp"
#include "modalnf/serialize.hpp"
#include "modalnf/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace modalnf;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInputError = 2, kInternal = 3 };

int exit_code_for(const std::string& kind) {
    static const std::set<std::string> internal = {"ResidualOrderViolation", "UpdateIdentityViolation",
                                                   "OrderViolation"};
    static const std::set<std::string> verification = {"InsideViolation", "NonFinite"};
    if (internal.count(kind)) return kInternal;
    if (verification.count(kind)) return kVerifyFailed;
    return kInputError;
}

int emit_error(const std::string& kind, const std::string& message, int code, int line = 0) {
    json rec;
    rec["error"] = kind;
    rec["message"] = message;
    if (line > 0) rec["line"] = line;
    rec["exit"] = code;
    std::cerr << rec.dump() << '\n';
    return code;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json checks_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json j;
        j["name"] = c.name;
        j["status"] = to_string(c.status);
        j["detail"] = c.detail;
        j["margin"] = c.margin;
        arr.push_back(std::move(j));
    }
    return arr;
}

json decay_json(const DecayReport& r) {
    json j;
    j["horizon"] = r.horizon;
    j["max_tilde_norm"] = r.max_tilde_norm;
    j["bounds"] = json::array();
    for (const auto& b : r.bounds) {
        j["bounds"].push_back(
            {{"name", b.name}, {"holds", b.holds}, {"worst_ratio", b.worst_ratio}, {"worst_t", b.worst_t},
             {"samples", b.samples}});
    }
    j["all_hold"] = r.all_hold();
    return j;
}

json conjugacy_json(const ConjugacyReport& r) {
    return {{"max_defect", r.max_defect}, {"t_at_max", r.t_at_max}, {"samples", r.samples_checked}};
}

// x0 from the problem, or when absent a 1e-3 state spread over the centre modes.
StateVector initial_state_for(const ProblemSpec& spec, const SpectralModel& model) {
    StateVector x0 = StateVector::zeros(model.modes());
    if (!spec.simulation.x0.entries().empty()) {
        for (const auto& [j, z] : spec.simulation.x0.entries()) x0[j] = z;
        return x0;
    }
    const auto centre = model.modes_of(ModeClass::centre);
    for (int j : centre) x0[j] = 1e-3 / std::sqrt(static_cast<double>(centre.size()));
    return x0;
}

StateVector supported_on(const SpectralModel& model, ModeClass c, double norm) {
    StateVector x0 = StateVector::zeros(model.modes());
    const auto modes = model.modes_of(c);
    for (int j : modes) x0[j] = norm / std::sqrt(static_cast<double>(modes.size()));
    return x0;
}

struct Common {
    std::string problem;
    int order = 0;
    std::string strategy;
};

ProblemSpec load(const Common& c) {
    ProblemSpec spec = load_problem(c.problem);
    if (c.order > 0) spec.order = c.order;
    if (!c.strategy.empty()) spec.strategy = parse_strategy(c.strategy);
    return spec;
}

int cmd_transform(const Common& c, const std::string& out_dir) {
    const ProblemSpec spec = load(c);
    const SpectralModel model = spec.model();
    const auto t0 = std::chrono::steady_clock::now();
    const NormalFormResult result = run(model, spec.nonlinearity(), spec.order, {spec.strategy});
    const double elapsed = seconds_since(t0);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file((dir / "xi.series").string(), write_series(result.state.xi));
    write_file((dir / "F.series").string(), write_series(result.state.F));
    write_file((dir / "R.series").string(), write_series(result.state.R));
    write_file((dir / "ledger.json").string(), write_ledger(result));
    write_file((dir / "problem.cfg").string(), serialize_problem(spec));

    json summary;
    summary["command"] = "transform";
    summary["order"] = result.state.order;
    summary["strategy"] = to_string(result.strategy);
    summary["xi_terms"] = result.state.xi.size();
    summary["F_terms"] = result.state.F.size();
    summary["R_terms"] = result.state.R.size();
    summary["ledger_entries"] = result.ledger.size();
    summary["output"] = out_dir;
    summary["seconds"] = elapsed;
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

int cmd_verify(const std::string& dir_arg, std::string problem, unsigned long long seed) {
    const fs::path dir(dir_arg);
    if (problem.empty()) problem = (dir / "problem.cfg").string();
    const ProblemSpec spec = load_problem(problem);
    const SpectralModel model = spec.model();

    FixtureSet fx;
    const LedgerFile ledger = parse_ledger(read_file((dir / "ledger.json").string()));
    fx.order = ledger.order;
    fx.strategy = ledger.strategy;
    fx.ledger = ledger.entries;
    fx.xi = parse_series(read_file((dir / "xi.series").string()));
    fx.F = parse_series(read_file((dir / "F.series").string()));
    fx.R = parse_series(read_file((dir / "R.series").string()));

    const auto checks = verify_fixtures(model, spec.nonlinearity(), fx, seed);
    const bool ok = all_passed(checks);
    json out;
    out["command"] = "verify";
    out["order"] = fx.order;
    out["checks"] = checks_json(checks);
    out["pass"] = ok;
    std::cout << out.dump(2) << '\n';
    if (!ok) {
        for (const auto& ch : checks)
            if (ch.status == CheckStatus::fail) std::cerr << "FAILED " << ch.name << ": " << ch.detail << '\n';
    }
    return ok ? kOk : kVerifyFailed;
}

int cmd_simulate(const Common& c, const std::string& csv, double defect_tol) {
    const ProblemSpec spec = load(c);
    const SpectralModel model = spec.model();
    const ModalSeries f = spec.nonlinearity();
    const NormalFormResult result = run(model, f, spec.order, {spec.strategy});
    const auto& sim = spec.simulation;
    const StateVector x0 = initial_state_for(spec, model);

    const Trajectory traj = integrate(model, result.state.F, x0, sim.t0, sim.t1, sim.dt);
    if (!csv.empty()) {
        std::ofstream os(csv);
        if (!os) throw ParseError(0, "cannot write '" + csv + "'");
        write_trajectory_csv(os, traj, model.modes());
    }
    const ConjugacyReport conj = check_conjugacy(model, f, result, x0, sim.t0, sim.t1, sim.dt, true);
    const ConjugacyReport bare = check_conjugacy(model, f, result, x0, sim.t0, sim.t1, sim.dt, false);
    const DecayReport decay = decay_check(result, model, x0, sim.horizon, sim.dt);

    const bool conj_ok = conj.max_defect <= defect_tol;
    json out;
    out["command"] = "simulate";
    out["order"] = result.state.order;
    out["trajectory"] = {{"samples", traj.samples.size()},
                         {"dt", traj.dt},
                         {"integrator", traj.integrator},
                         {"final_t", traj.samples.back().t},
                         {"final_norm", traj.samples.back().state.norm()}};
    out["conjugacy"] = conjugacy_json(conj);
    out["conjugacy"]["tolerance"] = defect_tol;
    out["conjugacy"]["pass"] = conj_ok;
    out["conjugacy_without_residual"] = conjugacy_json(bare);
    out["decay"] = decay_json(decay);
    out["pass"] = conj_ok && decay.all_hold();
    std::cout << out.dump(2) << '\n';
    return out["pass"].get<bool>() ? kOk : kVerifyFailed;
}

int cmd_manifold(const Common& c, const std::string& which, int samples, double radius, const std::string& out_path,
                 bool which_set, bool samples_set, bool radius_set) {
    const ProblemSpec spec = load(c);
    const SpectralModel model = spec.model();
    const NormalFormResult result = run(model, spec.nonlinearity(), spec.order, {spec.strategy});
    const auto& sim = spec.simulation;
    const SubspaceChoice choice = parse_subspace(which_set ? which : sim.which);
    const int n = samples_set ? samples : sim.samples;
    const double r = radius_set ? radius : sim.radius;
    if (n < 0) throw ParseError(0, "--samples must be non-negative");
    if (r < 0.0) throw ParseError(0, "--radius must be non-negative");

    const auto points = invariant_subset_sample(result, model, choice, n, r, {sim.t_min, sim.t_max, sim.seed});

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ParseError(0, "cannot write '" + out_path + "'");
    }
    std::ostream& os = out_path.empty() ? std::cout : file;
    os << "t";
    for (int m : model.modes().labels()) os << ",v" << m << "_re,v" << m << "_im";
    for (int m : model.modes().labels()) os << ",x" << m << "_re,x" << m << "_im";
    os << '\n';
    os.precision(17);
    for (const auto& p : points) {
        os << p.t;
        for (int m : model.modes().labels()) os << ',' << p.v.at(m).real() << ',' << p.v.at(m).imag();
        for (int m : model.modes().labels()) os << ',' << p.x.at(m).real() << ',' << p.x.at(m).imag();
        os << '\n';
    }
    json summary = {{"command", "manifold"}, {"which", to_string(choice)}, {"requested", n}, {"points", points.size()}};
    std::cerr << summary.dump() << '\n';
    return kOk;
}

int cmd_report(const Common& c, const std::string& out_path, unsigned long long seed) {
    const auto start = std::chrono::steady_clock::now();
    const ProblemSpec spec = load(c);
    const SpectralModel model = spec.model();
    const ModalSeries f = spec.nonlinearity();
    json timing;

    auto t0 = std::chrono::steady_clock::now();
    const NormalFormResult result = run(model, f, spec.order, {spec.strategy});
    timing["transform"] = seconds_since(t0);

    json report;
    report["format"] = "modalnf-report 1";
    report["problem"] = serialize_problem(spec);

    json modes = json::array();
    for (int j : model.modes().labels()) {
        modes.push_back({{"mode", j},
                         {"eigenvalue", model.eigenvalue(j).str()},
                         {"class", std::string(1, to_char(model.classify_mode(j)))}});
    }
    const GapCheck gap = model.gap_check(spec.order);
    report["model"] = {{"modes", modes}, {"gap_ok", gap.ok}, {"gap_slack", gap.slack.str()}, {"gap_detail", gap.detail}};

    json F = json::array();
    for (const auto& [key, coeff] : result.state.F.terms()) {
        F.push_back({{"target", key.target},
                     {"q", key.q.str()},
                     {"coeff", coeff.str()},
                     {"truncation_sensitive", result.sensitive_F.count(key) != 0}});
    }
    std::map<int, std::pair<int, int>> per_order;
    for (const auto& e : result.ledger) (e.eliminated ? per_order[e.order].first : per_order[e.order].second)++;
    json orders = json::array();
    for (const auto& [p, n] : per_order) orders.push_back({{"order", p}, {"eliminated", n.first}, {"kept", n.second}});
    report["result"] = {{"order", result.state.order},
                        {"strategy", to_string(result.strategy)},
                        {"xi_terms", result.state.xi.size()},
                        {"F_terms", result.state.F.size()},
                        {"R_terms", result.state.R.size()},
                        {"residual_full_terms", result.residual_full.size()},
                        {"ledger", orders},
                        {"F", F}};

    t0 = std::chrono::steady_clock::now();
    const auto checks = verify_fixtures(model, f, fixtures_from(result), seed);
    timing["verify"] = seconds_since(t0);
    report["verification"] = checks_json(checks);
    bool ok = all_passed(checks);

    t0 = std::chrono::steady_clock::now();
    const auto& sim = spec.simulation;
    const StateVector x0 = initial_state_for(spec, model);
    json dyn;
    try {
        const ConjugacyReport c1 = check_conjugacy(model, f, result, x0, sim.t0, sim.t1, sim.dt);
        const ConjugacyReport c2 = check_conjugacy(model, f, result, x0, sim.t0, sim.t1, sim.dt / 2);
        dyn["conjugacy"] = {{"dt", sim.dt},
                            {"defect", c1.max_defect},
                            {"defect_half_dt", c2.max_defect},
                            {"ratio", c2.max_defect > 0 ? c1.max_defect / c2.max_defect : 0.0}};
        const double scale = std::max(x0.norm(), 1e-3);
        json decay = json::array();
        if (!model.modes_of(ModeClass::stable).empty())
            decay.push_back(decay_json(
                decay_check(result, model, supported_on(model, ModeClass::stable, scale), std::abs(sim.horizon), sim.dt)));
        if (!model.modes_of(ModeClass::unstable).empty())
            decay.push_back(decay_json(decay_check(result, model, supported_on(model, ModeClass::unstable, scale),
                                                   -std::abs(sim.horizon), sim.dt)));
        for (const auto& d : decay) ok = ok && d["all_hold"].get<bool>();
        dyn["decay"] = decay;
    } catch (const Error& e) {
        dyn["error"] = {{"kind", e.kind()}, {"message", e.what()}};
        ok = false;
    }
    timing["dynamics"] = seconds_since(t0);
    report["dynamics"] = dyn;
    timing["total"] = seconds_since(start);
    report["timing"] = timing;
    report["pass"] = ok;

    if (out_path.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        write_file(out_path, report.dump(2) + "\n");
        std::cout << json{{"command", "report"}, {"output", out_path}, {"pass", ok}}.dump() << '\n';
    }
    return ok ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-dependent normal forms for modal ODE systems"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-p,--problem", common.problem, "Problem file")->required()->check(CLI::ExistingFile);
        sub->add_option("--order", common.order, "Target order (overrides [run] order)");
        sub->add_option("--strategy", common.strategy, "separating | maximal (overrides [run] strategy)");
    };

    std::string out_dir = ".";
    auto* transform = app.add_subcommand("transform", "Build the transform and write xi/F/R fixtures and the ledger");
    add_common(transform);
    transform->add_option("-o,--out", out_dir, "Output directory");

    std::string verify_dir, verify_problem;
    unsigned long long seed = 1;
    auto* verify = app.add_subcommand("verify", "Check the invariant suite on stored fixtures");
    verify->add_option("-d,--dir", verify_dir, "Fixture directory written by transform")->required();
    verify->add_option("-p,--problem", verify_problem, "Problem file (default: <dir>/problem.cfg)");
    verify->add_option("--seed", seed, "Seed for the random scaling directions");

    std::string csv;
    double defect_tol = 1e-6;
    auto* simulate = app.add_subcommand("simulate", "Integrate the normal form, check conjugacy and decay bounds");
    add_common(simulate);
    simulate->add_option("--csv", csv, "Write the normal-form trajectory as CSV");
    simulate->add_option("--defect-tol", defect_tol, "Conjugacy defect tolerance");

    std::string which = "c", manifold_out;
    int samples = 100;
    double radius = 0.01;
    auto* manifold = app.add_subcommand("manifold", "Sample an invariant subset");
    add_common(manifold);
    auto* which_opt = manifold->add_option("--which", which, "c | s | u | cs | cu");
    auto* samples_opt = manifold->add_option("--samples", samples, "Number of points");
    auto* radius_opt = manifold->add_option("--radius", radius, "Sampling radius in normal-form coordinates");
    manifold->add_option("-o,--out", manifold_out, "CSV output file (default: stdout)");

    std::string report_out;
    auto* report = app.add_subcommand("report", "Run everything and write one JSON report");
    add_common(report);
    report->add_option("-o,--out", report_out, "Report file (default: stdout)");
    report->add_option("--seed", seed, "Seed for the random scaling directions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error("UsageError", e.what(), kInputError);
    }

    try {
        if (*transform) return cmd_transform(common, out_dir);
        if (*verify) return cmd_verify(verify_dir, verify_problem, seed);
        if (*simulate) return cmd_simulate(common, csv, defect_tol);
        if (*manifold)
            return cmd_manifold(common, which, samples, radius, manifold_out, which_opt->count() > 0,
                                samples_opt->count() > 0, radius_opt->count() > 0);
        if (*report) return cmd_report(common, report_out, seed);
    } catch (const ParseError& e) {
        return emit_error(e.kind(), e.what(), kInputError, e.line());
    } catch (const Error& e) {
        return emit_error(e.kind(), e.what(), exit_code_for(e.kind()));
    } catch (const std::exception& e) {
        return emit_error("InternalError", e.what(), kInternal);
    }
    return kInternal;
}
