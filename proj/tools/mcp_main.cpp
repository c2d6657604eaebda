// Command line front end: generate ensembles, run experiments, audit
// solutions, and re-check recorded traces.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mcp/baseline.hpp"
#include "mcp/driver.hpp"
#include "mcp/ensemble.hpp"
#include "mcp/harness.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int cmd_generate(const std::string& out, int n, int p, int d, double r0, double q,
                 std::uint64_t seed) {
    const auto ensemble = mcp::generate_ensemble(n, p, d, r0, q, seed);
    mcp::save_ensemble(out, ensemble);
    std::cout << "wrote " << p << " manifolds (N=" << n << ", D=" << d << ", q=" << q
              << ") to " << out << "\n";
    return 0;
}

int cmd_run_config(const std::string& config_path, const std::string& out,
                   const std::string& traces_dir, const std::string& solutions_dir,
                   const std::optional<double>& delta_override,
                   const std::optional<int>& threads_override) {
    auto cfg = mcp::ExperimentConfig::from_json(read_file(config_path));
    if (delta_override) cfg.delta = *delta_override;
    if (threads_override) cfg.threads = *threads_override;
    cfg.validate();

    const auto result = mcp::run_experiment(cfg);
    const std::string csv = mcp::results_to_csv(cfg, result.rows);
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_file(out, csv);
        std::cout << "wrote " << result.rows.size() << " rows to " << out << "\n";
    }
    if (!traces_dir.empty()) {
        fs::create_directories(traces_dir);
        for (const auto& [key, trace] : result.traces) {
            write_file((fs::path(traces_dir) / (key + ".csv")).string(), trace.to_csv());
        }
    }
    if (!solutions_dir.empty()) {
        fs::create_directories(solutions_dir);
        for (const auto& [key, sol] : result.solutions) {
            if (sol.weights.size() == 0) continue;  // infeasible run, nothing to save
            mcp::save_solution((fs::path(solutions_dir) / (key + ".json")).string(), sol);
        }
    }
    return 0;
}

int cmd_run_ensemble(const std::string& ensemble_path, const std::string& mode, double delta,
                     std::optional<double> C, double qp_tol, std::uint64_t seed,
                     const std::string& trace_out, const std::string& solution_out) {
    const auto ensemble = mcp::load_ensemble(ensemble_path);
    const auto manifolds = mcp::as_manifolds(ensemble);

    mcp::RunConfig cfg;
    cfg.tolerance = delta;
    cfg.qp_tolerance = qp_tol;
    cfg.rng_seed = seed;
    if (mode == "slack") {
        if (!C) throw std::runtime_error("slack mode requires --c");
        cfg.slack_coefficient = C;
    } else if (C) {
        throw std::runtime_error("--c only applies to slack mode");
    }

    const auto initial =
        mcp::initial_working_set(manifolds, mcp::InitialSet::Centers, seed);
    mcp::RunResult result;
    if (mode == "slack") {
        std::vector<mcp::Vector> centers;
        for (const auto& m : manifolds) centers.push_back(mcp::center_point(m));
        result = mcp::run_slack(manifolds, centers, initial, cfg);
    } else {
        result = mcp::run_simple(manifolds, initial, cfg);
    }

    std::cout << "status=" << mcp::to_string(result.trace.terminal_status)
              << " iterations=" << result.trace.augmentations()
              << " working_set=" << result.final_set.size();
    if (result.trace.terminal_status != mcp::TerminalStatus::Infeasible) {
        std::cout << " objective=" << result.solution.objective;
    }
    std::cout << "\n";
    if (!trace_out.empty()) write_file(trace_out, result.trace.to_csv());
    if (!solution_out.empty() &&
        result.trace.terminal_status != mcp::TerminalStatus::Infeasible) {
        mcp::save_solution(solution_out, result.solution);
    }
    return result.trace.terminal_status == mcp::TerminalStatus::Infeasible ? 2 : 0;
}

int cmd_audit(const std::string& ensemble_path, const std::string& solution_path,
              double delta, int samples, std::uint64_t seed) {
    const auto ensemble = mcp::load_ensemble(ensemble_path);
    const auto solution = mcp::load_solution(solution_path);
    const auto report = mcp::audit_solution(solution, mcp::as_manifolds(ensemble), delta,
                                            samples, seed);
    std::cout << report.summary();
    return report.violation_count == 0 ? 0 : 1;
}

int cmd_trace_check(const std::string& trace_path, std::optional<double> l_bound,
                    const std::string& mode, double delta) {
    const auto trace = mcp::RunTrace::from_csv(read_file(trace_path));
    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    bool monotone = true;
    for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
        const double prev = trace.iterations[i - 1].objective;
        if (trace.iterations[i].objective < prev - 1e-8 * std::max(1.0, std::abs(prev))) {
            monotone = false;
        }
    }
    report("objective nondecreasing", monotone, "");

    bool violations_exceed_delta = true;
    for (const auto& it : trace.iterations) {
        if (it.added_manifold >= 0 && it.violation <= delta) violations_exceed_delta = false;
    }
    report("recorded violations exceed delta", violations_exceed_delta,
           "delta=" + std::to_string(delta));

    if (trace.terminal_status == mcp::TerminalStatus::Converged) {
        const bool terminal_ok = !trace.iterations.empty() &&
                                 trace.iterations.back().added_manifold < 0 &&
                                 trace.iterations.back().violation <= delta;
        report("terminal entry certifies convergence", terminal_ok, "");
    }

    if (l_bound && mode == "hard") {
        // objective is 0.5||w||^2, so each augmentation must grow it by
        // at least violation^2 / (2 L^2)
        bool growth_ok = true;
        for (std::size_t i = 0; i + 1 < trace.iterations.size(); ++i) {
            const auto& cur = trace.iterations[i];
            if (cur.added_manifold < 0) continue;
            const double need =
                cur.violation * cur.violation / (2.0 * (*l_bound) * (*l_bound));
            const double got = trace.iterations[i + 1].objective - cur.objective;
            if (got < need - 1e-8) growth_ok = false;
        }
        report("objective growth respects the L bound", growth_ok,
               "L=" + std::to_string(*l_bound));
    }

    const int errors = mcp::error_counter(trace);
    std::cout << "info: " << trace.iterations.size() << " iterations, " << errors
              << " error step(s), status=" << mcp::to_string(trace.terminal_status) << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cutting-plane maximum-margin classification of manifold ensembles"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a random ellipsoid ensemble");
    std::string gen_out = "ensemble.json";
    int gen_n = 100, gen_p = 8, gen_d = 4;
    double gen_r0 = 1.0, gen_q = 2.0;
    std::uint64_t gen_seed = 1;
    gen->add_option("--out", gen_out, "output JSON path");
    gen->add_option("--n", gen_n, "ambient dimension N")->required();
    gen->add_option("--p", gen_p, "number of manifolds P (even)")->required();
    gen->add_option("--d", gen_d, "intrinsic dimension D")->required();
    gen->add_option("--r0", gen_r0, "mean radius R0");
    gen->add_option("--q", gen_q, "norm order q");
    gen->add_option("--seed", gen_seed, "rng seed");

    // run
    auto* run = app.add_subcommand("run", "run experiments from a config, or one "
                                          "cutting-plane run on a fixed ensemble");
    std::string run_config, run_ensemble, run_out, run_traces, run_solutions;
    std::string run_mode = "hard", run_trace_out, run_solution_out;
    double run_delta = 1e-3, run_qp_tol = 1e-8;
    std::optional<double> run_c;
    std::optional<double> run_delta_override;
    std::optional<int> run_threads;
    std::uint64_t run_seed = 1;
    auto* opt_cfg = run->add_option("--config", run_config, "experiment config JSON");
    auto* opt_ens = run->add_option("--ensemble", run_ensemble, "fixed ensemble JSON");
    opt_cfg->excludes(opt_ens);
    run->add_option("--out", run_out, "results CSV path (config mode; stdout if empty)");
    run->add_option("--traces-dir", run_traces, "directory for per-run trace CSVs");
    run->add_option("--solutions-dir", run_solutions, "directory for per-run solution JSONs");
    run->add_option("--delta", run_delta_override, "override tolerance delta");
    run->add_option("--threads", run_threads, "worker threads (config mode)");
    run->add_option("--mode", run_mode, "hard|slack (ensemble mode)");
    run->add_option("--c", run_c, "slack coefficient C (ensemble slack mode)");
    run->add_option("--qp-tol", run_qp_tol, "inner QP tolerance (ensemble mode)");
    run->add_option("--seed", run_seed, "rng seed (ensemble mode)");
    run->add_option("--trace", run_trace_out, "trace CSV output (ensemble mode)");
    run->add_option("--solution", run_solution_out, "solution JSON output (ensemble mode)");

    // audit
    auto* audit = app.add_subcommand("audit", "dense termination audit of a solution");
    std::string audit_ensemble, audit_solution;
    double audit_delta = 1e-3;
    int audit_samples = 100000;
    std::uint64_t audit_seed = 202406;
    audit->add_option("--ensemble", audit_ensemble, "ensemble JSON")->required();
    audit->add_option("--solution", audit_solution, "solution JSON")->required();
    audit->add_option("--delta", audit_delta, "violation tolerance");
    audit->add_option("--samples", audit_samples, "samples per manifold");
    audit->add_option("--seed", audit_seed, "sampling seed");

    // trace-check
    auto* tc = app.add_subcommand("trace-check", "replay a trace against the invariants");
    std::string tc_trace, tc_mode = "hard";
    std::optional<double> tc_l;
    double tc_delta = 1e-3;
    tc->add_option("--trace", tc_trace, "trace CSV")->required();
    tc->add_option("--l-bound", tc_l, "ensemble norm bound L for growth checks");
    tc->add_option("--mode", tc_mode, "hard|slack");
    tc->add_option("--delta", tc_delta, "tolerance the run used");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_out, gen_n, gen_p, gen_d, gen_r0, gen_q, gen_seed);
        }
        if (run->parsed()) {
            if (!run_config.empty()) {
                return cmd_run_config(run_config, run_out, run_traces, run_solutions,
                                      run_delta_override, run_threads);
            }
            if (!run_ensemble.empty()) {
                if (run_delta_override) run_delta = *run_delta_override;
                return cmd_run_ensemble(run_ensemble, run_mode, run_delta, run_c, run_qp_tol,
                                        run_seed, run_trace_out, run_solution_out);
            }
            std::cerr << "run: provide --config or --ensemble\n";
            return 64;
        }
        if (audit->parsed()) {
            return cmd_audit(audit_ensemble, audit_solution, audit_delta, audit_samples,
                             audit_seed);
        }
        if (tc->parsed()) {
            return cmd_trace_check(tc_trace, tc_l, tc_mode, tc_delta);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
