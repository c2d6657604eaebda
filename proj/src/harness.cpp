#include "mcp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mcp/baseline.hpp"
#include "mcp/driver.hpp"
#include "mcp/oracle.hpp"

namespace mcp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
T get_field(const nlohmann::json& doc, const char* name) {
    try {
        return doc.at(name).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("config field '") + name + "': " + e.what());
    }
}

template <typename T>
T get_field_or(const nlohmann::json& doc, const char* name, T fallback) {
    if (!doc.contains(name)) return fallback;
    return get_field<T>(doc, name);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.what() carries the byte offset and context of the failure
        throw std::runtime_error(std::string("config parse: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.ambient_dim = get_field<int>(doc, "N");
    cfg.num_manifolds = get_field<int>(doc, "P");
    cfg.intrinsic_dim = get_field<int>(doc, "D");
    cfg.mean_radius = get_field<double>(doc, "R0");
    cfg.q = get_field<double>(doc, "q");
    if (doc.contains("C") && !doc.at("C").is_null()) {
        cfg.slack_coefficient = get_field<double>(doc, "C");
    }
    cfg.delta = get_field_or<double>(doc, "delta", cfg.delta);
    if (doc.contains("seeds")) {
        cfg.seeds = get_field<std::vector<std::uint64_t>>(doc, "seeds");
    }
    if (doc.contains("budgets") && !doc.at("budgets").is_null()) {
        cfg.budgets = get_field<std::vector<int>>(doc, "budgets");
    }
    const std::string mode = get_field_or<std::string>(doc, "mode", "hard");
    if (mode == "hard") {
        cfg.mode = QpMode::Hard;
    } else if (mode == "slack") {
        cfg.mode = QpMode::Slack;
    } else {
        throw std::runtime_error("config field 'mode': expected \"hard\" or \"slack\"");
    }
    const std::string sel = get_field_or<std::string>(doc, "oracle_selection", "first");
    if (sel == "first") {
        cfg.oracle_selection = OracleSelection::First;
    } else if (sel == "worst") {
        cfg.oracle_selection = OracleSelection::Worst;
    } else {
        throw std::runtime_error("config field 'oracle_selection': expected \"first\" or \"worst\"");
    }
    cfg.qp_tolerance = get_field_or<double>(doc, "qp_tolerance", cfg.qp_tolerance);
    cfg.test_points = get_field_or<int>(doc, "test_points", cfg.test_points);
    cfg.append_bias = get_field_or<bool>(doc, "append_bias", cfg.append_bias);
    cfg.threads = get_field_or<int>(doc, "threads", cfg.threads);
    cfg.max_iterations = get_field_or<std::size_t>(doc, "max_iterations", cfg.max_iterations);
    cfg.validate();
    return cfg;
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json doc;
    doc["N"] = ambient_dim;
    doc["P"] = num_manifolds;
    doc["D"] = intrinsic_dim;
    doc["R0"] = mean_radius;
    doc["q"] = q;
    if (slack_coefficient) doc["C"] = *slack_coefficient;
    doc["delta"] = delta;
    doc["seeds"] = seeds;
    doc["budgets"] = resolved_budgets();
    doc["mode"] = mode == QpMode::Hard ? "hard" : "slack";
    doc["oracle_selection"] = oracle_selection == OracleSelection::First ? "first" : "worst";
    doc["qp_tolerance"] = qp_tolerance;
    doc["test_points"] = test_points;
    doc["append_bias"] = append_bias;
    doc["threads"] = threads;
    doc["max_iterations"] = max_iterations;
    return doc.dump();
}

void ExperimentConfig::validate() const {
    if (ambient_dim < 1) throw std::runtime_error("config field 'N': must be >= 1");
    if (num_manifolds < 2 || num_manifolds % 2 != 0) {
        throw std::runtime_error("config field 'P': must be even and >= 2");
    }
    if (intrinsic_dim < 1) throw std::runtime_error("config field 'D': must be >= 1");
    if (!(mean_radius > 0.0)) throw std::runtime_error("config field 'R0': must be > 0");
    if (!(q >= 1.0)) throw std::runtime_error("config field 'q': must be >= 1");
    if (!(delta > 0.0)) throw std::runtime_error("config field 'delta': must be > 0");
    if (mode == QpMode::Slack && !slack_coefficient) {
        throw std::runtime_error("config field 'C': required in slack mode");
    }
    if (slack_coefficient && !(*slack_coefficient > 0.0)) {
        throw std::runtime_error("config field 'C': must be > 0");
    }
    if (seeds.empty()) throw std::runtime_error("config field 'seeds': must be non-empty");
    if (test_points < 1) throw std::runtime_error("config field 'test_points': must be >= 1");
    if (budgets) {
        for (int b : *budgets) {
            if (b < num_manifolds) {
                throw std::runtime_error("config field 'budgets': entries must be >= P");
            }
        }
    }
}

std::vector<int> ExperimentConfig::resolved_budgets() const {
    if (budgets) return *budgets;
    std::vector<int> out;
    for (int mult : {1, 2, 4, 8, 16, 32, 64, 128, 200}) {
        out.push_back(num_manifolds * mult);
    }
    return out;
}

namespace {

struct WorkUnit {
    enum class Kind { Mcp, Baseline } kind;
    std::uint64_t seed = 0;
    int budget = 0;  // baseline only
};

ResultRow run_mcp_unit(const ExperimentConfig& cfg, std::uint64_t seed, RunTrace* trace_out,
                       QpSolution* solution_out) {
    ResultRow row;
    row.method = "mcp";
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();

    auto ensemble = generate_ensemble(cfg.ambient_dim, cfg.num_manifolds, cfg.intrinsic_dim,
                                      cfg.mean_radius, cfg.q, seed);
    if (cfg.append_bias) ensemble = append_bias_coordinate(ensemble);
    const auto manifolds = as_manifolds(ensemble);

    RunConfig run_cfg;
    run_cfg.tolerance = cfg.delta;
    if (cfg.mode == QpMode::Slack) run_cfg.slack_coefficient = cfg.slack_coefficient;
    run_cfg.qp_tolerance = cfg.qp_tolerance;
    run_cfg.rng_seed = mix_seed(seed, 77);
    run_cfg.oracle_selection = cfg.oracle_selection;
    run_cfg.max_iterations = cfg.max_iterations;

    WorkingSet initial = initial_working_set(manifolds, InitialSet::Centers, run_cfg.rng_seed);
    RunResult result;
    if (cfg.mode == QpMode::Hard) {
        result = run_simple(manifolds, initial, run_cfg);
    } else {
        std::vector<Vector> centers;
        centers.reserve(manifolds.size());
        for (const auto& m : manifolds) centers.push_back(center_point(m));
        result = run_slack(manifolds, centers, initial, run_cfg);
    }

    row.budget = static_cast<int>(result.final_set.size());
    row.iters = result.trace.augmentations();
    row.status = to_string(result.trace.terminal_status);
    if (result.trace.terminal_status == TerminalStatus::Infeasible) {
        row.gen_error = kNaN;
        row.objective = kNaN;
        row.bracket_lo = kNaN;
        row.bracket_hi = kNaN;
    } else {
        row.objective = result.solution.objective;
        row.gen_error = generalization_error(result.solution.weights, manifolds,
                                             cfg.test_points, mix_seed(seed, 4040));
        if (result.trace.terminal_status == TerminalStatus::Converged) {
            const auto bracket =
                cfg.mode == QpMode::Hard
                    ? bracket_hard(result.solution, cfg.delta)
                    : bracket_slack(result.solution, cfg.num_manifolds,
                                    *cfg.slack_coefficient, cfg.delta);
            row.bracket_lo = bracket.first;
            row.bracket_hi = bracket.second;
        } else {
            row.bracket_lo = kNaN;
            row.bracket_hi = kNaN;
        }
        if (solution_out) *solution_out = result.solution;
    }
    if (trace_out) *trace_out = result.trace;
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return row;
}

ResultRow run_baseline_unit(const ExperimentConfig& cfg, std::uint64_t seed, int budget) {
    ResultRow row;
    row.method = "point_svm";
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();

    auto ensemble = generate_ensemble(cfg.ambient_dim, cfg.num_manifolds, cfg.intrinsic_dim,
                                      cfg.mean_radius, cfg.q, seed);
    if (cfg.append_bias) ensemble = append_bias_coordinate(ensemble);
    const auto manifolds = as_manifolds(ensemble);

    const int per_manifold = std::max(1, budget / cfg.num_manifolds);
    row.budget = per_manifold * cfg.num_manifolds;

    std::vector<Vector> points;
    std::vector<int> labels;
    points.reserve(row.budget);
    labels.reserve(row.budget);
    for (int p = 0; p < cfg.num_manifolds; ++p) {
        auto samples = sample_manifold(ensemble[p], per_manifold,
                                       mix_seed(seed, 1000 + p * 1009 + per_manifold));
        for (auto& s : samples) {
            points.push_back(std::move(s));
            labels.push_back(ensemble[p].label());
        }
    }

    row.iters = 0;
    row.bracket_lo = kNaN;
    row.bracket_hi = kNaN;
    try {
        const QpSolution sol = train_point_svm(
            points, labels,
            cfg.mode == QpMode::Slack ? cfg.slack_coefficient : std::nullopt,
            cfg.qp_tolerance);
        row.objective = sol.objective;
        row.gen_error =
            generalization_error(sol.weights, manifolds, cfg.test_points, mix_seed(seed, 4040));
        row.status = "converged";
    } catch (const InfeasibleError&) {
        row.objective = kNaN;
        row.gen_error = kNaN;
        row.status = "infeasible";
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<WorkUnit> units;
    for (std::uint64_t seed : config.seeds) {
        units.push_back({WorkUnit::Kind::Mcp, seed, 0});
    }
    for (std::uint64_t seed : config.seeds) {
        for (int b : config.resolved_budgets()) {
            units.push_back({WorkUnit::Kind::Baseline, seed, b});
        }
    }

    ExperimentResult result;
    result.rows.resize(units.size());
    std::vector<RunTrace> traces(config.seeds.size());
    std::vector<QpSolution> solutions(config.seeds.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= units.size()) return;
            const WorkUnit& u = units[i];
            if (u.kind == WorkUnit::Kind::Mcp) {
                const std::size_t si =
                    std::find(config.seeds.begin(), config.seeds.end(), u.seed) -
                    config.seeds.begin();
                result.rows[i] = run_mcp_unit(config, u.seed, &traces[si], &solutions[si]);
            } else {
                result.rows[i] = run_baseline_unit(config, u.seed, u.budget);
            }
        }
    };

    int n_threads = config.threads > 0
                        ? config.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(units.size())));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (std::size_t si = 0; si < config.seeds.size(); ++si) {
        const std::string key = "mcp_seed" + std::to_string(config.seeds[si]);
        result.traces.emplace_back(key, std::move(traces[si]));
        result.solutions.emplace_back(key, std::move(solutions[si]));
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.method != b.method) return a.method < b.method;
        if (a.seed != b.seed) return a.seed < b.seed;
        return a.budget < b.budget;
    });
    return result;
}

std::string results_to_csv(const ExperimentConfig& config,
                           const std::vector<ResultRow>& rows) {
    std::string out = "# config: " + config.to_json() + "\n";
    out += "method,seed,budget,gen_error,iters,objective,bracket_lo,bracket_hi,status,wall_ms\n";
    char buf[320];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%llu,%d,%.17g,%zu,%.17g,%.17g,%.17g,%s,%.3f\n",
                      r.method.c_str(), static_cast<unsigned long long>(r.seed), r.budget,
                      r.gen_error, r.iters, r.objective, r.bracket_lo, r.bracket_hi,
                      r.status.c_str(), r.wall_ms);
        out += buf;
    }
    return out;
}

namespace {

// Derivative-free descent of the surface margin from a starting parameter:
// coordinate steps renormalized onto the q-sphere, halving the step until it
// stops paying. Evaluations go through `eval` so the caller sees every
// visited point.
template <typename Eval>
Vector refine_on_surface(Vector s, double q, Eval&& eval, double* best_value) {
    const Eigen::Index d = s.size();
    double cur = eval(s);
    for (double step = 0.25; step > 1e-10; step *= 0.5) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 40 * d) {
            improved = false;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (double dir : {+1.0, -1.0}) {
                    Vector cand = s;
                    cand[i] += dir * step;
                    const double n = lq_norm(cand, q);
                    if (n <= 0.0) continue;
                    cand /= n;
                    const double v = eval(cand);
                    if (v < cur - 1e-15 * std::abs(cur)) {
                        cur = v;
                        s = std::move(cand);
                        improved = true;
                    }
                }
            }
        }
    }
    *best_value = cur;
    return s;
}

}  // namespace

AuditReport audit_solution(const QpSolution& solution,
                           const std::vector<Manifold>& manifolds, double delta,
                           int samples_per_manifold, std::uint64_t seed) {
    if (samples_per_manifold < 1) {
        throw std::invalid_argument("audit: samples_per_manifold must be >= 1");
    }
    const Vector& w = solution.weights;
    AuditReport report;
    report.degenerate_weights = w.squaredNorm() == 0.0;
    report.worst_margin = std::numeric_limits<double>::infinity();

    for (std::size_t p = 0; p < manifolds.size(); ++p) {
        AuditReport::PerManifold pm;
        const double xi_p = solution.slacks.size() == static_cast<Eigen::Index>(manifolds.size())
                                ? solution.slacks[static_cast<Eigen::Index>(p)]
                                : 0.0;
        double worst = std::numeric_limits<double>::infinity();
        std::size_t violations = 0;
        auto note = [&](double margin) {
            worst = std::min(worst, margin);
            if (1.0 - margin - xi_p > delta) ++violations;
            return margin;
        };

        if (const auto* e = std::get_if<EllipsoidManifold>(&manifolds[p])) {
            const double y = static_cast<double>(e->label());
            const double base = y * w.dot(e->center());
            Vector proj = e->basis().transpose() * w;
            proj.array() *= y * e->radii().array();

            std::mt19937_64 rng(mix_seed(seed, 50000 + p));
            std::gamma_distribution<double> gamma(1.0 / e->q(), 1.0);
            std::uniform_int_distribution<int> coin(0, 1);
            const int d = static_cast<int>(e->intrinsic_dim());
            Vector best_s = Vector::Unit(d, 0);
            double best_v = std::numeric_limits<double>::infinity();
            for (int t = 0; t < samples_per_manifold; ++t) {
                Vector s(d);
                for (int j = 0; j < d; ++j) {
                    const double mag = std::pow(gamma(rng), 1.0 / e->q());
                    s[j] = coin(rng) ? mag : -mag;
                }
                const double n = lq_norm(s, e->q());
                if (n <= 0.0) continue;
                s /= n;
                const double v = note(base + proj.dot(s));
                if (v < best_v) {
                    best_v = v;
                    best_s = std::move(s);
                }
            }
            double refined = best_v;
            refine_on_surface(best_s, e->q(),
                              [&](const Vector& s) { return note(base + proj.dot(s)); },
                              &refined);
            pm.analytic_worst_margin = ellipsoid_worst_point(*e, w).margin;
        } else {
            const auto& sm = std::get<SampledManifold>(manifolds[p]);
            const double y = static_cast<double>(sm.label());
            for (const auto& x : sm.points()) note(y * w.dot(x));
            pm.analytic_worst_margin = worst;  // exhaustive scan is exact here
        }

        pm.empirical_worst_margin = worst;
        pm.violations = violations;
        report.max_oracle_gap = std::max(
            report.max_oracle_gap, std::abs(pm.empirical_worst_margin - pm.analytic_worst_margin));
        report.worst_margin = std::min(report.worst_margin, worst);
        report.violation_count += violations;
        report.manifolds.push_back(pm);
    }
    return report;
}

std::string AuditReport::summary() const {
    std::ostringstream os;
    os << "audit: " << manifolds.size() << " manifolds, " << violation_count
       << " violation(s), worst margin " << worst_margin << ", max oracle gap "
       << max_oracle_gap;
    if (degenerate_weights) os << " [degenerate w=0]";
    os << "\n";
    for (std::size_t p = 0; p < manifolds.size(); ++p) {
        const auto& pm = manifolds[p];
        os << "  manifold " << p << ": worst " << pm.empirical_worst_margin << " (oracle "
           << pm.analytic_worst_margin << "), violations " << pm.violations << "\n";
    }
    return os.str();
}

}  // namespace mcp
