#include "mcp/driver.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mcp {

namespace {

std::size_t auto_cap_hard() { return 1'000'000; }

std::size_t auto_cap_slack(int P, double C, double L, double delta) {
    // 10x the worst-case iteration bound P*max(8CL^2/delta^2, 2/delta)
    const double bound =
        10.0 * static_cast<double>(P) *
        std::max(8.0 * C * L * L / (delta * delta), 2.0 / delta);
    if (!(bound < 1e18)) return static_cast<std::size_t>(1e18);
    return static_cast<std::size_t>(bound) + 1;
}

RunResult run_loop(const std::vector<Manifold>& manifolds,
                   const std::vector<Vector>* centers, const WorkingSet& initial_set,
                   const RunConfig& config, const IterationObserver& observer) {
    config.validate();
    const int P = static_cast<int>(manifolds.size());
    if (P == 0) throw std::invalid_argument("run: no manifolds");
    if (!initial_set.covers_all(P)) {
        throw std::invalid_argument("run: initial set must contain a point from every manifold");
    }
    const bool slack = config.slack_coefficient.has_value();
    const double L = ensemble_norm_bound(manifolds);

    QpProblem problem;
    problem.mode = slack ? QpMode::Slack : QpMode::Hard;
    problem.working_set = initial_set;
    problem.labels.reserve(P);
    for (const auto& m : manifolds) problem.labels.push_back(label_of(m));
    if (slack) {
        problem.slack_coefficient = *config.slack_coefficient;
        if (centers) problem.centers = *centers;
    }

    std::size_t cap = config.max_iterations;
    if (cap == 0) {
        cap = slack ? auto_cap_slack(P, *config.slack_coefficient, L, config.tolerance)
                    : auto_cap_hard();
    }

    QpOptions qp_opts;
    qp_opts.tolerance = config.qp_tolerance;
    qp_opts.divergence_cap = config.divergence_cap;
    qp_opts.max_sweeps = config.max_qp_sweeps;
    QpSolver solver(qp_opts);
    DualState dual;
    SeparationOracle oracle(config.rng_seed, config.oracle_restarts,
                            config.oracle_selection);

    RunResult result;
    RunTrace& trace = result.trace;
    QpSolution sol;
    for (std::size_t k = 0; k < cap; ++k) {
        try {
            sol = solver.solve(problem, &dual);
        } catch (const InfeasibleError&) {
            trace.terminal_status = TerminalStatus::Infeasible;
            result.final_set = problem.working_set;
            return result;
        }
        const Vector xi = slack ? sol.slacks : Vector::Zero(P);
        OracleResult found = oracle.find_violation(manifolds, sol.weights, xi,
                                                   config.tolerance);
        trace.iterations.push_back(RunTrace::Iteration{
            sol.objective, found.found ? found.violation : std::max(found.violation, 0.0),
            problem.working_set.size(), found.found ? found.manifold_index : -1});
        if (!found.found) {
            trace.terminal_status = TerminalStatus::Converged;
            result.solution = std::move(sol);
            result.final_set = problem.working_set;
            return result;
        }
        if (!problem.working_set.add(found.point, found.manifold_index)) {
            throw std::runtime_error(
                "run: oracle returned a point already in the working set; "
                "qp_tolerance and tolerance are inconsistent");
        }
        if (observer) {
            IterationInfo info;
            info.k = k;
            info.w_before = sol.weights;
            info.xi_before = xi;
            info.objective_before = sol.objective;
            info.violation = found.violation;
            info.added_point = found.point;
            info.added_manifold = found.manifold_index;
            QpSolution next = solver.solve(problem, &dual);
            info.w_after = next.weights;
            info.xi_after = slack ? next.slacks : Vector::Zero(P);
            info.objective_after = next.objective;
            observer(info);
        }
    }
    trace.terminal_status = TerminalStatus::MaxIterations;
    result.solution = std::move(sol);
    result.final_set = problem.working_set;
    return result;
}

}  // namespace

RunResult run_simple(const std::vector<Manifold>& manifolds,
                     const WorkingSet& initial_set, const RunConfig& config,
                     const IterationObserver& observer) {
    if (config.slack_coefficient) {
        throw std::invalid_argument("run_simple: slack_coefficient must be absent");
    }
    return run_loop(manifolds, nullptr, initial_set, config, observer);
}

RunResult run_slack(const std::vector<Manifold>& manifolds,
                    const std::vector<Vector>& centers, const WorkingSet& initial_set,
                    const RunConfig& config, const IterationObserver& observer) {
    if (!config.slack_coefficient) {
        throw std::invalid_argument("run_slack: slack_coefficient is required");
    }
    if (centers.size() != manifolds.size()) {
        throw std::invalid_argument("run_slack: one center per manifold required");
    }
    return run_loop(manifolds, &centers, initial_set, config, observer);
}

std::pair<double, double> bracket_hard(const QpSolution& solution, double delta) {
    if (delta < 0.0 || delta >= 1.0) {
        throw std::invalid_argument("bracket_hard: delta must lie in [0, 1)");
    }
    const double wsq = solution.weights.squaredNorm();
    const double shrink = 1.0 - delta;
    return {wsq, wsq / (shrink * shrink)};
}

std::pair<double, double> bracket_slack(const QpSolution& solution, int num_manifolds,
                                        double slack_coefficient, double delta) {
    const double f = solution.objective;
    return {f, f + static_cast<double>(num_manifolds) * slack_coefficient * delta};
}

int error_counter(const RunTrace& trace) {
    int errors = 0;
    for (const auto& it : trace.iterations) {
        if (it.violation > 1.0) ++errors;
    }
    return errors;
}

WorkingSet initial_working_set(const std::vector<Manifold>& manifolds,
                               InitialSet policy, std::uint64_t seed) {
    WorkingSet ws;
    std::mt19937_64 rng(seed);
    for (std::size_t p = 0; p < manifolds.size(); ++p) {
        if (policy == InitialSet::Centers) {
            ws.add(center_point(manifolds[p]), static_cast<int>(p));
            continue;
        }
        if (const auto* e = std::get_if<EllipsoidManifold>(&manifolds[p])) {
            // random surface sample: generalized-Gaussian direction on the q-sphere
            const int d = static_cast<int>(e->intrinsic_dim());
            std::gamma_distribution<double> gamma(1.0 / e->q(), 1.0);
            std::uniform_int_distribution<int> coin(0, 1);
            Vector s(d);
            for (int j = 0; j < d; ++j) {
                const double mag = std::pow(gamma(rng), 1.0 / e->q());
                s[j] = coin(rng) ? mag : -mag;
            }
            const double n = lq_norm(s, e->q());
            if (n > 0.0) {
                s /= n;
            } else {
                s = Vector::Unit(d, 0);
            }
            ws.add(e->point_at(s), static_cast<int>(p));
        } else {
            const auto& sm = std::get<SampledManifold>(manifolds[p]);
            std::uniform_int_distribution<int> pick(0, static_cast<int>(sm.size()) - 1);
            ws.add(sm.points()[pick(rng)], static_cast<int>(p));
        }
    }
    return ws;
}

}  // namespace mcp
