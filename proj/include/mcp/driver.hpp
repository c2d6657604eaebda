#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mcp/manifold.hpp"
#include "mcp/oracle.hpp"
#include "mcp/qp.hpp"
#include "mcp/types.hpp"
#include "mcp/working_set.hpp"

namespace mcp {

struct RunResult {
    QpSolution solution;
    RunTrace trace;
    WorkingSet final_set;
};

/// Snapshot handed to an iteration observer after each augmentation:
/// the solve at k produced (w_before, xi_before), the oracle found
/// `violation` on `added_manifold`, and re-solving gave (w_after, xi_after).
struct IterationInfo {
    std::size_t k = 0;
    Vector w_before;
    Vector w_after;
    Vector xi_before;
    Vector xi_after;
    double objective_before = 0.0;
    double objective_after = 0.0;
    double violation = 0.0;
    Vector added_point;
    int added_manifold = -1;
};

using IterationObserver = std::function<void(const IterationInfo&)>;

/// Hard-margin cutting-plane driver: solve the working-set QP, add the worst
/// violating manifold point, repeat until no violation exceeds
/// config.tolerance. initial_set must cover every manifold.
RunResult run_simple(const std::vector<Manifold>& manifolds,
                     const WorkingSet& initial_set, const RunConfig& config,
                     const IterationObserver& observer = {});

/// Per-manifold-slack variant with hard center constraints.
RunResult run_slack(const std::vector<Manifold>& manifolds,
                    const std::vector<Vector>& centers,
                    const WorkingSet& initial_set, const RunConfig& config,
                    const IterationObserver& observer = {});

/// Bracket on the optimal hard-margin objective after a converged run:
/// (||w||^2, ||w||^2 / (1-delta)^2). Throws for delta >= 1.
std::pair<double, double> bracket_hard(const QpSolution& solution, double delta);

/// Bracket on the optimal slack objective: (F, F + P*C*delta).
std::pair<double, double> bracket_slack(const QpSolution& solution, int num_manifolds,
                                        double slack_coefficient, double delta);

/// Number of iterations whose violation exceeded 1 (classification errors).
int error_counter(const RunTrace& trace);

/// One point per manifold: centers, or seeded random surface samples.
WorkingSet initial_working_set(const std::vector<Manifold>& manifolds,
                               InitialSet policy, std::uint64_t seed);

}  // namespace mcp
