#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcp/types.hpp"
#include "mcp/working_set.hpp"

namespace mcp {

enum class QpMode { Hard, Slack };

/// One inner QP instance. Hard mode: min 0.5||w||^2 s.t. y_i <w,x_i> >= 1.
/// Slack mode: min 0.5||w||^2 + C sum_p xi_p with one shared slack per
/// manifold, optional hard center constraints y_p <w,c_p> >= 1, xi >= 0.
struct QpProblem {
    QpMode mode = QpMode::Hard;
    WorkingSet working_set;
    std::vector<int> labels;       // per manifold, +1/-1
    std::vector<Vector> centers;   // empty, or exactly one per manifold (slack mode)
    double slack_coefficient = 0;  // C > 0 in slack mode

    int num_manifolds() const { return static_cast<int>(labels.size()); }
    void validate() const;  // throws std::invalid_argument
};

/// Dual multipliers: alpha per working-set entry, beta per center constraint.
struct DualState {
    Vector alpha;
    Vector beta;
};

/// Raised when no feasible weight vector exists.
class InfeasibleError : public std::runtime_error {
public:
    enum class Kind { WorkingSet, Centers };
    InfeasibleError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct QpOptions {
    double tolerance = 1e-8;          // target KKT residual
    double divergence_cap = 1e12;     // dual objective cap => infeasible (hard mode)
    std::size_t max_sweeps = 1'000'000;
};

/// Dual coordinate-ascent solver with per-manifold cap projection, SMO-style
/// pair moves for capped manifolds, and an active-set polish step. Warm
/// startable across cutting-plane iterations. Single-threaded while solving;
/// use one instance per concurrent solve.
class QpSolver {
public:
    explicit QpSolver(QpOptions options = {});

    /// Solves the problem; `dual` (if non-null) provides the warm start and
    /// receives the final multipliers. Throws InfeasibleError.
    QpSolution solve(const QpProblem& problem, DualState* dual = nullptr);

    const QpOptions& options() const { return options_; }

private:
    QpOptions options_;
};

QpSolution solve_hard(const QpProblem& problem, double qp_tolerance);
QpSolution solve_slack(const QpProblem& problem, double qp_tolerance);

/// Max KKT residual of (solution, dual) for the problem: primal feasibility,
/// dual feasibility (including the per-manifold sum cap), complementary
/// slackness, and the stationarity gap ||w - sum alpha_i y_i x_i - sum
/// beta_p y_p c_p||.
double kkt_report(const QpProblem& problem, const QpSolution& solution,
                  const DualState& dual);

/// Minimal feasible slacks for fixed weights: xi_p = max(0, max_i in p (1 - y_i<w,x_i>)).
Vector recover_slacks(const QpProblem& problem, const Vector& weights);

}  // namespace mcp
