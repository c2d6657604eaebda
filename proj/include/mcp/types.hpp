#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// How the separation oracle picks among several violating manifolds.
enum class OracleSelection { First, Worst };

/// How the initial working set is seeded.
enum class InitialSet { Centers, RandomSurface };

enum class TerminalStatus { Converged, Infeasible, MaxIterations };

std::string to_string(TerminalStatus status);
std::optional<TerminalStatus> terminal_status_from_string(const std::string& s);

/// Settings for one cutting-plane run. slack_coefficient absent means the
/// hard-margin variant; present means per-manifold slacks with weight C.
struct RunConfig {
    double tolerance = 1e-3;                      // oracle violation tolerance (delta)
    std::optional<double> slack_coefficient;      // C; absent => hard margin
    std::size_t max_iterations = 0;               // 0 => automatic safety cap
    double qp_tolerance = 1e-8;                   // inner QP KKT tolerance
    std::uint64_t rng_seed = 0;
    OracleSelection oracle_selection = OracleSelection::First;
    InitialSet initial_set = InitialSet::Centers;
    int oracle_restarts = 8;                      // sampled-manifold local search restarts
    double divergence_cap = 1e12;                 // dual objective cap => infeasible
    std::size_t max_qp_sweeps = 1'000'000;        // stall cap for one inner solve

    void validate() const;  // throws std::invalid_argument
};

/// Result of one inner QP solve. Slacks are all zero in hard mode.
/// objective is 0.5*||w||^2 (+ C * sum(xi) in slack mode).
struct QpSolution {
    Vector weights;
    Vector slacks;
    double objective = 0.0;
    double kkt_residual = 0.0;
};

/// Worst violating point reported by the separation oracle.
struct OracleResult {
    bool found = false;
    Vector point;
    int manifold_index = -1;
    double violation = 0.0;  // delta_k = 1 - margin - xi_p
};

/// Per-iteration record of a cutting-plane run, one entry per inner solve.
/// The terminal entry (no augmentation) has added_manifold = -1.
struct RunTrace {
    struct Iteration {
        double objective = 0.0;
        double violation = 0.0;
        std::size_t working_set_size = 0;
        int added_manifold = -1;
    };
    std::vector<Iteration> iterations;
    TerminalStatus terminal_status = TerminalStatus::MaxIterations;

    /// Number of augmentation steps (entries that added a point).
    std::size_t augmentations() const;

    std::string to_csv() const;
    static RunTrace from_csv(const std::string& text);  // throws on malformed input
};

}  // namespace mcp
