#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcp/ensemble.hpp"
#include "mcp/manifold.hpp"
#include "mcp/qp.hpp"
#include "mcp/types.hpp"

namespace mcp {

/// Experiment description, parsed from a single JSON document. Unset fields
/// take the defaults below; the output CSV header echoes the resolved values.
struct ExperimentConfig {
    int ambient_dim = 0;         // N
    int num_manifolds = 0;       // P, even
    int intrinsic_dim = 0;       // D
    double mean_radius = 1.0;    // R0
    double q = 2.0;
    std::optional<double> slack_coefficient;  // C, required in slack mode
    double delta = 1e-3;
    std::vector<std::uint64_t> seeds = {1};
    std::optional<std::vector<int>> budgets;  // absent => geometric grid P..200P;
                                              // empty => no baseline rows
    QpMode mode = QpMode::Hard;
    OracleSelection oracle_selection = OracleSelection::First;
    double qp_tolerance = 1e-8;
    int test_points = 1000;      // generalization test samples per manifold
    bool append_bias = false;
    int threads = 0;             // 0 => hardware concurrency
    std::size_t max_iterations = 0;

    static ExperimentConfig from_json(const std::string& text);  // throws with diagnostics
    std::string to_json() const;
    void validate() const;
    std::vector<int> resolved_budgets() const;
};

struct ResultRow {
    std::string method;       // "mcp" or "point_svm"
    std::uint64_t seed = 0;
    int budget = 0;           // training points consumed
    double gen_error = 0.0;   // NaN when no solution
    std::size_t iters = 0;
    double objective = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::string status;
    double wall_ms = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    // traces keyed like "mcp_seed<seed>"; populated for the mcp runs
    std::vector<std::pair<std::string, RunTrace>> traces;
    std::vector<std::pair<std::string, QpSolution>> solutions;
};

/// Runs M_CP and the point-SVM baseline over all seeds and budgets with a
/// worker pool; rows come back sorted by (method, seed, budget).
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string results_to_csv(const ExperimentConfig& config,
                           const std::vector<ResultRow>& rows);

/// Independent termination audit: densely sample every manifold and count
/// constraint violations beyond delta. Sampling is uniform on the surface
/// plus a derivative-free local refinement per manifold, so the reported
/// worst margin tracks the true minimum.
struct AuditReport {
    struct PerManifold {
        double empirical_worst_margin = 0.0;
        double analytic_worst_margin = 0.0;  // oracle value (exact for ellipsoids)
        std::size_t violations = 0;
    };
    std::vector<PerManifold> manifolds;
    double worst_margin = 0.0;
    std::size_t violation_count = 0;
    double max_oracle_gap = 0.0;  // max |empirical - analytic|
    bool degenerate_weights = false;  // w == 0 flagged

    std::string summary() const;
};

AuditReport audit_solution(const QpSolution& solution,
                           const std::vector<Manifold>& manifolds, double delta,
                           int samples_per_manifold, std::uint64_t seed = 202406);

}  // namespace mcp
