#include <doctest.h>

#include <cmath>
#include <random>

#include "brute_force_qp.hpp"
#include "mcp/driver.hpp"
#include "mcp/ensemble.hpp"
#include "mcp/harness.hpp"

using namespace mcp;

namespace {

Manifold point_manifold(const Vector& x, int label) {
    return Manifold(SampledManifold({x}, {{}}, label, 0));
}

std::vector<Manifold> two_balls(double radius, double q = 2.0, int n = 3) {
    std::vector<Manifold> out;
    Matrix basis = Matrix::Identity(n, n).leftCols(2);
    out.emplace_back(
        EllipsoidManifold(Vector::Unit(n, 0), basis, Vector::Constant(2, radius), q, 1));
    out.emplace_back(
        EllipsoidManifold(-Vector::Unit(n, 0), basis, Vector::Constant(2, radius), q, -1));
    return out;
}

std::vector<Vector> centers_of(const std::vector<Manifold>& manifolds) {
    std::vector<Vector> out;
    out.reserve(manifolds.size());
    for (const auto& m : manifolds) out.push_back(center_point(m));
    return out;
}

}  // namespace

TEST_CASE("run_simple converges instantly on point manifolds") {
    std::vector<Manifold> manifolds;
    manifolds.push_back(point_manifold(Vector::Unit(3, 0), 1));
    manifolds.push_back(point_manifold(-Vector::Unit(3, 0), -1));
    RunConfig cfg;
    cfg.tolerance = 0.1;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_simple(manifolds, ws, cfg);
    CHECK(result.trace.terminal_status == TerminalStatus::Converged);
    CHECK(result.trace.augmentations() == 0);
    CHECK((result.solution.weights - Vector::Unit(3, 0)).norm() < 1e-8);
}

TEST_CASE("run_simple brackets the analytic two-ball optimum") {
    // balls of radius 0.1 at +-e1: max margin = 1 - 0.1, so w* = e1 / 0.9
    const auto manifolds = two_balls(0.1);
    RunConfig cfg;
    cfg.tolerance = 0.01;
    cfg.qp_tolerance = 1e-10;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_simple(manifolds, ws, cfg);
    REQUIRE(result.trace.terminal_status == TerminalStatus::Converged);

    const double margin_slack = 1.0 - 0.1 * result.solution.weights.norm();
    const auto worst = SeparationOracle(0, 1, OracleSelection::First)
                           .find_violation(manifolds, result.solution.weights,
                                           Vector::Zero(2), cfg.tolerance);
    CHECK_FALSE(worst.found);
    CHECK(margin_slack <= 1.0);

    const double analytic = 1.0 / (0.9 * 0.9);
    const auto [lo, hi] = bracket_hard(result.solution, cfg.tolerance);
    CHECK(lo <= analytic + 1e-9);
    CHECK(hi >= analytic - 1e-9);
}

TEST_CASE("slack run with huge C matches the hard run") {
    const auto manifolds = two_balls(0.2, 2.0, 4);
    RunConfig hard_cfg;
    hard_cfg.tolerance = 1e-7;
    hard_cfg.qp_tolerance = 1e-11;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto hard = run_simple(manifolds, ws, hard_cfg);
    REQUIRE(hard.trace.terminal_status == TerminalStatus::Converged);

    RunConfig slack_cfg = hard_cfg;
    slack_cfg.slack_coefficient = 1e6;
    const auto slack = run_slack(manifolds, centers_of(manifolds), ws, slack_cfg);
    REQUIRE(slack.trace.terminal_status == TerminalStatus::Converged);
    CHECK((hard.solution.weights - slack.solution.weights).norm() < 1e-6);
    CHECK(slack.solution.slacks.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("manifold forced through the origin gets the only positive slack") {
    // manifold 0: segment from -2e1 to 4e1 (center e1, radius 3); manifold 1: point -e1
    Matrix u(2, 1);
    u << 1.0, 0.0;
    Vector r(1);
    r << 3.0;
    EllipsoidManifold segment(Vector::Unit(2, 0), u, r, 2.0, 1);
    std::vector<Manifold> manifolds{Manifold(segment), point_manifold(-Vector::Unit(2, 0), -1)};

    RunConfig cfg;
    cfg.tolerance = 1e-6;
    cfg.qp_tolerance = 1e-10;
    cfg.slack_coefficient = 1.0;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_slack(manifolds, centers_of(manifolds), ws, cfg);
    REQUIRE(result.trace.terminal_status == TerminalStatus::Converged);
    CHECK(result.solution.slacks[0] > 0.5);
    CHECK(result.solution.slacks[1] < 1e-8);

    // cross-check objective against enumeration on the segment's extremes
    QpProblem dense;
    dense.mode = QpMode::Slack;
    dense.slack_coefficient = 1.0;
    dense.labels = {1, -1};
    dense.centers = {Vector::Unit(2, 0), -Vector::Unit(2, 0)};
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        dense.working_set.add(segment.point_at(Vector::Constant(1, s)), 0);
    }
    dense.working_set.add(-Vector::Unit(2, 0), 1);
    const auto oracle = testsupport::brute_force_solve(dense);
    REQUIRE(oracle.feasible);
    CHECK(result.solution.objective ==
          doctest::Approx(oracle.objective).epsilon(1e-6));
}

TEST_CASE("per-iteration invariants of the hard driver") {
    const auto ensemble = generate_ensemble(12, 4, 2, 0.5, 2.0, 7);
    const auto manifolds = as_manifolds(ensemble);
    const double L = ensemble_norm_bound(manifolds);
    RunConfig cfg;
    cfg.tolerance = 1e-3;
    std::size_t checked = 0;
    const auto observer = [&](const IterationInfo& info) {
        const Vector dw = info.w_after - info.w_before;
        CHECK(dw.dot(info.w_before) >= -1e-8);  // projection inequality
        const double growth =
            info.w_after.squaredNorm() - info.w_before.squaredNorm();
        CHECK(growth >= info.violation * info.violation / (L * L) - 1e-8);
        ++checked;
    };
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_simple(manifolds, ws, cfg, observer);
    REQUIRE(result.trace.terminal_status == TerminalStatus::Converged);
    CHECK(checked == result.trace.augmentations());

    // objectives recorded in the trace never decrease
    for (std::size_t i = 1; i < result.trace.iterations.size(); ++i) {
        CHECK(result.trace.iterations[i].objective >=
              result.trace.iterations[i - 1].objective - 1e-8);
    }
    // budget accounting: |T_final| = P + augmentations
    CHECK(result.final_set.size() == 4 + result.trace.augmentations());
}

TEST_CASE("per-iteration invariants of the slack driver") {
    const auto ensemble = generate_ensemble(8, 4, 2, 2.0, 2.0, 11);
    const auto manifolds = as_manifolds(ensemble);
    const double L = ensemble_norm_bound(manifolds);
    RunConfig cfg;
    cfg.tolerance = 1e-2;
    cfg.slack_coefficient = 1.0;
    cfg.qp_tolerance = 1e-9;
    const double C = *cfg.slack_coefficient;
    std::size_t checked = 0;
    const auto observer = [&](const IterationInfo& info) {
        const Vector dw = info.w_after - info.w_before;
        const double dxi = (info.xi_after - info.xi_before).sum();
        CHECK(dw.dot(info.w_before) + C * dxi >= -1e-8);
        const double df = info.objective_after - info.objective_before;
        const double dk = info.violation;
        CHECK(df >= std::min(dk * dk / (8.0 * L * L), 0.5 * C * dk) - 1e-6);
        // the added point is a support vector of the next solution
        const double y = label_of(manifolds[info.added_manifold]);
        const double activity = y * info.w_after.dot(info.added_point) +
                                info.xi_after[info.added_manifold];
        CHECK(std::abs(activity - 1.0) <= 10.0 * cfg.qp_tolerance);
        ++checked;
    };
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_slack(manifolds, centers_of(manifolds), ws, cfg, observer);
    REQUIRE(result.trace.terminal_status == TerminalStatus::Converged);
    CHECK(checked > 0);
}

TEST_CASE("quadratic lower-bound inequality fuzz") {
    // 0.5(x-d)^2 + Kx >= min(d^2/2, Kd/2) for x >= 0
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 10000; ++t) {
        const double K = 1e-3 + 10.0 * unif(rng);
        const double d = 1e-3 + 10.0 * unif(rng);
        const double x = 20.0 * unif(rng);
        const double lhs = 0.5 * (x - d) * (x - d) + K * x;
        CHECK(lhs >= std::min(0.5 * d * d, 0.5 * K * d) - 1e-12);
    }
}

TEST_CASE("bracket formulas") {
    QpSolution sol;
    sol.weights = Vector::Unit(2, 0);
    auto [lo, hi] = bracket_hard(sol, 0.1);
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(1.0 / 0.81));
    auto exact = bracket_hard(sol, 0.0);
    CHECK(exact.first == exact.second);
    CHECK_THROWS_AS(bracket_hard(sol, 1.0), std::invalid_argument);

    QpSolution fsol;
    fsol.weights = Vector::Zero(2);
    fsol.objective = 10.0;
    auto [flo, fhi] = bracket_slack(fsol, 4, 1.0, 0.1);
    CHECK(flo == doctest::Approx(10.0));
    CHECK(fhi == doctest::Approx(10.4));
    auto tight = bracket_slack(fsol, 4, 1.0, 0.0);
    CHECK(tight.first == tight.second);
}

TEST_CASE("error counter counts violations above one") {
    RunTrace trace;
    trace.iterations.push_back({0.1, 1.5, 2, 0});
    trace.iterations.push_back({0.2, 0.8, 3, 1});
    trace.iterations.push_back({0.3, 0.3, 4, 0});
    CHECK(error_counter(trace) == 1);
    trace.iterations[0].violation = 0.9;
    CHECK(error_counter(trace) == 0);
}

TEST_CASE("infeasible ensembles are reported, not crashed") {
    std::vector<Manifold> manifolds;
    manifolds.push_back(point_manifold(Vector::Unit(2, 0), 1));
    manifolds.push_back(point_manifold(Vector::Unit(2, 0), -1));  // same point, both labels
    RunConfig cfg;
    cfg.tolerance = 1e-3;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_simple(manifolds, ws, cfg);
    CHECK(result.trace.terminal_status == TerminalStatus::Infeasible);
}

TEST_CASE("iteration cap preserves the trace") {
    const auto manifolds = two_balls(0.4);
    RunConfig cfg;
    cfg.tolerance = 1e-9;  // unreachable in one step
    cfg.max_iterations = 1;
    const auto ws = initial_working_set(manifolds, InitialSet::Centers, 0);
    const auto result = run_simple(manifolds, ws, cfg);
    CHECK(result.trace.terminal_status == TerminalStatus::MaxIterations);
    CHECK(result.trace.iterations.size() == 1);

    // an audit of the truncated solution must flag at least one violation
    const auto report =
        audit_solution(result.solution, manifolds, cfg.tolerance, 20000);
    CHECK(report.violation_count >= 1);
}

TEST_CASE("random initialization also covers every manifold") {
    const auto ensemble = generate_ensemble(6, 4, 2, 1.0, 2.0, 5);
    const auto manifolds = as_manifolds(ensemble);
    const auto ws = initial_working_set(manifolds, InitialSet::RandomSurface, 99);
    CHECK(ws.size() == 4);
    CHECK(ws.covers_all(4));
    // deterministic per seed
    const auto ws2 = initial_working_set(manifolds, InitialSet::RandomSurface, 99);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        CHECK((ws[i].point - ws2[i].point).norm() == 0.0);
    }
}
