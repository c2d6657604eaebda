#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "brute_force_qp.hpp"
#include "mcp/baseline.hpp"
#include "mcp/ensemble.hpp"

using namespace mcp;

namespace {

EllipsoidManifold ball(const Vector& center, int d, double radius, double q, int label) {
    const int n = static_cast<int>(center.size());
    Matrix basis = Matrix::Identity(n, n).leftCols(d);
    return EllipsoidManifold(center, basis, Vector::Constant(d, radius), q, label);
}

// recover s from a sample: basis * (radii .* s) = x - center
Vector recover_params(const EllipsoidManifold& m, const Vector& x) {
    const Vector rhs = x - m.center();
    const Vector rs = m.basis().colPivHouseholderQr().solve(rhs);
    return rs.cwiseQuotient(m.radii());
}

}  // namespace

TEST_CASE("surface samples sit on the q-sphere") {
    for (double q : {1.0, 2.0, 50.0}) {
        const auto m = ball(Vector::Unit(4, 0), 3, 2.0, q, 1);
        const auto samples = sample_manifold(m, 200, 31);
        for (const auto& x : samples) {
            const Vector s = recover_params(m, x);
            CHECK(std::abs(lq_norm(s, q) - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("one-dimensional surface is two points") {
    const auto m = ball(Vector::Zero(3), 1, 2.0, 2.0, 1);
    const auto samples = sample_manifold(m, 50, 7);
    for (const auto& x : samples) {
        CHECK(std::abs(std::abs(x[0]) - 2.0) <= 1e-12);
        CHECK(x.tail(2).norm() <= 1e-12);
    }
}

TEST_CASE("sampling is symmetric and deterministic") {
    const auto m = ball(Vector::Zero(5), 4, 1.0, 2.0, 1);
    const auto samples = sample_manifold(m, 100000, 11);
    Vector mean = Vector::Zero(4);
    for (const auto& x : samples) mean += recover_params(m, x);
    mean /= static_cast<double>(samples.size());
    CHECK(mean.norm() <= 0.02);

    const auto again = sample_manifold(m, 100, 11);
    const auto first = sample_manifold(m, 100, 11);
    for (int i = 0; i < 100; ++i) CHECK((again[i] - first[i]).norm() == 0.0);
}

TEST_CASE("point svm on the symmetric pair") {
    std::vector<Vector> pts{Vector::Unit(2, 0), -Vector::Unit(2, 0)};
    std::vector<int> labels{1, -1};
    const auto sol = train_point_svm(pts, labels, std::nullopt);
    CHECK((sol.weights - Vector::Unit(2, 0)).norm() < 1e-8);

    // definitional reduction: identical to solve_hard on singleton manifolds
    QpProblem p;
    p.mode = QpMode::Hard;
    p.labels = labels;
    p.working_set.add(pts[0], 0);
    p.working_set.add(pts[1], 1);
    const auto direct = solve_hard(p, 1e-8);
    CHECK(std::abs(sol.objective - direct.objective) <= 1e-12);
}

TEST_CASE("per-point slack equals shared slack on singletons") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    std::vector<Vector> pts;
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) {
        Vector x(3);
        for (int j = 0; j < 3; ++j) x[j] = gauss(rng);
        pts.push_back(x);
        labels.push_back(i % 2 ? 1 : -1);
    }
    const auto sol = train_point_svm(pts, labels, 1.0, 1e-10);

    QpProblem p;
    p.mode = QpMode::Slack;
    p.slack_coefficient = 1.0;
    p.labels = labels;
    for (int i = 0; i < 8; ++i) p.working_set.add(pts[i], i);
    const auto direct = solve_slack(p, 1e-10);
    CHECK(std::abs(sol.objective - direct.objective) <= 1e-9);

    // independent enumeration oracle (8 margin rows + 8 slack bounds)
    const auto oracle = testsupport::brute_force_solve(p);
    REQUIRE(oracle.feasible);
    CHECK(std::abs(sol.objective - oracle.objective) <=
          1e-7 * std::max(1.0, std::abs(oracle.objective)));
}

TEST_CASE("hard point svm reports infeasible samples") {
    std::vector<Vector> pts{Vector::Unit(2, 0), Vector::Unit(2, 0)};
    std::vector<int> labels{1, -1};
    CHECK_THROWS_AS(train_point_svm(pts, labels, std::nullopt), InfeasibleError);
    CHECK_THROWS_AS(train_point_svm(pts, {1, 1}, std::nullopt), std::invalid_argument);
}

TEST_CASE("generalization error conventions") {
    std::vector<Manifold> manifolds;
    manifolds.emplace_back(ball(5.0 * Vector::Unit(3, 0), 2, 1.0, 2.0, 1));
    manifolds.emplace_back(ball(-5.0 * Vector::Unit(3, 0), 2, 1.0, 2.0, -1));

    // w = 0 scores every point at zero; ties count as errors
    CHECK(generalization_error(Vector::Zero(3), manifolds, 100, 3) == doctest::Approx(1.0));

    // a separator with margin is error-free, and scale does not matter
    const Vector w = Vector::Unit(3, 0);
    CHECK(generalization_error(w, manifolds, 1000, 3) == doctest::Approx(0.0));
    CHECK(generalization_error(17.0 * w, manifolds, 1000, 3) == doctest::Approx(0.0));
}

TEST_CASE("bisected manifolds sit at one-half error") {
    // both manifolds extend only in directions orthogonal to their offset from
    // the w-plane, so w slices each one exactly in half
    Matrix span(4, 2);
    span.setZero();
    span(1, 0) = 1.0;
    span(2, 1) = 1.0;
    std::vector<Manifold> manifolds;
    manifolds.emplace_back(EllipsoidManifold(5.0 * Vector::Unit(4, 3), span,
                                             Vector::Constant(2, 2.0), 2.0, 1));
    manifolds.emplace_back(EllipsoidManifold(-5.0 * Vector::Unit(4, 3), span,
                                             Vector::Constant(2, 2.0), 2.0, -1));
    const Vector w = Vector::Unit(4, 1);  // sees only the first span direction
    const double err = generalization_error(w, manifolds, 1000, 17);
    CHECK(err == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(err - 0.5) <= 0.05);
}
