#include "mcp/baseline.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mcp/ensemble.hpp"
#include "mcp/oracle.hpp"

namespace mcp {

namespace {

Vector surface_sample(const EllipsoidManifold& m, std::mt19937_64& rng) {
    const int d = static_cast<int>(m.intrinsic_dim());
    std::gamma_distribution<double> gamma(1.0 / m.q(), 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    Vector s(d);
    for (int j = 0; j < d; ++j) {
        const double mag = std::pow(gamma(rng), 1.0 / m.q());
        s[j] = coin(rng) ? mag : -mag;
    }
    const double n = lq_norm(s, m.q());
    if (n > 0.0) {
        s /= n;
    } else {
        s = Vector::Unit(d, 0);
    }
    return s;
}

}  // namespace

std::vector<Vector> sample_manifold(const EllipsoidManifold& m, int count,
                                    std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("sample_manifold: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Vector> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        out.push_back(m.point_at(surface_sample(m, rng)));
    }
    return out;
}

QpSolution train_point_svm(const std::vector<Vector>& points,
                           const std::vector<int>& labels,
                           std::optional<double> slack_coefficient,
                           double qp_tolerance) {
    if (points.empty() || points.size() != labels.size()) {
        throw std::invalid_argument("train_point_svm: points/labels mismatch");
    }
    bool pos = false, neg = false;
    for (int lab : labels) {
        if (lab == 1) pos = true;
        if (lab == -1) neg = true;
    }
    if (!pos || !neg) throw std::invalid_argument("train_point_svm: need both classes");

    // each point is its own single-point manifold; per-point slack is the
    // shared-slack dual with singleton groups and no centers
    QpProblem problem;
    problem.mode = slack_coefficient ? QpMode::Slack : QpMode::Hard;
    problem.labels = labels;
    if (slack_coefficient) problem.slack_coefficient = *slack_coefficient;
    for (std::size_t i = 0; i < points.size(); ++i) {
        problem.working_set.add(points[i], static_cast<int>(i));
    }
    return slack_coefficient ? solve_slack(problem, qp_tolerance)
                             : solve_hard(problem, qp_tolerance);
}

double generalization_error(const Vector& w, const std::vector<Manifold>& manifolds,
                            int tests_per_manifold, std::uint64_t seed) {
    if (tests_per_manifold < 1) {
        throw std::invalid_argument("generalization_error: need at least one test point");
    }
    if (manifolds.empty()) throw std::invalid_argument("generalization_error: no manifolds");
    double total = 0.0;
    for (std::size_t p = 0; p < manifolds.size(); ++p) {
        std::mt19937_64 rng(mix_seed(seed, 0x7e57 + p));
        const double y = static_cast<double>(label_of(manifolds[p]));
        std::size_t errors = 0;
        if (const auto* e = std::get_if<EllipsoidManifold>(&manifolds[p])) {
            // margin in parameter space: y<w,c> + sum_i s_i * y R_i <w,u_i>
            const double base = y * w.dot(e->center());
            Vector proj = e->basis().transpose() * w;
            proj.array() *= y * e->radii().array();
            for (int t = 0; t < tests_per_manifold; ++t) {
                const Vector s = surface_sample(*e, rng);
                if (base + proj.dot(s) <= 0.0) ++errors;  // ties count as errors
            }
            total += static_cast<double>(errors) / tests_per_manifold;
        } else {
            const auto& sm = std::get<SampledManifold>(manifolds[p]);
            std::uniform_int_distribution<int> pick(0, static_cast<int>(sm.size()) - 1);
            for (int t = 0; t < tests_per_manifold; ++t) {
                if (y * w.dot(sm.points()[pick(rng)]) <= 0.0) ++errors;
            }
            total += static_cast<double>(errors) / tests_per_manifold;
        }
    }
    return total / static_cast<double>(manifolds.size());
}

}  // namespace mcp
