#include "grid_oracle.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace mcp::testsupport {

namespace {

double lq(const Vector& v, double q) {
    const double vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) sum += std::pow(std::abs(v[i]) / vmax, q);
    return vmax * std::pow(sum, 1.0 / q);
}

}  // namespace

GridScan grid_min_margin(const EllipsoidManifold& manifold, const Vector& w,
                         int n_samples, std::uint64_t seed) {
    const double y = static_cast<double>(manifold.label());
    const double q = manifold.q();
    const Eigen::Index d = manifold.intrinsic_dim();

    // margin through the full map, on purpose
    auto margin = [&](const Vector& s) {
        const Vector x = manifold.center() + manifold.basis() * manifold.radii().cwiseProduct(s);
        return y * w.dot(x);
    };

    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(1.0 / q, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    double sample_min = std::numeric_limits<double>::infinity();
    Vector best = Vector::Unit(d, 0);
    auto consider = [&](const Vector& s) {
        const double v = margin(s);
        if (v < sample_min) {
            sample_min = v;
            best = s;
        }
    };

    for (Eigen::Index i = 0; i < d; ++i) {
        consider(Vector::Unit(d, i));
        consider(-Vector::Unit(d, i));
    }
    for (int t = 0; t < n_samples; ++t) {
        Vector s(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            const double mag = std::pow(gamma(rng), 1.0 / q);
            s[j] = coin(rng) ? mag : -mag;
        }
        const double n = lq(s, q);
        if (n <= 0.0) continue;
        s /= n;
        consider(s);
    }

    // pattern search on the q-sphere from the best sample
    Vector s = best;
    double cur = sample_min;
    for (double step = 0.5; step > 1e-12; step *= 0.5) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 60 * d) {
            improved = false;
            for (Eigen::Index i = 0; i < d; ++i) {
                for (double dir : {+1.0, -1.0}) {
                    Vector cand = s;
                    cand[i] += dir * step;
                    const double n = lq(cand, q);
                    if (n <= 0.0) continue;
                    cand /= n;
                    const double v = margin(cand);
                    if (v < cur) {
                        cur = v;
                        s = std::move(cand);
                        improved = true;
                    }
                }
            }
        }
    }
    return GridScan{sample_min, cur};
}

}  // namespace mcp::testsupport
