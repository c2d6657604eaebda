#include "mcp/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mcp {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

double lq_norm(const Vector& v, double q) {
    if (v.size() == 0) return 0.0;
    const double vmax = v.cwiseAbs().maxCoeff();
    if (vmax == 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        sum += std::pow(std::abs(v[i]) / vmax, q);
    }
    return vmax * std::pow(sum, 1.0 / q);
}

EllipsoidManifold::EllipsoidManifold(Vector center, Matrix basis, Vector radii,
                                     double q, int label)
    : center_(std::move(center)),
      basis_(std::move(basis)),
      radii_(std::move(radii)),
      q_(q),
      label_(label) {
    require(center_.size() > 0, "ellipsoid: empty center");
    require(basis_.rows() == center_.size(), "ellipsoid: basis rows != ambient dim");
    require(basis_.cols() == radii_.size(), "ellipsoid: basis cols != radii size");
    require(radii_.size() > 0, "ellipsoid: no radii");
    require((radii_.array() > 0.0).all(), "ellipsoid: radii must be positive");
    require(q_ >= 1.0, "ellipsoid: q must be >= 1");
    require(label_ == 1 || label_ == -1, "ellipsoid: label must be +1 or -1");
    require(center_.allFinite() && basis_.allFinite() && radii_.allFinite(),
            "ellipsoid: non-finite data");
    for (Eigen::Index j = 0; j < basis_.cols(); ++j) {
        const double n = basis_.col(j).norm();
        require(n > 0.0, "ellipsoid: zero basis column");
        // idempotent: keeps serialize/parse round trips bit-exact
        if (std::abs(n - 1.0) > 1e-12) basis_.col(j) /= n;
    }
}

Vector EllipsoidManifold::point_at(const Vector& s) const {
    require(s.size() == radii_.size(), "point_at: wrong parameter dimension");
    if (lq_norm(s, q_) > 1.0 + 1e-9) {
        throw std::invalid_argument("point_at: s outside the unit q-ball");
    }
    return center_ + basis_ * radii_.cwiseProduct(s);
}

double EllipsoidManifold::norm_bound() const {
    return center_.norm() + radii_.sum();
}

SampledManifold::SampledManifold(std::vector<Vector> points,
                                 std::vector<std::vector<int>> neighbor_lists,
                                 int label, int center_index)
    : points_(std::move(points)),
      neighbors_(std::move(neighbor_lists)),
      label_(label),
      center_index_(center_index) {
    require(!points_.empty(), "sampled manifold: no points");
    require(neighbors_.size() == points_.size(),
            "sampled manifold: neighbor list count != point count");
    require(label_ == 1 || label_ == -1, "sampled manifold: label must be +1 or -1");
    require(center_index_ >= 0 && center_index_ < static_cast<int>(points_.size()),
            "sampled manifold: center index out of range");
    const int n = static_cast<int>(points_.size());
    for (int i = 0; i < n; ++i) {
        require(points_[i].size() == points_[0].size(),
                "sampled manifold: inconsistent point dimensions");
        for (int j : neighbors_[i]) {
            require(j >= 0 && j < n && j != i, "sampled manifold: bad neighbor index");
            const auto& back = neighbors_[j];
            require(std::find(back.begin(), back.end(), i) != back.end(),
                    "sampled manifold: neighbor lists not symmetric");
        }
    }
}

double SampledManifold::norm_bound() const {
    double best = 0.0;
    for (const auto& p : points_) best = std::max(best, p.norm());
    return best;
}

int label_of(const Manifold& m) {
    return std::visit([](const auto& v) { return v.label(); }, m);
}

Eigen::Index ambient_dim(const Manifold& m) {
    if (const auto* e = std::get_if<EllipsoidManifold>(&m)) return e->ambient_dim();
    return std::get<SampledManifold>(m).points()[0].size();
}

Vector center_point(const Manifold& m) {
    if (const auto* e = std::get_if<EllipsoidManifold>(&m)) return e->center();
    const auto& s = std::get<SampledManifold>(m);
    return s.points()[s.center_index()];
}

double norm_bound(const EllipsoidManifold& m) { return m.norm_bound(); }
double norm_bound(const SampledManifold& m) { return m.norm_bound(); }

double norm_bound(const Manifold& m) {
    return std::visit([](const auto& v) { return v.norm_bound(); }, m);
}

double ensemble_norm_bound(const std::vector<Manifold>& manifolds) {
    double best = 0.0;
    for (const auto& m : manifolds) best = std::max(best, norm_bound(m));
    return best;
}

Vector point_on_manifold(const EllipsoidManifold& m, const Vector& s) {
    return m.point_at(s);
}

SampledManifold discretize_ellipsoid(const EllipsoidManifold& m, int n_samples,
                                     int k_neighbors, std::uint64_t seed) {
    require(n_samples >= 1, "discretize: need at least one sample");
    require(k_neighbors >= 1, "discretize: need at least one neighbor");
    const int d = static_cast<int>(m.intrinsic_dim());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::gamma_distribution<double> gamma(1.0 / m.q(), 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    std::vector<Vector> params(n_samples);
    std::vector<Vector> points(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        Vector s(d);
        for (int j = 0; j < d; ++j) {
            const double mag = std::pow(gamma(rng), 1.0 / m.q());
            s[j] = coin(rng) ? mag : -mag;
        }
        const double n = lq_norm(s, m.q());
        s = (n > 0.0) ? Vector(s / n) : Vector(Vector::Unit(d, 0));
        params[i] = s;
        points[i] = m.point_at(s);
    }

    // k nearest neighbors in parameter space, symmetrized
    const int k = std::min(k_neighbors, n_samples - 1);
    std::vector<std::vector<int>> nbr(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        std::vector<std::pair<double, int>> dist;
        dist.reserve(n_samples - 1);
        for (int j = 0; j < n_samples; ++j) {
            if (j == i) continue;
            dist.emplace_back((params[i] - params[j]).squaredNorm(), j);
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        for (int t = 0; t < k; ++t) nbr[i].push_back(dist[t].second);
    }
    for (int i = 0; i < n_samples; ++i) {
        for (int j : nbr[i]) {
            if (std::find(nbr[j].begin(), nbr[j].end(), i) == nbr[j].end()) {
                nbr[j].push_back(i);
            }
        }
    }

    // center = sample closest to s = 0
    int center = 0;
    double best = params[0].squaredNorm();
    for (int i = 1; i < n_samples; ++i) {
        const double v = params[i].squaredNorm();
        if (v < best) {
            best = v;
            center = i;
        }
    }
    return SampledManifold(std::move(points), std::move(nbr), m.label(), center);
}

}  // namespace mcp
