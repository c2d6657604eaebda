#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "mcp/types.hpp"

namespace mcp {

/// L_q ellipsoid manifold: { center + sum_i radii[i] * s[i] * basis.col(i) :
/// ||s||_q <= 1 }. Basis columns are normalized to unit Euclidean norm at
/// construction so the radii are the true semi-axis lengths.
class EllipsoidManifold {
public:
    EllipsoidManifold(Vector center, Matrix basis, Vector radii, double q, int label);

    Eigen::Index ambient_dim() const { return center_.size(); }
    Eigen::Index intrinsic_dim() const { return radii_.size(); }
    const Vector& center() const { return center_; }
    const Matrix& basis() const { return basis_; }
    const Vector& radii() const { return radii_; }
    double q() const { return q_; }
    int label() const { return label_; }

    /// Map parameters s (||s||_q <= 1 + 1e-9) to the ambient point.
    Vector point_at(const Vector& s) const;

    /// Upper bound on ||x|| over the manifold: ||center|| + sum(radii).
    double norm_bound() const;

private:
    Vector center_;
    Matrix basis_;   // N x D, unit-norm columns
    Vector radii_;   // > 0
    double q_;       // >= 1
    int label_;      // +1 or -1
};

/// Finite point-cloud manifold with a symmetric neighbor graph, searched by
/// hill descent instead of a closed form.
class SampledManifold {
public:
    SampledManifold(std::vector<Vector> points,
                    std::vector<std::vector<int>> neighbor_lists,
                    int label, int center_index);

    std::size_t size() const { return points_.size(); }
    const std::vector<Vector>& points() const { return points_; }
    const std::vector<std::vector<int>>& neighbor_lists() const { return neighbors_; }
    int label() const { return label_; }
    int center_index() const { return center_index_; }

    double norm_bound() const;  // max point norm

private:
    std::vector<Vector> points_;
    std::vector<std::vector<int>> neighbors_;
    int label_;
    int center_index_;
};

using Manifold = std::variant<EllipsoidManifold, SampledManifold>;

int label_of(const Manifold& m);
Eigen::Index ambient_dim(const Manifold& m);

/// The designated representative point: ellipsoid center or center_index sample.
Vector center_point(const Manifold& m);

double norm_bound(const Manifold& m);
double norm_bound(const EllipsoidManifold& m);
double norm_bound(const SampledManifold& m);

/// Max norm_bound over an ensemble (the L in the convergence bounds).
double ensemble_norm_bound(const std::vector<Manifold>& manifolds);

Vector point_on_manifold(const EllipsoidManifold& m, const Vector& s);

/// ||v||_q for q >= 1, computed with max-scaling so large q stays stable.
double lq_norm(const Vector& v, double q);

/// Build a discretized copy of an ellipsoid: n surface samples with a
/// symmetric k-nearest-neighbor graph in parameter space.
SampledManifold discretize_ellipsoid(const EllipsoidManifold& m, int n_samples,
                                     int k_neighbors, std::uint64_t seed);

}  // namespace mcp
