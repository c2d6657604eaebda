#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mcp/manifold.hpp"
#include "mcp/qp.hpp"
#include "mcp/types.hpp"

namespace mcp {

/// m surface samples (||s||_q = 1) of the ellipsoid, via sign-symmetric
/// generalized-Gaussian coordinates normalized onto the q-sphere.
/// Deterministic per seed.
std::vector<Vector> sample_manifold(const EllipsoidManifold& m, int count,
                                    std::uint64_t seed);

/// Conventional point SVM on pooled samples: hard margin when C is absent,
/// per-point slack otherwise. Each point is treated as its own single-point
/// manifold, so the per-point-slack dual is the shared-slack dual with
/// singleton groups and no center constraints.
QpSolution train_point_svm(const std::vector<Vector>& points,
                           const std::vector<int>& labels,
                           std::optional<double> slack_coefficient,
                           double qp_tolerance = 1e-8);

/// Fraction of fresh surface samples with y<w,x> <= 0 (ties count as errors),
/// averaged over manifolds. Deterministic per seed.
double generalization_error(const Vector& w, const std::vector<Manifold>& manifolds,
                            int tests_per_manifold, std::uint64_t seed);

}  // namespace mcp
