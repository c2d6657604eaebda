#pragma once

#include <optional>
#include <random>
#include <vector>

#include "mcp/manifold.hpp"
#include "mcp/types.hpp"

namespace mcp {

/// A manifold point minimizing y<w,x>, with the parameters that produced it.
struct WorstPoint {
    Vector point;
    Vector params;        // s for ellipsoids; single index (as double) for sampled
    double margin = 0.0;  // y<w, point>
};

/// Closed-form minimizer of y<w,x> over an L_q ellipsoid (q > 1 analytic,
/// q = 1 dispatched to the vertex rule). The minimum of the linear form over
/// the q-ball is y<w,center> minus the dual-norm ||h||_{q/(q-1)} of
/// h_i = y * radii[i] * <w, u_i>.
WorstPoint ellipsoid_worst_point(const EllipsoidManifold& m, const Vector& w);

/// q = 1 case: the minimizer is a signed vertex, s = -sign(h_i*) e_{i*} with
/// i* = argmax |h_i| (ties broken by lowest index).
WorstPoint ellipsoid_worst_point_q1(const EllipsoidManifold& m, const Vector& w);

/// Hill descent of y<w,x> over the neighbor graph from `restarts` random
/// starts plus an optional warm-start index. Deterministic given the rng.
WorstPoint sampled_worst_point(const SampledManifold& m, const Vector& w,
                               int restarts, std::mt19937_64& rng,
                               std::optional<int> warm_start = std::nullopt);

/// Separation oracle over an ensemble. Owns the rng and the per-manifold
/// warm-start cache used by sampled-manifold search; ellipsoid queries are
/// pure. One instance per run.
class SeparationOracle {
public:
    SeparationOracle(std::uint64_t rng_seed, int restarts,
                     OracleSelection selection);

    /// Scans manifolds in index order. violation_p = 1 - margin_p - xi_p;
    /// returns the first (or worst, per selection) manifold with violation >
    /// delta. When none violates, found = false and `violation` reports the
    /// largest value seen.
    OracleResult find_violation(const std::vector<Manifold>& manifolds,
                                const Vector& w, const Vector& xi, double delta);

    /// Worst point of one manifold under the current policy (dispatches on kind).
    WorstPoint worst_point(const Manifold& m, const Vector& w, int manifold_index);

private:
    std::mt19937_64 rng_;
    int restarts_;
    OracleSelection selection_;
    std::vector<std::optional<int>> warm_starts_;
};

}  // namespace mcp
