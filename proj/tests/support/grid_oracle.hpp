#pragma once

// Independent margin oracle for ellipsoid manifolds: dense surface sampling
// followed by derivative-free pattern-search refinement. Evaluates margins
// only through the full parameterization (center + basis * (radii .* s)),
// never through the closed-form dual-norm expression it is used to check.

#include <cstdint>

#include "mcp/manifold.hpp"

namespace mcp::testsupport {

struct GridScan {
    double sample_min;   // min margin over the raw random samples (+ axis vertices)
    double refined_min;  // after local refinement from the best candidates
};

GridScan grid_min_margin(const EllipsoidManifold& manifold, const Vector& w,
                         int n_samples, std::uint64_t seed);

}  // namespace mcp::testsupport
