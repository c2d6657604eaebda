#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcp/manifold.hpp"
#include "mcp/types.hpp"

namespace mcp {

/// Random L_q ellipsoid ensemble: Gaussian centers and directions (basis
/// columns unit-normalized), radii Unif[0.5*R0, 1.5*R0], labels +1 for the
/// first P/2 manifolds and -1 for the rest. P must be even.
std::vector<EllipsoidManifold> generate_ensemble(int ambient_dim, int num_manifolds,
                                                 int intrinsic_dim, double mean_radius,
                                                 double q, std::uint64_t seed);

std::vector<Manifold> as_manifolds(const std::vector<EllipsoidManifold>& ensemble);

/// Appends a constant-1 coordinate to every center (a zero row to every
/// basis), the standard trick for modeling a bias term.
std::vector<EllipsoidManifold> append_bias_coordinate(
    const std::vector<EllipsoidManifold>& ensemble);

// JSON serialization. Doubles are printed with 17 significant digits.
// Document shape: {"N":..,"D":..,"q":..,"manifolds":[{"label":..,"center":[..],
// "radii":[..],"basis":[[..]]}]} with basis as N rows of D values.
std::string ensemble_to_json(const std::vector<EllipsoidManifold>& ensemble);
std::vector<EllipsoidManifold> ensemble_from_json(const std::string& text);
void save_ensemble(const std::string& path, const std::vector<EllipsoidManifold>& ensemble);
std::vector<EllipsoidManifold> load_ensemble(const std::string& path);

std::string solution_to_json(const QpSolution& solution);
QpSolution solution_from_json(const std::string& text);
void save_solution(const std::string& path, const QpSolution& solution);
QpSolution load_solution(const std::string& path);

/// Deterministic stream splitting: mixes a seed with a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace mcp
