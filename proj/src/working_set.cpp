#include "mcp/working_set.hpp"

#include <stdexcept>

namespace mcp {

bool WorkingSet::contains(const Vector& point, int manifold_index, double tol) const {
    for (const auto& e : entries_) {
        if (e.manifold_index != manifold_index) continue;
        if (e.point.size() != point.size()) continue;
        if ((e.point - point).norm() <= tol) return true;
    }
    return false;
}

bool WorkingSet::add(Vector point, int manifold_index) {
    if (manifold_index < 0) throw std::invalid_argument("working set: negative manifold index");
    if (!point.allFinite()) throw std::invalid_argument("working set: non-finite point");
    if (!entries_.empty() && entries_.front().point.size() != point.size()) {
        throw std::invalid_argument("working set: inconsistent point dimension");
    }
    if (contains(point, manifold_index)) return false;
    entries_.push_back(Entry{std::move(point), manifold_index});
    return true;
}

bool WorkingSet::covers_all(int num_manifolds) const {
    std::vector<bool> seen(static_cast<std::size_t>(num_manifolds), false);
    for (const auto& e : entries_) {
        if (e.manifold_index < num_manifolds) seen[e.manifold_index] = true;
    }
    for (bool b : seen) {
        if (!b) return false;
    }
    return true;
}

}  // namespace mcp
