#pragma once

#include <cstddef>
#include <vector>

#include "mcp/types.hpp"

namespace mcp {

/// The finite training set of a cutting-plane iteration: (point, manifold
/// index) pairs. Points are never removed; duplicates within 1e-12 Euclidean
/// distance on the same manifold are rejected.
class WorkingSet {
public:
    struct Entry {
        Vector point;
        int manifold_index;
    };

    WorkingSet() = default;

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }

    bool contains(const Vector& point, int manifold_index,
                  double tol = kDuplicateTol) const;

    /// Returns false (and leaves the set unchanged) on a duplicate.
    bool add(Vector point, int manifold_index);

    /// True when every manifold index in [0, num_manifolds) appears.
    bool covers_all(int num_manifolds) const;

    static constexpr double kDuplicateTol = 1e-12;

private:
    std::vector<Entry> entries_;
};

}  // namespace mcp
