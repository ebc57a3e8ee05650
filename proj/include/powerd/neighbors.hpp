#pragma once

#include <vector>

#include "powerd/vec.hpp"

namespace powerd {

// Static balanced kd-tree over a fixed point set. Median split, axes cycled
// by depth. Ties in distance are broken by ascending point index so query
// results are deterministic.
class KdTree {
   public:
    KdTree() = default;
    explicit KdTree(const std::vector<Vec>& pts);

    // k nearest points to x excluding index `exclude`, sorted by
    // (distance, index) ascending. k is clamped to the available count.
    std::vector<int> knn(const Vec& x, int k, int exclude = -1) const;

    int size() const { return static_cast<int>(order_.size()); }

   private:
    void build(int lo, int hi, int depth);
    const std::vector<Vec>* pts_ = nullptr;
    std::vector<int> order_;  // implicit tree: node of [lo,hi) is the middle element
    int dims_ = 0;
};

// Ranked-neighbor provider over lifted sites. Lists are materialized in
// batches (50 up front, then 10 at a time) and cached per site. The tree is
// read-only after build; each site's list may only be touched by the worker
// that owns that site.
class NeighborCache {
   public:
    NeighborCache() = default;
    explicit NeighborCache(const std::vector<Vec>& z, int initial_batch = 50, int increment = 10);

    // j-th nearest distinct site to site i (j is 1-based). Throws
    // std::out_of_range once every other site has been consumed (j > N-1).
    int next_neighbor(int i, int j);

    // squared lifted distance from site i to site idx
    double dist2_to(int i, int idx) const { return dist2((*z_)[i], (*z_)[idx]); }

    int count() const { return static_cast<int>(lists_.size()); }
    int materialized(int i) const { return static_cast<int>(lists_[i].size()); }

   private:
    const std::vector<Vec>* z_ = nullptr;
    KdTree tree_;
    std::vector<std::vector<int>> lists_;
    int initial_batch_ = 50;
    int increment_ = 10;
};

}  // namespace powerd
