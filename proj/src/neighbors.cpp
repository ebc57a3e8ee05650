#include "powerd/neighbors.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <utility>

namespace powerd {

KdTree::KdTree(const std::vector<Vec>& pts) : pts_(&pts) {
    order_.resize(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) order_[i] = static_cast<int>(i);
    dims_ = pts.empty() ? 0 : pts[0].n;
    if (!pts.empty()) build(0, static_cast<int>(pts.size()), 0);
}

void KdTree::build(int lo, int hi, int depth) {
    if (hi - lo <= 1) return;
    int axis = depth % dims_;
    int mid = (lo + hi) / 2;
    const auto& p = *pts_;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](int a, int b) {
                         if (p[a][axis] != p[b][axis]) return p[a][axis] < p[b][axis];
                         return a < b;
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
}

namespace {
using HeapEntry = std::pair<double, int>;  // (dist2, index); max-heap on this pair
}

std::vector<int> KdTree::knn(const Vec& x, int k, int exclude) const {
    const auto& p = *pts_;
    int avail = size() - (exclude >= 0 ? 1 : 0);
    if (k > avail) k = avail;
    std::vector<int> result;
    if (k <= 0) return result;

    std::priority_queue<HeapEntry> heap;
    auto visit = [&](int idx) {
        if (idx == exclude) return;
        HeapEntry e{dist2(x, p[idx]), idx};
        if (static_cast<int>(heap.size()) < k) {
            heap.push(e);
        } else if (e < heap.top()) {
            heap.pop();
            heap.push(e);
        }
    };

    // explicit recursion keeps the hot path allocation-free
    auto search = [&](auto&& self, int lo, int hi, int depth) -> void {
        if (lo >= hi) return;
        int mid = (lo + hi) / 2;
        int idx = order_[mid];
        visit(idx);
        if (hi - lo == 1) return;
        int axis = depth % dims_;
        double diff = x[axis] - p[idx][axis];
        bool go_left_first = diff <= 0;
        double plane2 = diff * diff;
        if (go_left_first) {
            self(self, lo, mid, depth + 1);
            if (static_cast<int>(heap.size()) < k || plane2 <= heap.top().first)
                self(self, mid + 1, hi, depth + 1);
        } else {
            self(self, mid + 1, hi, depth + 1);
            if (static_cast<int>(heap.size()) < k || plane2 <= heap.top().first)
                self(self, lo, mid, depth + 1);
        }
    };
    search(search, 0, size(), 0);

    std::vector<HeapEntry> entries;
    entries.reserve(heap.size());
    while (!heap.empty()) {
        entries.push_back(heap.top());
        heap.pop();
    }
    std::sort(entries.begin(), entries.end());
    result.reserve(entries.size());
    for (const auto& e : entries) result.push_back(e.second);
    return result;
}

NeighborCache::NeighborCache(const std::vector<Vec>& z, int initial_batch, int increment)
    : z_(&z), tree_(z), lists_(z.size()), initial_batch_(initial_batch), increment_(increment) {}

int NeighborCache::next_neighbor(int i, int j) {
    int n = count();
    if (j > n - 1) throw std::out_of_range("neighbor rank exhausted");
    auto& list = lists_[i];
    if (static_cast<int>(list.size()) < j) {
        int want = static_cast<int>(list.size());
        if (want == 0) want = std::min(initial_batch_, n - 1);
        while (want < j) want = std::min(want + increment_, n - 1);
        list = tree_.knn((*z_)[i], want, i);
    }
    return list[j - 1];
}

}  // namespace powerd
