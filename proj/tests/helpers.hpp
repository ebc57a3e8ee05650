#pragma once

#include <algorithm>
#include <initializer_list>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "powerd/geometry.hpp"
#include "powerd/sites.hpp"

namespace powerd::testutil {

inline Vec V(std::initializer_list<double> vals) {
    Vec x(static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) x[i++] = v;
    return x;
}

inline Vec random_point(int n, std::mt19937_64& rng) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = canonical53(rng);
    return x;
}

// canonical edge set (sorted pairs) for order-insensitive comparison
inline std::set<std::pair<int32_t, int32_t>> edge_set(
    const std::vector<std::pair<int32_t, int32_t>>& edges) {
    std::set<std::pair<int32_t, int32_t>> s;
    for (auto [a, b] : edges) s.insert({std::min(a, b), std::max(a, b)});
    return s;
}

}  // namespace powerd::testutil
