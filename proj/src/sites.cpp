#include "powerd/sites.hpp"

#include <algorithm>
#include <cmath>

namespace powerd {

void SiteSet::lift() {
    double wmax = 0;
    if (!weights.empty()) wmax = *std::max_element(weights.begin(), weights.end());
    lifted.resize(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        Vec z(dim + 1);
        for (int c = 0; c < dim; ++c) z[c] = points[i][c];
        double rad = wmax - weights[i];
        z[dim] = rad > 0 ? std::sqrt(rad) : 0.0;
        lifted[i] = z;
    }
}

SiteSet white_noise_sites(int d, int N, std::uint64_t seed) {
    SiteSet s;
    s.dim = d;
    s.points.reserve(N);
    std::mt19937_64 rng(seed);
    for (int i = 0; i < N; ++i) {
        Vec p(d);
        for (int c = 0; c < d; ++c) p[c] = canonical53(rng);
        s.points.push_back(p);
    }
    s.weights.assign(N, 0.0);
    s.lift();
    return s;
}

SiteSet blue_noise_sites(int d, int N, std::uint64_t seed, double radius, double* used_radius) {
    SiteSet s;
    s.dim = d;
    std::mt19937_64 rng(seed);
    if (radius <= 0) radius = 0.7 * std::pow(static_cast<double>(N), -1.0 / d);
    if (used_radius) *used_radius = radius;
    double r2 = radius * radius;

    // plain dart throwing with a uniform-grid acceleration structure
    int cells = std::max(1, static_cast<int>(std::floor(1.0 / radius)));
    double cell_w = 1.0 / cells;
    long long total = 1;
    for (int c = 0; c < d; ++c) {
        total *= cells;
        if (total > 64LL * 1024 * 1024) {  // grid too large to be useful; fall back
            cells = 1;
            cell_w = 1.0;
            total = 1;
            break;
        }
    }
    std::vector<std::vector<int>> grid(static_cast<size_t>(total));
    auto cell_of = [&](const Vec& p) {
        long long idx = 0;
        for (int c = 0; c < d; ++c) {
            int k = std::min(cells - 1, static_cast<int>(p[c] / cell_w));
            idx = idx * cells + k;
        }
        return idx;
    };

    long long attempts_left = 100LL * N;
    while (s.size() < N && attempts_left-- > 0) {
        Vec p(d);
        for (int c = 0; c < d; ++c) p[c] = canonical53(rng);

        bool ok = true;
        // scan the grid neighborhood that can contain a conflicting point
        int reach = static_cast<int>(std::ceil(radius / cell_w));
        int lo[kMaxAmbient], hi[kMaxAmbient], cur[kMaxAmbient];
        for (int c = 0; c < d; ++c) {
            int k = std::min(cells - 1, static_cast<int>(p[c] / cell_w));
            lo[c] = std::max(0, k - reach);
            hi[c] = std::min(cells - 1, k + reach);
            cur[c] = lo[c];
        }
        while (ok) {
            long long idx = 0;
            for (int c = 0; c < d; ++c) idx = idx * cells + cur[c];
            for (int j : grid[static_cast<size_t>(idx)]) {
                if (dist2(p, s.points[j]) < r2) {
                    ok = false;
                    break;
                }
            }
            int c = d - 1;
            while (c >= 0) {
                if (++cur[c] <= hi[c]) break;
                cur[c] = lo[c];
                --c;
            }
            if (c < 0) break;
        }
        if (ok) {
            grid[static_cast<size_t>(cell_of(p))].push_back(s.size());
            s.points.push_back(p);
        }
    }
    s.weights.assign(s.points.size(), 0.0);
    s.lift();
    return s;
}

}  // namespace powerd
