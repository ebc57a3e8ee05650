#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "powerd/vec.hpp"

namespace powerd {

// Sites with weights plus their lifted embedding. lift() must be called
// after any weight change before the lifted coordinates are used.
struct SiteSet {
    int dim = 0;
    std::vector<Vec> points;       // in R^d
    std::vector<double> weights;   // one per point
    std::vector<Vec> lifted;       // in R^(d+1), last coord sqrt(max w - w_i)

    int size() const { return static_cast<int>(points.size()); }
    void lift();
};

// Uniform double in [0,1) from the top 53 bits; identical across platforms
// for a given seed, unlike uniform_real_distribution.
inline double canonical53(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SiteSet white_noise_sites(int d, int N, std::uint64_t seed);

// Dart-throwing Poisson disk in the unit cube. radius <= 0 picks
// 0.7 * N^(-1/d); gives up after 100*N failed darts in a row budget-wise
// (total attempt cap), possibly returning fewer than N points.
SiteSet blue_noise_sites(int d, int N, std::uint64_t seed, double radius = 0.0,
                         double* used_radius = nullptr);

}  // namespace powerd
