#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace powerd {

struct RunConfig {
    std::string command;
    int dim = 0;  // 0 defers to the site file's dimension, else 2
    int num_sites = 100;
    std::string density = "uniform";
    int order = 0;  // 0 picks the density's recommended order
    std::string mode;
    int iters = 100;
    std::uint64_t seed = 42;
    int workers = 0;  // 0 picks hardware parallelism
    std::string sites_file;
    std::string out = "out";
    std::vector<std::string> slices;  // "axis=value" entries
};

// Full command-line entry point. Exit codes: 0 success, 1 usage error,
// 2 runtime failure.
int run_cli(int argc, const char* const* argv);

}  // namespace powerd
