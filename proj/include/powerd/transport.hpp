#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "powerd/diagram.hpp"

namespace powerd {

// Semi-discrete problem instance: sites vs. a density on the mesh domain.
// `targets` is the prescribed per-cell mass (ignored by quantization).
struct TransportProblem {
    SiteSet sites;
    DomainMesh mesh;
    const DensityField* density = nullptr;
    std::vector<double> targets;
    int order = 2;
    int workers = 1;

    PowerDiagram evaluate(NeighborCache* cache = nullptr) const;
};

// E = sum_i int_{cell i} rho(x) (|x - y_i|^2 - w_i) dx + sum_i nu_i w_i,
// assembled from cached per-cell moments.
double energy(const TransportProblem& p, const PowerDiagram& dia);

// dE/dy_i = 2 m_i (y_i - c_i); zero rows for empty cells.
std::vector<Vec> grad_sites(const TransportProblem& p, const PowerDiagram& dia);

// dE/dw_i = nu_i - m_i.
std::vector<double> grad_weights(const TransportProblem& p, const PowerDiagram& dia);

// One Lloyd relaxation: site moves to its cell centroid (empty cells stay).
std::vector<Vec> lloyd_step(const TransportProblem& p, const PowerDiagram& dia);

double domain_total_mass(const DomainMesh& mesh, const DensityField& rho, int q);

// ---- L-BFGS ----------------------------------------------------------

struct LbfgsParams {
    int memory = 7;
    int max_calls = 100;     // every evaluator invocation counts, probes included
    double grad_tol = 1e-10;
    double c1 = 1e-4;        // sufficient-decrease constant
};

struct LbfgsIterate {
    int iter = 0;
    int calls = 0;
    double f = 0;
    double grad_norm = 0;
};

struct LbfgsResult {
    std::vector<double> x;  // best iterate seen
    double f = 0;
    double grad_norm = 0;
    int calls = 0;
    bool line_search_failed = false;
    std::vector<LbfgsIterate> log;
};

using Evaluator = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;
using IterObserver = std::function<void(const LbfgsIterate&, const std::vector<double>& x)>;

// Two-loop-recursion L-BFGS with backtracking (quadratic-interpolation)
// line search. Returns the best iterate; a collapsed line search sets the
// failure flag instead of throwing.
LbfgsResult lbfgs_minimize(const Evaluator& f_and_grad, std::vector<double> x0,
                           const LbfgsParams& params = {}, const IterObserver& observer = nullptr);

// ---- end-to-end solvers ----------------------------------------------

enum class OptimizeMode { Lloyd, LBFGS };

struct IterRecord {
    int iter = 0;
    int calls = 0;       // cumulative diagram evaluations
    double energy = 0;
    double grad_norm = 0;
    double min_mass = 0;
    double median_mass = 0;
    double max_mass = 0;
};

struct QuantizeResult {
    SiteSet sites;
    std::vector<IterRecord> log;
    int calls = 0;
};

struct SdotResult {
    SiteSet sites;
    std::vector<IterRecord> log;
    int calls = 0;
    double target_mass = 0;  // per-site target actually used
    bool line_search_failed = false;
};

// Site-position optimization from a seeded random start (Lloyd or L-BFGS on
// the centroid gradient), nb_iter diagram evaluations total.
QuantizeResult optimize_points(int N, const DensityField& rho, OptimizeMode mode, int nb_iter,
                               std::uint64_t seed, int q, int workers);
QuantizeResult optimize_points_from(SiteSet init, const DensityField& rho, OptimizeMode mode,
                                    int nb_iter, int q, int workers);

// Weight optimization toward equal target masses: optional point
// pre-optimization, then concave-energy ascent via L-BFGS on -E.
SdotResult optimize_weights(int N, const DensityField& rho, int nb_iter, std::uint64_t seed, int q,
                            int workers, int point_iters = 100);
SdotResult optimize_weights_for_sites(SiteSet sites, const DensityField& rho, int nb_iter, int q,
                                      int workers, const std::vector<double>* targets = nullptr);

}  // namespace powerd
