#pragma once

#include <vector>

#include "powerd/density.hpp"
#include "powerd/geometry.hpp"
#include "powerd/vec.hpp"

namespace powerd {

// Fixed rule on the reference d-simplex: barycentric nodes, weights summing
// to 1 (fractions of the reference volume), exact for all monomials of
// total degree <= order.
struct QuadratureRule {
    int dim = 0;
    int order = 0;
    int npts = 0;
    std::vector<double> nodes;    // npts x (dim+1), barycentric
    std::vector<double> weights;  // npts
};

// Supported: d in [1,6], q in {1,2,3,4}. Throws std::invalid_argument
// otherwise. Returned reference is to a lazily built process-wide table.
const QuadratureRule& quadrature_rule(int d, int q);

struct Simplex {
    std::array<Vec, kMaxAmbient> v;
    int np = 0;  // dim+1 points
};

struct SimplexBatch {
    int dim = 0;      // simplex dimension
    int spatial = 0;  // coordinate count the density sees
    std::vector<Simplex> simplices;
};

// Centroid-fan decomposition: the polytope's vertex-average centroid is
// fanned through its (d-1)-faces (vertices grouped by shared facet label),
// recursing with face centroids until edges. Lifted polytopes (ambient ==
// dim+1, trailing coordinate constant) are emitted with the trailing
// coordinate stripped. A polytope whose vertices are affinely dependent
// yields an empty batch with `degenerate` set.
SimplexBatch decompose(const ConvexPolytope& P, bool* degenerate = nullptr);

double simplex_volume(const Simplex& s);
double batch_volume(const SimplexBatch& b);

struct Moments {
    double mass = 0;
    Vec m1;           // integral of rho(x) x
    double s2 = 0;    // integral of rho(x) ||x||^2
};

Moments integrate_moments(const SimplexBatch& b, const DensityField& rho, int q);

// Integral of rho(x) (||x - y||^2 - w) over the batch.
double integrate_energy_term(const SimplexBatch& b, const DensityField& rho, const Vec& y, double w, int q);

}  // namespace powerd
