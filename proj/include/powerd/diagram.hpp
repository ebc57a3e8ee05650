#pragma once

#include <vector>

#include "powerd/density.hpp"
#include "powerd/geometry.hpp"
#include "powerd/neighbors.hpp"
#include "powerd/quadrature.hpp"
#include "powerd/sites.hpp"

namespace powerd {

// Domain to restrict the diagram to: a list of convex d-elements whose
// vertices live in R^(d+1) with lifted coordinate 0.
struct DomainMesh {
    int dim = 0;
    std::vector<ConvexPolytope> elements;

    static DomainMesh cube(int d) {
        DomainMesh m;
        m.dim = d;
        m.elements.push_back(unit_cube(d, d + 1));
        return m;
    }
};

// Wall-clock seconds per pipeline phase, accumulated across workers.
struct PhaseTimers {
    double t_knn = 0;  // neighbor queries
    double t_vor = 0;  // bisector clipping
    double t_tri = 0;  // simplex decomposition
    double t_q = 0;    // quadrature

    double total() const { return t_knn + t_vor + t_tri + t_q; }
    PhaseTimers& operator+=(const PhaseTimers& o) {
        t_knn += o.t_knn;
        t_vor += o.t_vor;
        t_tri += o.t_tri;
        t_q += o.t_q;
        return *this;
    }
};

struct PowerCell {
    std::vector<ConvexPolytope> fragments;  // one per intersected mesh element
    double mass = 0;
    Vec first_moment;          // integral of rho * x
    double second_moment = 0;  // integral of rho * |x|^2
    Vec centroid;              // valid only when has_centroid
    bool has_centroid = false;
    int vertex_count = 0;
    int facet_count = 0;

    bool empty() const { return !has_centroid; }
};

struct PowerDiagram {
    int dim = 0;
    std::vector<PowerCell> cells;
    PhaseTimers timers;

    double total_mass() const {
        double m = 0;
        for (const auto& c : cells) m += c.mass;
        return m;
    }
    long long total_vertices() const {
        long long v = 0;
        for (const auto& c : cells) v += c.vertex_count;
        return v;
    }
    long long total_facets() const {
        long long f = 0;
        for (const auto& c : cells) f += c.facet_count;
        return f;
    }
};

// One restricted cell: clips `element` against ranked bisectors of site i
// until the security radius certifies no further neighbor can cut it.
ConvexPolytope compute_cell(int i, const ConvexPolytope& element, const SiteSet& sites,
                            NeighborCache& cache, PhaseTimers* timers = nullptr);

// Full diagram, site-parallel, with masses/centroids integrated at order q.
// Cell results and timer sums are reduced in fixed order, so the numbers are
// identical for any worker count.
PowerDiagram compute_diagram(const SiteSet& sites, const DomainMesh& mesh, NeighborCache& cache,
                             const DensityField& density, int q, int workers = 1);

// Convenience: builds the neighbor cache internally.
PowerDiagram compute_diagram(const SiteSet& sites, const DomainMesh& mesh,
                             const DensityField& density, int q, int workers = 1);

}  // namespace powerd
