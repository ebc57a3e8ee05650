#include "powerd/diagram.hpp"

#include <chrono>
#include <set>

#include "powerd/parallel.hpp"

namespace powerd {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

ConvexPolytope compute_cell(int i, const ConvexPolytope& element, const SiteSet& sites,
                            NeighborCache& cache, PhaseTimers* timers) {
    ConvexPolytope P = element;
    const Vec& zi = sites.lifted[i];
    int n = sites.size();
    for (int rank = 1; rank <= n - 1; ++rank) {
        auto t0 = Clock::now();
        int j = cache.next_neighbor(i, rank);
        if (timers) timers->t_knn += seconds_since(t0);

        t0 = Clock::now();
        double dist_ij = dist(zi, sites.lifted[j]);
        if (dist_ij >= security_radius(zi, P)) {
            if (timers) timers->t_vor += seconds_since(t0);
            break;
        }
        bool alive = clip(P, bisector(zi, sites.lifted[j], j));
        if (timers) timers->t_vor += seconds_since(t0);
        if (!alive) break;
    }
    return P;
}

PowerDiagram compute_diagram(const SiteSet& sites, const DomainMesh& mesh, NeighborCache& cache,
                             const DensityField& density, int q, int workers) {
    PowerDiagram dia;
    dia.dim = mesh.dim;
    int n = sites.size();
    dia.cells.assign(n, PowerCell{});
    std::vector<PhaseTimers> worker_timers(std::max(1, workers));

    parallel_for(n, workers, [&](int w, int begin, int end) {
        PhaseTimers& t = worker_timers[w];
        for (int i = begin; i < end; ++i) {
            PowerCell& cell = dia.cells[i];
            cell.first_moment = Vec(mesh.dim);
            std::set<int32_t> labels;
            for (const auto& element : mesh.elements) {
                ConvexPolytope frag = compute_cell(i, element, sites, cache, &t);
                if (frag.empty()) continue;

                auto t0 = Clock::now();
                SimplexBatch batch = decompose(frag);
                t.t_tri += seconds_since(t0);

                t0 = Clock::now();
                Moments m = integrate_moments(batch, density, q);
                t.t_q += seconds_since(t0);

                cell.mass += m.mass;
                cell.first_moment += m.m1;
                cell.second_moment += m.s2;
                cell.vertex_count += static_cast<int>(frag.verts.size());
                for (const auto& v : frag.verts)
                    for (int k = 0; k < v.facets.cnt; ++k) labels.insert(v.facets.lab[k]);
                cell.fragments.push_back(std::move(frag));
            }
            cell.facet_count = static_cast<int>(labels.size());
            if (cell.mass > 0) {
                cell.centroid = (1.0 / cell.mass) * cell.first_moment;
                cell.has_centroid = true;
            }
        }
    });

    for (const auto& t : worker_timers) dia.timers += t;
    return dia;
}

PowerDiagram compute_diagram(const SiteSet& sites, const DomainMesh& mesh,
                             const DensityField& density, int q, int workers) {
    NeighborCache cache(sites.lifted);
    return compute_diagram(sites, mesh, cache, density, q, workers);
}

}  // namespace powerd
