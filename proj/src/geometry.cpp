#include "powerd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace powerd {

HalfSpace make_halfspace(const Vec& point, Vec normal, int32_t label) {
    double len = norm(normal);
    if (len > 0) normal *= 1.0 / len;
    return HalfSpace{point, normal, label};
}

HalfSpace bisector(const Vec& zi, const Vec& zj, int32_t j) {
    Vec mid = zi + zj;
    mid *= 0.5;
    return make_halfspace(mid, zi - zj, j);
}

Side side(const Vec& x, const HalfSpace& h, double eps) {
    double s = dot(x - h.point, h.normal);
    if (s > eps) return Side::Inside;
    if (s < -eps) return Side::Outside;
    return Side::OnBoundary;
}

ConvexPolytope unit_cube(int d, int ambient) {
    ConvexPolytope P;
    P.dim = d;
    P.ambient = ambient;
    int n = 1 << d;
    P.verts.reserve(n);
    for (int mask = 0; mask < n; ++mask) {
        Vertex v;
        v.x = Vec(ambient);
        for (int k = 0; k < d; ++k) {
            int bit = (mask >> k) & 1;
            v.x[k] = bit;
            v.facets.insert(bit == 0 ? -(2 * k + 1) : -(2 * k + 2));
        }
        P.verts.push_back(v);
    }
    P.edges = extract_edges(P.verts, d);
    for (int k = 0; k < d; ++k) {
        Vec lo(ambient), hi(ambient), nlo(ambient), nhi(ambient);
        hi[k] = 1.0;
        nlo[k] = 1.0;   // inside of the low facet points up the axis
        nhi[k] = -1.0;  // inside of the high facet points down the axis
        P.planes.push_back(HalfSpace{lo, nlo, -(2 * k + 1)});
        P.planes.push_back(HalfSpace{hi, nhi, -(2 * k + 2)});
    }
    return P;
}

std::vector<std::pair<int32_t, int32_t>> extract_edges(const std::vector<Vertex>& verts, int dim) {
    std::vector<std::pair<int32_t, int32_t>> edges;
    int n = static_cast<int>(verts.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (shared_count(verts[a].facets, verts[b].facets) == dim - 1)
                edges.emplace_back(a, b);
    return edges;
}

double security_radius(const Vec& z, const ConvexPolytope& P) {
    double worst = 0;
    for (const auto& v : P.verts) worst = std::max(worst, dist2(v.x, z));
    return 2.0 * std::sqrt(worst);
}

namespace {

// Resolves vertices that accumulated more than dim labels after a clip that
// passed exactly through them. The surviving labels are those whose facets
// are actually realized by the polytope: labels carried by more vertices
// win; ties keep the earlier-applied plane. (All candidate planes pass
// through the vertex itself, so plane distance cannot discriminate.)
void cap_labels(ConvexPolytope& P) {
    bool oversized = false;
    for (const auto& v : P.verts)
        if (v.facets.cnt > P.dim) {
            oversized = true;
            break;
        }
    if (!oversized) return;

    std::unordered_map<int32_t, int> support;
    for (const auto& v : P.verts)
        for (int i = 0; i < v.facets.cnt; ++i) ++support[v.facets.lab[i]];

    auto plane_order = [&](int32_t lab) {
        for (size_t i = 0; i < P.planes.size(); ++i)
            if (P.planes[i].label == lab) return i;
        return P.planes.size();
    };

    for (auto& v : P.verts) {
        while (v.facets.cnt > P.dim) {
            int32_t drop = v.facets.lab[0];
            int drop_sup = support[drop];
            size_t drop_ord = plane_order(drop);
            for (int i = 1; i < v.facets.cnt; ++i) {
                int32_t l = v.facets.lab[i];
                int sup = support[l];
                size_t ord = plane_order(l);
                if (sup < drop_sup || (sup == drop_sup && ord > drop_ord)) {
                    drop = l;
                    drop_sup = sup;
                    drop_ord = ord;
                }
            }
            v.facets.erase(drop);
            --support[drop];
        }
    }
}

struct PairHash {
    size_t operator()(const std::pair<int32_t, int32_t>& p) const {
        return std::hash<int64_t>()((static_cast<int64_t>(p.first) << 32) ^ static_cast<uint32_t>(p.second));
    }
};

// A vertex on the new plane gains its label unless the plane coincides with
// one of the vertex's incident facet planes (both pass through the vertex,
// so parallel means identical); the duplicate label would later evict a
// genuine facet.
bool gains_label(const ConvexPolytope& P, const Vertex& v, const HalfSpace& h) {
    if (v.facets.contains(h.label)) return false;
    for (int i = 0; i < v.facets.cnt; ++i) {
        const HalfSpace* pl = P.find_plane(v.facets.lab[i]);
        if (pl && std::abs(dot(pl->normal, h.normal)) > 1.0 - 1e-9) return false;
    }
    return true;
}

}  // namespace

bool clip(ConvexPolytope& P, const HalfSpace& h) {
    const double eps = 1e-12;
    const double snap = 1e-12;
    int n = static_cast<int>(P.verts.size());

    std::vector<double> d(n);
    std::vector<Side> cls(n);
    for (int i = 0; i < n; ++i) {
        d[i] = dot(P.verts[i].x - h.point, h.normal);
        cls[i] = d[i] > eps ? Side::Inside : (d[i] < -eps ? Side::Outside : Side::OnBoundary);
    }

    // Near-endpoint crossings collapse onto the existing vertex instead of
    // spawning a duplicate.
    for (const auto& [a, b] : P.edges) {
        if ((cls[a] == Side::Inside && cls[b] == Side::Outside) ||
            (cls[a] == Side::Outside && cls[b] == Side::Inside)) {
            double t = d[a] / (d[a] - d[b]);
            if (t <= snap) cls[a] = Side::OnBoundary;
            if (t >= 1.0 - snap) cls[b] = Side::OnBoundary;
        }
    }

    bool any_kept = false;
    bool any_out = false;
    for (int i = 0; i < n; ++i) {
        if (cls[i] != Side::Outside) any_kept = true;
        else any_out = true;
    }
    P.planes.push_back(h);
    if (!any_kept) {
        P.verts.clear();
        P.edges.clear();
        return false;
    }
    if (!any_out) {
        // Entirely inside; the plane supports no new facet but OnBoundary
        // vertices still record the contact (capped below).
        bool touched = false;
        for (int i = 0; i < n; ++i) {
            if (cls[i] == Side::OnBoundary && gains_label(P, P.verts[i], h)) {
                P.verts[i].facets.insert(h.label);
                touched = true;
            }
        }
        if (touched) cap_labels(P);
        return true;
    }

    std::vector<Vertex> nv;
    nv.reserve(P.verts.size());
    std::vector<int32_t> remap(n, -1);
    std::vector<char> on_plane;  // parallels nv
    for (int i = 0; i < n; ++i) {
        if (cls[i] == Side::Outside) continue;
        remap[i] = static_cast<int32_t>(nv.size());
        Vertex v = P.verts[i];
        bool on = cls[i] == Side::OnBoundary;
        if (on && gains_label(P, v, h)) v.facets.insert(h.label);
        nv.push_back(std::move(v));
        on_plane.push_back(on ? 1 : 0);
    }

    // Edge update step 1+2: keep interior edges, reattach crossed edges to
    // their intersection vertices.
    std::vector<std::pair<int32_t, int32_t>> ne;
    ne.reserve(P.edges.size());
    for (const auto& [a, b] : P.edges) {
        Side ca = cls[a], cb = cls[b];
        if (ca != Side::Outside && cb != Side::Outside) {
            ne.emplace_back(remap[a], remap[b]);
            continue;
        }
        int in = -1, out = -1;
        if (ca == Side::Inside && cb == Side::Outside) in = a, out = b;
        else if (cb == Side::Inside && ca == Side::Outside) in = b, out = a;
        else continue;  // OnBoundary-Outside or Outside-Outside: absorbed
        double t = d[in] / (d[in] - d[out]);
        Vertex q;
        q.x = P.verts[in].x + t * (P.verts[out].x - P.verts[in].x);
        q.facets = intersect(P.verts[in].facets, P.verts[out].facets);
        q.facets.insert(h.label);
        int32_t qi = static_cast<int32_t>(nv.size());
        nv.push_back(std::move(q));
        on_plane.push_back(1);
        ne.emplace_back(remap[in], qi);
    }

    P.verts = std::move(nv);
    P.edges = std::move(ne);
    cap_labels(P);

    // Coincident intersection vertices (same surviving facet set) merge.
    {
        std::vector<int32_t> merged(P.verts.size());
        std::vector<Vertex> uniq;
        bool any_dup = false;
        for (size_t i = 0; i < P.verts.size(); ++i) {
            int32_t hit = -1;
            for (size_t j = 0; j < uniq.size(); ++j) {
                if (uniq[j].facets == P.verts[i].facets) {
                    hit = static_cast<int32_t>(j);
                    break;
                }
            }
            if (hit < 0) {
                merged[i] = static_cast<int32_t>(uniq.size());
                uniq.push_back(P.verts[i]);
            } else {
                merged[i] = hit;
                any_dup = true;
            }
        }
        if (any_dup) {
            // on_plane must follow the merge
            std::vector<char> op(uniq.size(), 0);
            for (size_t i = 0; i < merged.size(); ++i)
                if (on_plane[i]) op[merged[i]] = 1;
            on_plane = std::move(op);
            P.verts = std::move(uniq);
            std::unordered_set<std::pair<int32_t, int32_t>, PairHash> seen;
            std::vector<std::pair<int32_t, int32_t>> e2;
            for (auto [a, b] : P.edges) {
                a = merged[a];
                b = merged[b];
                if (a == b) continue;
                auto key = std::minmax(a, b);
                if (seen.insert({key.first, key.second}).second) e2.emplace_back(key.first, key.second);
            }
            P.edges = std::move(e2);
        }
    }

    // Edge update step 3: the adjacency rule applied only among vertices
    // lying on the new plane.
    std::unordered_set<std::pair<int32_t, int32_t>, PairHash> existing;
    for (const auto& [a, b] : P.edges) {
        auto key = std::minmax(a, b);
        existing.insert({key.first, key.second});
    }
    std::vector<int32_t> onv;
    for (size_t i = 0; i < P.verts.size(); ++i)
        if (on_plane[i]) onv.push_back(static_cast<int32_t>(i));
    for (size_t i = 0; i < onv.size(); ++i) {
        for (size_t j = i + 1; j < onv.size(); ++j) {
            int32_t a = onv[i], b = onv[j];
            if (existing.count({a, b})) continue;
            if (shared_count(P.verts[a].facets, P.verts[b].facets) == P.dim - 1) {
                existing.insert({a, b});
                P.edges.emplace_back(a, b);
            }
        }
    }
    return !P.verts.empty();
}

}  // namespace powerd
