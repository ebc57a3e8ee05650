#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "powerd/vec.hpp"

namespace powerd {

// Sorted label set of the facets incident to a vertex. A simple d-polytope
// has exactly d labels per vertex; capacity 7 leaves room for the transient
// d+1 state while a degenerate (cospherical) clip is being resolved.
struct FacetSet {
    std::array<int32_t, 7> lab{};
    uint8_t cnt = 0;

    bool contains(int32_t l) const {
        for (int i = 0; i < cnt; ++i)
            if (lab[i] == l) return true;
        return false;
    }
    void insert(int32_t l) {
        int i = cnt;
        while (i > 0 && lab[i - 1] > l) {
            lab[i] = lab[i - 1];
            --i;
        }
        lab[i] = l;
        ++cnt;
    }
    void erase(int32_t l) {
        for (int i = 0; i < cnt; ++i) {
            if (lab[i] == l) {
                for (int j = i + 1; j < cnt; ++j) lab[j - 1] = lab[j];
                --cnt;
                return;
            }
        }
    }
    bool operator==(const FacetSet& o) const {
        if (cnt != o.cnt) return false;
        for (int i = 0; i < cnt; ++i)
            if (lab[i] != o.lab[i]) return false;
        return true;
    }
};

// Number of labels common to two sorted sets.
inline int shared_count(const FacetSet& a, const FacetSet& b) {
    int i = 0, j = 0, s = 0;
    while (i < a.cnt && j < b.cnt) {
        if (a.lab[i] == b.lab[j]) {
            ++s;
            ++i;
            ++j;
        } else if (a.lab[i] < b.lab[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return s;
}

inline FacetSet intersect(const FacetSet& a, const FacetSet& b) {
    FacetSet r;
    int i = 0, j = 0;
    while (i < a.cnt && j < b.cnt) {
        if (a.lab[i] == b.lab[j]) {
            r.lab[r.cnt++] = a.lab[i];
            ++i;
            ++j;
        } else if (a.lab[i] < b.lab[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return r;
}

// Oriented halfspace: boundary plane through `point` with unit `normal`;
// the kept (inside) side is (x - point) . normal > 0, which by construction
// of bisector normals is the side containing the cell's own site.
struct HalfSpace {
    Vec point;
    Vec normal;
    int32_t label = 0;
};

HalfSpace make_halfspace(const Vec& point, Vec normal, int32_t label);

// Bisector between lifted sites zi and zj, oriented so zi is inside.
// Labeled with the neighbor's site index.
HalfSpace bisector(const Vec& zi, const Vec& zj, int32_t j);

enum class Side { Inside, OnBoundary, Outside };

Side side(const Vec& x, const HalfSpace& h, double eps = 1e-12);

struct Vertex {
    Vec x;
    FacetSet facets;
};

// Convex polytope of topological dimension `dim` embedded in R^ambient,
// tracked as vertices + facet incidences + explicit edges. Facet labels:
// negative for domain-mesh facets, nonnegative for bisectors (neighbor site
// index), and large negative (<= kSliceLabelBase) for slicing planes.
// `planes` keeps every halfspace ever applied, for incidence-based
// tie-breaking and membership replay.
struct ConvexPolytope {
    int dim = 0;
    int ambient = 0;
    std::vector<Vertex> verts;
    std::vector<std::pair<int32_t, int32_t>> edges;
    std::vector<HalfSpace> planes;

    bool empty() const { return verts.empty(); }
    const HalfSpace* find_plane(int32_t label) const {
        for (const auto& h : planes)
            if (h.label == label) return &h;
        return nullptr;
    }
};

inline constexpr int32_t kSliceLabelBase = -1000;

// Unit cube [0,1]^d. With ambient == d+1 the cube is embedded in the
// lifted space with last coordinate 0. Facet labels: axis k low side
// -(2k+1), high side -(2k+2).
ConvexPolytope unit_cube(int d, int ambient);

// Full-pass edge extraction: vertices are adjacent iff their facet sets
// share exactly dim-1 labels.
std::vector<std::pair<int32_t, int32_t>> extract_edges(const std::vector<Vertex>& verts, int dim);

// Clips P in place against h, keeping the inside. Returns false (and leaves
// P empty) when no vertex survives. The applied plane is recorded in
// P.planes either way.
bool clip(ConvexPolytope& P, const HalfSpace& h);

// Twice the farthest vertex distance from z; neighbors at or beyond this
// distance cannot cut the cell.
double security_radius(const Vec& z, const ConvexPolytope& P);

}  // namespace powerd
