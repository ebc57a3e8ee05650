#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "powerd/diagram.hpp"

namespace powerd {

// Hyperplane (anchor, normal) in R^d, optionally followed by another slice
// of the resulting (d-1)-dimensional mesh. Nesting depth is limited to d-2
// so slice cells keep at least dimension 1.
struct SliceSpec {
    Vec anchor;
    Vec normal;
    std::vector<SliceSpec> nested;  // zero or one entry

    int depth() const { return nested.empty() ? 1 : 1 + nested[0].depth(); }
};

struct SliceMesh {
    int dim = 0;      // geometric dimension of the slice cells
    int ambient = 0;  // coordinates still carry the lifted component
    std::vector<int> source;  // generating diagram cell per polytope
    std::vector<ConvexPolytope> polys;
    SimplexBatch render;  // centroid-fan decomposition of every polytope

    double total_volume() const { return batch_volume(render); }
};

// Cross-section of one polytope. anchor/normal live in the spatial
// coordinates; they are zero-extended to the polytope's ambient space.
// Returns an empty polytope when the plane misses P.
ConvexPolytope slice_polytope(const ConvexPolytope& P, const Vec& anchor, const Vec& normal,
                              std::int32_t label);

SliceMesh slice_diagram(const PowerDiagram& dia, const SliceSpec& spec, int workers = 1);

// Plain-text exports. Coordinates are written with 17 significant digits so
// a parse of the file reproduces every double bit-exactly.
//   edge-list:     comment lines, "nv ne", nv vertex rows, ne index pairs
//   polygon-soup:  comment lines, "nt", nt triangle rows (3 vertex records each)
void export_edge_list(const SliceMesh& mesh, const std::string& path,
                      const std::vector<std::string>& comments = {});
void export_polygon_soup(const SliceMesh& mesh, const std::string& path,
                         const std::vector<std::string>& comments = {});

// parsers for the two formats (round-trip checks and downstream tooling)
struct EdgeListData {
    int spatial = 0;
    std::vector<std::vector<double>> vertices;
    std::vector<std::pair<int, int>> edges;
};
EdgeListData read_edge_list(const std::string& path);

struct PolygonSoupData {
    int spatial = 0;
    std::vector<std::array<std::vector<double>, 3>> triangles;
};
PolygonSoupData read_polygon_soup(const std::string& path);

}  // namespace powerd
