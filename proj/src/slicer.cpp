#include "powerd/slicer.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "powerd/parallel.hpp"

namespace powerd {

namespace {
constexpr double kOnPlaneTol = 1e-10;
}

ConvexPolytope slice_polytope(const ConvexPolytope& P, const Vec& anchor, const Vec& normal,
                              std::int32_t label) {
    ConvexPolytope Q;
    Q.dim = P.dim - 1;
    Q.ambient = P.ambient;
    if (P.verts.empty() || P.dim < 1) return Q;

    Vec x0(P.ambient), n(P.ambient);
    for (int c = 0; c < anchor.n; ++c) x0[c] = anchor[c];
    for (int c = 0; c < normal.n; ++c) n[c] = normal[c];
    double len = norm(n);
    if (len == 0) throw std::invalid_argument("slice normal must be nonzero");
    n *= 1.0 / len;

    size_t nv = P.verts.size();
    std::vector<double> s(nv);
    bool any_pos = false, any_neg = false, any_on = false;
    for (size_t v = 0; v < nv; ++v) {
        s[v] = dot(P.verts[v].x - x0, n);
        if (s[v] > kOnPlaneTol)
            any_pos = true;
        else if (s[v] < -kOnPlaneTol)
            any_neg = true;
        else
            any_on = true;
    }
    if (!any_on && !(any_pos && any_neg)) return Q;  // plane misses the polytope

    Q.planes = P.planes;
    Q.planes.push_back(HalfSpace{x0, n, label});

    // vertices already on the plane are kept; a facet plane coinciding with
    // the slice plane would double-count, so its label is dropped
    for (size_t v = 0; v < nv; ++v) {
        if (std::abs(s[v]) > kOnPlaneTol) continue;
        Vertex nw;
        nw.x = P.verts[v].x;
        nw.facets = P.verts[v].facets;
        for (int k = nw.facets.cnt - 1; k >= 0; --k) {
            const HalfSpace* hp = P.find_plane(nw.facets.lab[k]);
            if (!hp) continue;
            if (std::abs(dot(hp->normal, n)) > 1.0 - 1e-9 &&
                std::abs(dot(x0 - hp->point, hp->normal)) <= kOnPlaneTol)
                nw.facets.erase(nw.facets.lab[k]);
        }
        Q.verts.push_back(nw);
    }

    for (const auto& [a, b] : P.edges) {
        double sa = s[a], sb = s[b];
        bool a_pos = sa > kOnPlaneTol, a_neg = sa < -kOnPlaneTol;
        bool b_pos = sb > kOnPlaneTol, b_neg = sb < -kOnPlaneTol;
        if (!((a_pos && b_neg) || (a_neg && b_pos))) continue;
        double t = sa / (sa - sb);
        Vertex nw;
        nw.x = P.verts[a].x + t * (P.verts[b].x - P.verts[a].x);
        nw.facets = intersect(P.verts[a].facets, P.verts[b].facets);
        Q.verts.push_back(nw);
    }

    // duplicate facet sets appear when several collected vertices coincide
    for (size_t i = 0; i < Q.verts.size(); ++i)
        for (size_t j = Q.verts.size(); j-- > i + 1;)
            if (Q.verts[j].facets == Q.verts[i].facets)
                Q.verts.erase(Q.verts.begin() + static_cast<long>(j));

    if (Q.verts.empty()) return Q;
    Q.edges = extract_edges(Q.verts, Q.dim);
    return Q;
}

SliceMesh slice_diagram(const PowerDiagram& dia, const SliceSpec& spec, int workers) {
    SliceMesh mesh;
    mesh.dim = dia.dim - spec.depth();

    int n = static_cast<int>(dia.cells.size());
    std::vector<std::vector<ConvexPolytope>> per_cell(n);
    parallel_for(n, workers, [&](int, int begin, int end) {
        for (int i = begin; i < end; ++i) {
            for (const auto& frag : dia.cells[i].fragments) {
                ConvexPolytope cur = frag;
                const SliceSpec* sp = &spec;
                std::int32_t label = kSliceLabelBase;
                while (sp) {
                    cur = slice_polytope(cur, sp->anchor, sp->normal, label--);
                    if (cur.empty()) break;
                    sp = sp->nested.empty() ? nullptr : &sp->nested[0];
                }
                if (!cur.empty()) per_cell[i].push_back(std::move(cur));
            }
        }
    });

    for (int i = 0; i < n; ++i) {
        for (auto& poly : per_cell[i]) {
            mesh.ambient = poly.ambient;
            SimplexBatch b = decompose(poly);
            if (mesh.render.simplices.empty()) {
                mesh.render.dim = b.dim;
                mesh.render.spatial = b.spatial;
            }
            mesh.render.simplices.insert(mesh.render.simplices.end(), b.simplices.begin(),
                                         b.simplices.end());
            mesh.source.push_back(i);
            mesh.polys.push_back(std::move(poly));
        }
    }
    if (mesh.render.simplices.empty()) {
        mesh.render.dim = mesh.dim;
        mesh.render.spatial = mesh.ambient;
    }
    return mesh;
}

namespace {

// spatial coordinate count: drop the trailing lifted component
int spatial_of(const SliceMesh& mesh) { return mesh.ambient > 0 ? mesh.ambient - 1 : 0; }

void write_comments(std::ofstream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
}

}  // namespace

void export_edge_list(const SliceMesh& mesh, const std::string& path,
                      const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_comments(out, comments);
    int spatial = spatial_of(mesh);

    size_t nv = 0, ne = 0;
    for (const auto& p : mesh.polys) {
        nv += p.verts.size();
        ne += p.edges.size();
    }
    out << spatial << "\n" << nv << " " << ne << "\n";
    for (const auto& p : mesh.polys) {
        for (const auto& v : p.verts) {
            for (int c = 0; c < spatial; ++c) out << (c ? " " : "") << fmt17(v.x[c]);
            out << "\n";
        }
    }
    size_t base = 0;
    for (const auto& p : mesh.polys) {
        for (const auto& [a, b] : p.edges) out << base + a << " " << base + b << "\n";
        base += p.verts.size();
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void export_polygon_soup(const SliceMesh& mesh, const std::string& path,
                         const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_comments(out, comments);
    int spatial = spatial_of(mesh);

    // every 3-subset of a simplex's vertices is one triangle of the soup
    size_t count = 0;
    for (const auto& s : mesh.render.simplices) {
        int np = s.np;
        count += static_cast<size_t>(np * (np - 1) * (np - 2) / 6);
    }
    out << spatial << "\n" << count << "\n";
    for (const auto& s : mesh.render.simplices) {
        for (int a = 0; a < s.np; ++a)
            for (int b = a + 1; b < s.np; ++b)
                for (int c = b + 1; c < s.np; ++c) {
                    const Vec* vs[3] = {&s.v[a], &s.v[b], &s.v[c]};
                    for (const Vec* v : vs) {
                        for (int k = 0; k < spatial; ++k) out << (k ? " " : "") << fmt17((*v)[k]);
                        out << "\n";
                    }
                }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> data_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_row(const std::string& line, int expect) {
    std::istringstream ss(line);
    std::vector<double> row;
    double v;
    while (ss >> v) row.push_back(v);
    if (expect > 0 && static_cast<int>(row.size()) != expect)
        throw std::runtime_error("malformed row: " + line);
    return row;
}

}  // namespace

EdgeListData read_edge_list(const std::string& path) {
    auto lines = data_lines(path);
    if (lines.size() < 2) throw std::runtime_error("truncated edge-list file");
    EdgeListData d;
    d.spatial = std::stoi(lines[0]);
    std::istringstream hdr(lines[1]);
    size_t nv = 0, ne = 0;
    hdr >> nv >> ne;
    if (lines.size() != 2 + nv + ne) throw std::runtime_error("edge-list count mismatch");
    for (size_t i = 0; i < nv; ++i) d.vertices.push_back(parse_row(lines[2 + i], d.spatial));
    for (size_t i = 0; i < ne; ++i) {
        std::istringstream ss(lines[2 + nv + i]);
        int a, b;
        ss >> a >> b;
        d.edges.emplace_back(a, b);
    }
    return d;
}

PolygonSoupData read_polygon_soup(const std::string& path) {
    auto lines = data_lines(path);
    if (lines.size() < 2) throw std::runtime_error("truncated polygon-soup file");
    PolygonSoupData d;
    d.spatial = std::stoi(lines[0]);
    size_t nt = std::stoul(lines[1]);
    if (lines.size() != 2 + 3 * nt) throw std::runtime_error("polygon-soup count mismatch");
    for (size_t t = 0; t < nt; ++t) {
        std::array<std::vector<double>, 3> tri;
        for (int k = 0; k < 3; ++k) tri[k] = parse_row(lines[2 + 3 * t + k], d.spatial);
        d.triangles.push_back(std::move(tri));
    }
    return d;
}

}  // namespace powerd
