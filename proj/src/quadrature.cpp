#include "powerd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace powerd {

namespace {

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int first = 0; first <= total; ++first) {
        cur.push_back(first);
        compositions(total - first, parts - 1, cur, out);
        cur.pop_back();
    }
}

QuadratureRule centroid_rule(int d) {
    QuadratureRule r{d, 1, 1, {}, {1.0}};
    r.nodes.assign(d + 1, 1.0 / (d + 1));
    return r;
}

QuadratureRule degree2_rule(int d) {
    QuadratureRule r{d, 2, d + 1, {}, {}};
    double b = (1.0 - 1.0 / std::sqrt(d + 2.0)) / (d + 1.0);
    double a = 1.0 - d * b;
    for (int k = 0; k <= d; ++k) {
        for (int j = 0; j <= d; ++j) r.nodes.push_back(j == k ? a : b);
        r.weights.push_back(1.0 / (d + 1));
    }
    return r;
}

QuadratureRule degree3_rule(int d) {
    QuadratureRule r{d, 3, d + 2, {}, {}};
    r.nodes.assign(d + 1, 1.0 / (d + 1));
    r.weights.push_back(-(d + 1.0) * (d + 1.0) / (4.0 * (d + 2)));
    double w1 = (d + 3.0) * (d + 3.0) / (4.0 * (d + 1) * (d + 2));
    for (int k = 0; k <= d; ++k) {
        for (int j = 0; j <= d; ++j) r.nodes.push_back(j == k ? 3.0 / (d + 3) : 1.0 / (d + 3));
        r.weights.push_back(w1);
    }
    return r;
}

// Degree-5 combinatorial rule; weights renormalized to reference-volume
// fractions.
QuadratureRule degree5_rule(int d) {
    const int s = 2;
    QuadratureRule r{d, 4, 0, {}, {}};
    for (int i = 0; i <= s; ++i) {
        int m = d + 2 * s + 1 - 2 * i;
        double w = std::pow(-1.0, i) * std::pow(2.0, -2 * s) * std::pow(double(m), 2 * s + 1) /
                   (factorial(i) * factorial(d + 2 * s + 1 - i));
        w *= factorial(d);
        std::vector<std::vector<int>> betas;
        std::vector<int> cur;
        compositions(s - i, d + 1, cur, betas);
        for (const auto& beta : betas) {
            for (int b : beta) r.nodes.push_back((2.0 * b + 1.0) / m);
            r.weights.push_back(w);
        }
    }
    r.npts = static_cast<int>(r.weights.size());
    return r;
}

struct RuleTable {
    QuadratureRule rules[6][4];
    RuleTable() {
        for (int d = 1; d <= 6; ++d) {
            rules[d - 1][0] = centroid_rule(d);
            rules[d - 1][1] = degree2_rule(d);
            rules[d - 1][2] = degree3_rule(d);
            rules[d - 1][3] = degree5_rule(d);
        }
    }
};

// All vertices of a face carrying one shared label form the (k-1)-subface.
struct FaceVert {
    Vec x;
    FacetSet labs;
};

void fan(const std::vector<FaceVert>& face, int k, std::array<Vec, kMaxAmbient>& chain, int depth,
         SimplexBatch& out, int strip) {
    if (k == 1) {
        if (face.size() != 2) return;
        Simplex s;
        s.np = depth + 2;
        for (int i = 0; i < depth; ++i) s.v[i] = chain[i];
        s.v[depth] = face[0].x;
        s.v[depth + 1] = face[1].x;
        if (strip > 0)
            for (int i = 0; i < s.np; ++i) s.v[i].n = strip;
        out.simplices.push_back(s);
        return;
    }
    Vec c(face[0].x.n);
    for (const auto& v : face) c += v.x;
    c *= 1.0 / static_cast<double>(face.size());

    std::vector<int32_t> labels;
    for (const auto& v : face)
        for (int i = 0; i < v.labs.cnt; ++i) labels.push_back(v.labs.lab[i]);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    chain[depth] = c;
    for (int32_t L : labels) {
        std::vector<FaceVert> sub;
        for (const auto& v : face) {
            if (v.labs.contains(L)) {
                FaceVert f = v;
                f.labs.erase(L);
                sub.push_back(std::move(f));
            }
        }
        if (static_cast<int>(sub.size()) >= k) fan(sub, k - 1, chain, depth + 1, out, strip);
    }
}

int affine_rank(const std::vector<Vertex>& verts, int ambient, double tol = 1e-12) {
    if (verts.size() < 2) return 0;
    std::vector<Vec> basis;
    for (size_t i = 1; i < verts.size(); ++i) {
        Vec v = verts[i].x - verts[0].x;
        for (const auto& b : basis) v -= dot(v, b) * b;
        double len = norm(v);
        if (len > tol) {
            v *= 1.0 / len;
            basis.push_back(v);
            if (static_cast<int>(basis.size()) == ambient) break;
        }
    }
    return static_cast<int>(basis.size());
}

double det_abs(double m[kMaxAmbient][kMaxAmbient], int k) {
    double det = 1.0;
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < k; ++c) std::swap(m[piv][c], m[col][c]);
        }
        det *= m[col][col];
        for (int r = col + 1; r < k; ++r) {
            double f = m[r][col] / m[col][col];
            for (int c = col; c < k; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return std::abs(det);
}

}  // namespace

const QuadratureRule& quadrature_rule(int d, int q) {
    static const RuleTable table;
    if (d < 1 || d > 6 || q < 1 || q > 4) throw std::invalid_argument("unsupported quadrature (d,q)");
    return table.rules[d - 1][q - 1];
}

SimplexBatch decompose(const ConvexPolytope& P, bool* degenerate) {
    SimplexBatch out;
    out.dim = P.dim;
    bool strip_lift = (P.ambient == P.dim + 1);
    out.spatial = strip_lift ? P.dim : P.ambient;
    if (degenerate) *degenerate = false;
    if (P.verts.empty()) return out;

    if (affine_rank(P.verts, P.ambient) < P.dim) {
        if (degenerate) *degenerate = true;
        return out;
    }

    std::vector<FaceVert> face;
    face.reserve(P.verts.size());
    for (const auto& v : P.verts) face.push_back({v.x, v.facets});
    std::array<Vec, kMaxAmbient> chain;
    fan(face, P.dim, chain, 0, out, strip_lift ? P.dim : 0);

    // zero-volume slivers contribute nothing
    auto& s = out.simplices;
    s.erase(std::remove_if(s.begin(), s.end(), [](const Simplex& t) { return simplex_volume(t) <= 0.0; }),
            s.end());
    return out;
}

double simplex_volume(const Simplex& s) {
    int k = s.np - 1;
    if (k <= 0) return 0.0;
    int amb = s.v[0].n;
    double m[kMaxAmbient][kMaxAmbient];
    if (k == amb) {
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) m[r][c] = s.v[r + 1][c] - s.v[0][c];
        return det_abs(m, k) / factorial(k);
    }
    // lower-dimensional simplex in a higher ambient space
    double g[kMaxAmbient][kMaxAmbient];
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            double acc = 0;
            for (int a = 0; a < amb; ++a)
                acc += (s.v[r + 1][a] - s.v[0][a]) * (s.v[c + 1][a] - s.v[0][a]);
            g[r][c] = acc;
        }
    double det = 1.0;
    // Cholesky-free symmetric elimination; Gram determinant is nonnegative
    for (int col = 0; col < k; ++col) {
        if (g[col][col] <= 0.0) return 0.0;
        det *= g[col][col];
        for (int r = col + 1; r < k; ++r) {
            double f = g[r][col] / g[col][col];
            for (int c = col; c < k; ++c) g[r][c] -= f * g[col][c];
        }
    }
    return std::sqrt(det) / factorial(k);
}

double batch_volume(const SimplexBatch& b) {
    double v = 0;
    for (const auto& s : b.simplices) v += simplex_volume(s);
    return v;
}

Moments integrate_moments(const SimplexBatch& b, const DensityField& rho, int q) {
    Moments m;
    m.m1 = Vec(b.spatial);
    if (b.simplices.empty()) return m;
    const QuadratureRule& rule = quadrature_rule(b.dim, q);
    Vec x(b.spatial);
    for (const auto& s : b.simplices) {
        double vol = simplex_volume(s);
        if (vol <= 0) continue;
        for (int p = 0; p < rule.npts; ++p) {
            const double* lam = &rule.nodes[static_cast<size_t>(p) * (b.dim + 1)];
            for (int c = 0; c < b.spatial; ++c) {
                double acc = 0;
                for (int i = 0; i < s.np; ++i) acc += lam[i] * s.v[i][c];
                x[c] = acc;
            }
            double f = rho.eval(x) * rule.weights[p] * vol;
            m.mass += f;
            for (int c = 0; c < b.spatial; ++c) m.m1[c] += f * x[c];
            m.s2 += f * norm2(x);
        }
    }
    return m;
}

double integrate_energy_term(const SimplexBatch& b, const DensityField& rho, const Vec& y, double w, int q) {
    if (b.simplices.empty()) return 0.0;
    const QuadratureRule& rule = quadrature_rule(b.dim, q);
    double total = 0;
    Vec x(b.spatial);
    for (const auto& s : b.simplices) {
        double vol = simplex_volume(s);
        if (vol <= 0) continue;
        for (int p = 0; p < rule.npts; ++p) {
            const double* lam = &rule.nodes[static_cast<size_t>(p) * (b.dim + 1)];
            for (int c = 0; c < b.spatial; ++c) {
                double acc = 0;
                for (int i = 0; i < s.np; ++i) acc += lam[i] * s.v[i][c];
                x[c] = acc;
            }
            double d2 = 0;
            for (int c = 0; c < b.spatial; ++c) {
                double d = x[c] - y[c];
                d2 += d * d;
            }
            total += rho.eval(x) * (d2 - w) * rule.weights[p] * vol;
        }
    }
    return total;
}

}  // namespace powerd
