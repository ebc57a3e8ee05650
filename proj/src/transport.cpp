#include "powerd/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace powerd {

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

void mass_stats(const PowerDiagram& dia, IterRecord& rec) {
    std::vector<double> m;
    m.reserve(dia.cells.size());
    for (const auto& c : dia.cells) m.push_back(c.mass);
    std::sort(m.begin(), m.end());
    rec.min_mass = m.front();
    rec.max_mass = m.back();
    rec.median_mass = m[m.size() / 2];
}

}  // namespace

PowerDiagram TransportProblem::evaluate(NeighborCache* cache) const {
    if (cache) return compute_diagram(sites, mesh, *cache, *density, order, workers);
    return compute_diagram(sites, mesh, *density, order, workers);
}

double energy(const TransportProblem& p, const PowerDiagram& dia) {
    double e = 0;
    int n = p.sites.size();
    for (int i = 0; i < n; ++i) {
        const PowerCell& c = dia.cells[i];
        const Vec& y = p.sites.points[i];
        double w = p.sites.weights[i];
        // int rho (|x-y|^2 - w) = S2 - 2 y.M1 + (|y|^2 - w) m
        e += c.second_moment - 2.0 * dot(y, c.first_moment) + (norm2(y) - w) * c.mass;
        if (!p.targets.empty()) e += p.targets[i] * w;
    }
    return e;
}

std::vector<Vec> grad_sites(const TransportProblem& p, const PowerDiagram& dia) {
    int n = p.sites.size();
    std::vector<Vec> g(n, Vec(p.sites.dim));
    for (int i = 0; i < n; ++i) {
        const PowerCell& c = dia.cells[i];
        if (!c.has_centroid) continue;
        g[i] = (2.0 * c.mass) * (p.sites.points[i] - c.centroid);
    }
    return g;
}

std::vector<double> grad_weights(const TransportProblem& p, const PowerDiagram& dia) {
    int n = p.sites.size();
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = p.targets[i] - dia.cells[i].mass;
    return g;
}

std::vector<Vec> lloyd_step(const TransportProblem& p, const PowerDiagram& dia) {
    std::vector<Vec> y = p.sites.points;
    for (int i = 0; i < p.sites.size(); ++i)
        if (dia.cells[i].has_centroid) y[i] = dia.cells[i].centroid;
    return y;
}

double domain_total_mass(const DomainMesh& mesh, const DensityField& rho, int q) {
    double m = 0;
    for (const auto& e : mesh.elements) m += integrate_moments(decompose(e), rho, q).mass;
    return m;
}

LbfgsResult lbfgs_minimize(const Evaluator& f_and_grad, std::vector<double> x0,
                           const LbfgsParams& params, const IterObserver& observer) {
    LbfgsResult res;
    size_t n = x0.size();
    std::vector<double> x = std::move(x0), g(n), xn(n), gn(n), p(n);
    double f = f_and_grad(x, g);
    res.calls = 1;

    res.x = x;
    res.f = f;
    res.grad_norm = vnorm(g);
    res.log.push_back({0, res.calls, f, res.grad_norm});
    if (observer) observer(res.log.back(), x);

    std::deque<std::pair<std::vector<double>, std::vector<double>>> hist;  // (s, y)

    int iter = 0;
    while (res.calls < params.max_calls) {
        double gnorm = vnorm(g);
        if (gnorm <= params.grad_tol) break;

        // two-loop recursion for p = -H g
        p = g;
        std::vector<double> alpha(hist.size());
        for (int k = static_cast<int>(hist.size()) - 1; k >= 0; --k) {
            const auto& [s, yv] = hist[k];
            double rho_k = 1.0 / vdot(yv, s);
            alpha[k] = rho_k * vdot(s, p);
            for (size_t i = 0; i < n; ++i) p[i] -= alpha[k] * yv[i];
        }
        if (!hist.empty()) {
            const auto& [s, yv] = hist.back();
            double gamma = vdot(s, yv) / vdot(yv, yv);
            for (auto& v : p) v *= gamma;
        }
        for (size_t k = 0; k < hist.size(); ++k) {
            const auto& [s, yv] = hist[k];
            double rho_k = 1.0 / vdot(yv, s);
            double beta = rho_k * vdot(yv, p);
            for (size_t i = 0; i < n; ++i) p[i] += s[i] * (alpha[k] - beta);
        }
        for (auto& v : p) v = -v;

        double gp = vdot(g, p);
        if (gp >= 0) {  // not a descent direction; fall back to steepest descent
            for (size_t i = 0; i < n; ++i) p[i] = -g[i];
            gp = -gnorm * gnorm;
        }

        double step = (iter == 0) ? std::min(1.0, 1.0 / gnorm) : 1.0;
        bool accepted = false;
        double fn = f;
        while (res.calls < params.max_calls) {
            for (size_t i = 0; i < n; ++i) xn[i] = x[i] + step * p[i];
            fn = f_and_grad(xn, gn);
            ++res.calls;
            if (fn <= f + params.c1 * step * gp) {
                accepted = true;
                break;
            }
            // quadratic interpolation on f(0)=f, f'(0)=gp, f(step)=fn
            double denom = 2.0 * (fn - f - gp * step);
            double trial = denom > 0 ? -gp * step * step / denom : 0.5 * step;
            step = std::clamp(trial, 0.1 * step, 0.5 * step);
            if (step < 1e-16) {
                res.line_search_failed = true;
                return res;
            }
        }
        if (!accepted) break;  // budget ran out mid-search

        std::vector<double> s(n), yv(n);
        for (size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            yv[i] = gn[i] - g[i];
        }
        double sy = vdot(s, yv);
        if (sy > 1e-12 * vnorm(s) * vnorm(yv)) {
            hist.emplace_back(std::move(s), std::move(yv));
            if (static_cast<int>(hist.size()) > params.memory) hist.pop_front();
        }
        x.swap(xn);
        g.swap(gn);
        f = fn;
        ++iter;

        double ng = vnorm(g);
        res.log.push_back({iter, res.calls, f, ng});
        if (observer) observer(res.log.back(), x);
        if (f < res.f) {
            res.x = x;
            res.f = f;
            res.grad_norm = ng;
        }
    }
    return res;
}

namespace {

// shared driver for both quantization modes
QuantizeResult run_points(SiteSet sites, const DensityField& rho, OptimizeMode mode, int nb_iter,
                          int q, int workers) {
    QuantizeResult out;
    TransportProblem prob;
    prob.sites = std::move(sites);
    prob.mesh = DomainMesh::cube(prob.sites.dim);
    prob.density = &rho;
    prob.order = q;
    prob.workers = workers;

    int n = prob.sites.size();
    int d = prob.sites.dim;

    if (mode == OptimizeMode::Lloyd) {
        for (int it = 0; it < nb_iter; ++it) {
            PowerDiagram dia = prob.evaluate();
            ++out.calls;
            auto gs = grad_sites(prob, dia);
            double g2 = 0;
            for (const auto& v : gs) g2 += norm2(v);
            IterRecord rec{it, out.calls, energy(prob, dia), std::sqrt(g2)};
            mass_stats(dia, rec);
            out.log.push_back(rec);
            prob.sites.points = lloyd_step(prob, dia);
            prob.sites.lift();
        }
        out.sites = std::move(prob.sites);
        return out;
    }

    std::vector<double> x0(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) x0[static_cast<size_t>(i) * d + c] = prob.sites.points[i][c];

    std::vector<double> last_masses;
    Evaluator eval = [&](const std::vector<double>& x, std::vector<double>& grad) {
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) prob.sites.points[i][c] = x[static_cast<size_t>(i) * d + c];
        prob.sites.lift();
        PowerDiagram dia = prob.evaluate();
        auto gs = grad_sites(prob, dia);
        grad.resize(x.size());
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < d; ++c) grad[static_cast<size_t>(i) * d + c] = gs[i][c];
        last_masses.clear();
        for (const auto& cell : dia.cells) last_masses.push_back(cell.mass);
        return energy(prob, dia);
    };

    LbfgsParams params;
    params.max_calls = nb_iter;
    IterObserver obs = [&](const LbfgsIterate& it, const std::vector<double>&) {
        IterRecord rec{it.iter, it.calls, it.f, it.grad_norm};
        std::vector<double> m = last_masses;
        std::sort(m.begin(), m.end());
        rec.min_mass = m.front();
        rec.max_mass = m.back();
        rec.median_mass = m[m.size() / 2];
        out.log.push_back(rec);
    };
    LbfgsResult r = lbfgs_minimize(eval, std::move(x0), params, obs);
    out.calls = r.calls;
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < d; ++c) prob.sites.points[i][c] = r.x[static_cast<size_t>(i) * d + c];
    prob.sites.lift();
    out.sites = std::move(prob.sites);
    return out;
}

}  // namespace

QuantizeResult optimize_points(int N, const DensityField& rho, OptimizeMode mode, int nb_iter,
                               std::uint64_t seed, int q, int workers) {
    return run_points(white_noise_sites(rho.dim, N, seed), rho, mode, nb_iter, q, workers);
}

QuantizeResult optimize_points_from(SiteSet init, const DensityField& rho, OptimizeMode mode,
                                    int nb_iter, int q, int workers) {
    return run_points(std::move(init), rho, mode, nb_iter, q, workers);
}

SdotResult optimize_weights_for_sites(SiteSet sites, const DensityField& rho, int nb_iter, int q,
                                      int workers, const std::vector<double>* targets) {
    SdotResult out;
    TransportProblem prob;
    prob.sites = std::move(sites);
    prob.mesh = DomainMesh::cube(prob.sites.dim);
    prob.density = &rho;
    prob.order = q;
    prob.workers = workers;

    int n = prob.sites.size();
    if (targets) {
        prob.targets = *targets;
    } else {
        double mt = domain_total_mass(prob.mesh, rho, q);
        prob.targets.assign(n, mt / n);
    }
    out.target_mass = prob.targets.empty() ? 0 : prob.targets[0];

    std::fill(prob.sites.weights.begin(), prob.sites.weights.end(), 0.0);

    std::vector<double> last_masses;
    // maximize concave E over w == minimize -E
    Evaluator eval = [&](const std::vector<double>& w, std::vector<double>& grad) {
        prob.sites.weights = w;
        prob.sites.lift();
        PowerDiagram dia = prob.evaluate();
        auto gw = grad_weights(prob, dia);
        grad.resize(w.size());
        for (int i = 0; i < n; ++i) grad[i] = -gw[i];
        last_masses.clear();
        for (const auto& cell : dia.cells) last_masses.push_back(cell.mass);
        return -energy(prob, dia);
    };

    LbfgsParams params;
    params.max_calls = nb_iter;
    IterObserver obs = [&](const LbfgsIterate& it, const std::vector<double>&) {
        IterRecord rec{it.iter, it.calls, -it.f, it.grad_norm};
        std::vector<double> m = last_masses;
        std::sort(m.begin(), m.end());
        rec.min_mass = m.front();
        rec.max_mass = m.back();
        rec.median_mass = m[m.size() / 2];
        out.log.push_back(rec);
    };
    LbfgsResult r = lbfgs_minimize(eval, std::vector<double>(n, 0.0), params, obs);
    out.calls = r.calls;
    out.line_search_failed = r.line_search_failed;
    prob.sites.weights = r.x;
    prob.sites.lift();
    out.sites = std::move(prob.sites);
    return out;
}

SdotResult optimize_weights(int N, const DensityField& rho, int nb_iter, std::uint64_t seed, int q,
                            int workers, int point_iters) {
    QuantizeResult pts =
        optimize_points(N, rho, OptimizeMode::LBFGS, point_iters, seed, q, workers);
    return optimize_weights_for_sites(std::move(pts.sites), rho, nb_iter, q, workers);
}

}  // namespace powerd
