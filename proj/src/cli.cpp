#include "powerd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "CLI11.hpp"
#include "powerd/diagram.hpp"
#include "powerd/io.hpp"
#include "powerd/parallel.hpp"
#include "powerd/slicer.hpp"
#include "powerd/transport.hpp"

namespace powerd {

namespace {

int axis_index(const std::string& name, int dim) {
    static const std::string letters = "xyztuv";
    if (name.size() == 1) {
        size_t pos = letters.find(name[0]);
        if (pos != std::string::npos && static_cast<int>(pos) < dim) return static_cast<int>(pos);
    }
    try {
        size_t used = 0;
        int k = std::stoi(name, &used);
        if (used == name.size() && k >= 0 && k < dim) return k;
    } catch (...) {
    }
    throw CLI::ValidationError("--slice", "unknown axis '" + name + "' for dimension " +
                                              std::to_string(dim));
}

// "axis=value" -> axis-aligned hyperplane
std::pair<int, double> parse_slice(const std::string& s, int dim) {
    size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
        throw CLI::ValidationError("--slice", "expected axis=value, got '" + s + "'");
    int axis = axis_index(s.substr(0, eq), dim);
    double value = 0;
    try {
        size_t used = 0;
        value = std::stod(s.substr(eq + 1), &used);
        if (used != s.size() - eq - 1) throw std::invalid_argument("");
    } catch (...) {
        throw CLI::ValidationError("--slice", "bad value in '" + s + "'");
    }
    return {axis, value};
}

SliceSpec axis_slice_spec(int axis, double value, int dim) {
    SliceSpec sp;
    sp.anchor = Vec(dim);
    sp.normal = Vec(dim);
    sp.anchor[axis] = value;
    sp.normal[axis] = 1.0;
    return sp;
}

SliceSpec chain_slice_specs(const std::vector<std::string>& entries, int dim) {
    SliceSpec root;
    SliceSpec* tail = nullptr;
    for (const auto& e : entries) {
        auto [axis, value] = parse_slice(e, dim);
        SliceSpec sp = axis_slice_spec(axis, value, dim);
        if (!tail) {
            root = sp;
            tail = &root;
        } else {
            tail->nested.push_back(sp);
            tail = &tail->nested[0];
        }
    }
    return root;
}

std::vector<std::string> config_comments(const RunConfig& c) {
    std::vector<std::string> out;
    out.push_back("command=" + c.command);
    out.push_back("dim=" + std::to_string(c.dim));
    out.push_back("num_sites=" + std::to_string(c.num_sites));
    out.push_back("density=" + c.density);
    out.push_back("order=" + std::to_string(c.order));
    out.push_back("mode=" + (c.mode.empty() ? std::string("-") : c.mode));
    out.push_back("iters=" + std::to_string(c.iters));
    out.push_back("seed=" + std::to_string(c.seed));
    out.push_back("sites_file=" + (c.sites_file.empty() ? std::string("-") : c.sites_file));
    out.push_back("out=" + c.out);
    for (const auto& s : c.slices) out.push_back("slice=" + s);
    return out;
}

// worker count rides along with the timings: it changes how fast results
// arrive, never what they are, so files stay comparable across machines
std::vector<std::string> timing_comments(const PhaseTimers& t, int workers) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "workers=%d t_knn=%.6f t_vor=%.6f t_tri=%.6f t_q=%.6f t_total=%.6f", workers,
                  t.t_knn, t.t_vor, t.t_tri, t.t_q, t.total());
    return {buf};
}

int resolve_workers(const RunConfig& c) { return c.workers > 0 ? c.workers : hardware_workers(); }

int resolve_order(const RunConfig& c, const DensityField& rho) {
    return c.order > 0 ? c.order : rho.recommended_order;
}

int default_dim(const RunConfig& c) { return c.dim > 0 ? c.dim : 2; }

// a site file fixes the dimension; an explicit --dim must then agree
SiteSet load_or_generate(const RunConfig& c) {
    if (!c.sites_file.empty()) {
        SiteSet s = read_sites(c.sites_file);
        if (c.dim > 0 && s.dim != c.dim)
            throw std::runtime_error("site file dimension " + std::to_string(s.dim) +
                                     " does not match --dim " + std::to_string(c.dim));
        return s;
    }
    return white_noise_sites(default_dim(c), c.num_sites, c.seed);
}

void export_slices(const SliceMesh& mesh, const std::string& stem,
                   const std::vector<std::string>& comments) {
    export_edge_list(mesh, stem + ".edges.txt", comments);
    export_polygon_soup(mesh, stem + ".tris.txt", comments);
}

int cmd_generate(const RunConfig& c) {
    SiteSet s;
    int d = default_dim(c);
    RunConfig cc = c;
    cc.dim = d;
    std::vector<std::string> comments = config_comments(cc);
    if (c.mode == "blue") {
        double radius = 0;
        s = blue_noise_sites(d, c.num_sites, c.seed, 0.0, &radius);
        char buf[128];
        std::snprintf(buf, sizeof buf, "blue_noise_radius=%.17g", radius);
        comments.push_back(buf);
        if (s.size() < c.num_sites)
            std::fprintf(stderr, "warning: blue noise stalled at %d of %d points\n", s.size(),
                         c.num_sites);
    } else if (c.mode == "white" || c.mode.empty()) {
        s = white_noise_sites(d, c.num_sites, c.seed);
    } else {
        std::fprintf(stderr, "error: unknown generate mode '%s' (white|blue)\n", c.mode.c_str());
        return 1;
    }
    write_sites(s, c.out, comments);
    std::printf("wrote %d sites (d=%d) to %s\n", s.size(), s.dim, c.out.c_str());
    return 0;
}

int cmd_diagram(const RunConfig& c) {
    SiteSet sites = load_or_generate(c);
    int d = sites.dim;
    RunConfig cc = c;
    cc.dim = d;
    DensityField rho = DensityField::by_name(c.density, d);
    int q = resolve_order(c, rho);
    int workers = resolve_workers(c);
    DomainMesh mesh = DomainMesh::cube(d);
    PowerDiagram dia = compute_diagram(sites, mesh, rho, q, workers);

    TextTable table;
    table.comments = config_comments(cc);
    char buf[256];
    std::snprintf(buf, sizeof buf, "total_mass=%.17g total_vertices=%lld total_facets=%lld",
                  dia.total_mass(), dia.total_vertices(), dia.total_facets());
    table.comments.push_back(buf);
    table.timing_comments = timing_comments(dia.timers, workers);
    table.columns = {"cell", "mass"};
    for (int k = 0; k < d; ++k) table.columns.push_back("c" + std::to_string(k));
    table.columns.push_back("verts");
    table.columns.push_back("facets");
    for (int i = 0; i < sites.size(); ++i) {
        const PowerCell& cell = dia.cells[i];
        std::vector<double> row{static_cast<double>(i), cell.mass};
        for (int k = 0; k < d; ++k)
            row.push_back(cell.has_centroid ? cell.centroid[k]
                                            : std::numeric_limits<double>::quiet_NaN());
        row.push_back(cell.vertex_count);
        row.push_back(cell.facet_count);
        table.rows.push_back(std::move(row));
    }
    write_table(table, c.out);
    std::printf("%d cells, total mass %.12g, %lld vertices, %lld facets\n", sites.size(),
                dia.total_mass(), dia.total_vertices(), dia.total_facets());
    std::printf("timing: knn %.4fs, clip %.4fs, decompose %.4fs, quadrature %.4fs\n",
                dia.timers.t_knn, dia.timers.t_vor, dia.timers.t_tri, dia.timers.t_q);
    return 0;
}

void write_convergence_log(const std::vector<IterRecord>& log, const std::string& path,
                           std::vector<std::string> comments, double norm_mass) {
    TextTable t;
    t.comments = std::move(comments);
    t.columns = {"iter",     "calls",    "energy",   "grad_norm", "energy_n",
                 "grad_n",   "min_mass", "med_mass", "max_mass",  "min_mass_n",
                 "med_mass_n", "max_mass_n"};
    double e0 = log.empty() ? 1.0 : log.front().energy;
    double g0 = log.empty() ? 1.0 : log.front().grad_norm;
    if (e0 == 0) e0 = 1;
    if (g0 == 0) g0 = 1;
    double mt = norm_mass > 0 ? norm_mass : 1.0;
    for (const auto& r : log) {
        t.rows.push_back({static_cast<double>(r.iter), static_cast<double>(r.calls), r.energy,
                          r.grad_norm, r.energy / e0, r.grad_norm / g0, r.min_mass, r.median_mass,
                          r.max_mass, r.min_mass / mt, r.median_mass / mt, r.max_mass / mt});
    }
    write_table(t, path);
}

int cmd_quantize(const RunConfig& c) {
    if (c.density != "uniform" && c.density != "gaussian" && c.density != "cone") {
        std::fprintf(stderr, "error: quantize expects density uniform|gaussian|cone\n");
        return 1;
    }
    OptimizeMode mode;
    if (c.mode == "lloyd" || c.mode.empty())
        mode = OptimizeMode::Lloyd;
    else if (c.mode == "lbfgs")
        mode = OptimizeMode::LBFGS;
    else {
        std::fprintf(stderr, "error: unknown quantize mode '%s' (lloyd|lbfgs)\n", c.mode.c_str());
        return 1;
    }

    SiteSet init;
    bool from_file = !c.sites_file.empty();
    if (from_file) init = load_or_generate(c);
    int d = from_file ? init.dim : default_dim(c);
    RunConfig cc = c;
    cc.dim = d;
    DensityField rho = DensityField::by_name(c.density, d);
    int q = resolve_order(c, rho);
    int workers = resolve_workers(c);

    QuantizeResult res;
    if (from_file)
        res = optimize_points_from(std::move(init), rho, mode, c.iters, q, workers);
    else
        res = optimize_points(c.num_sites, rho, mode, c.iters, c.seed, q, workers);

    write_sites(res.sites, c.out + "_sites.txt", config_comments(cc));
    write_convergence_log(res.log, c.out + "_log.txt", config_comments(cc), 0);

    if (!c.slices.empty()) {
        PowerDiagram dia = compute_diagram(res.sites, DomainMesh::cube(d), rho, q, workers);
        for (size_t k = 0; k < c.slices.size(); ++k) {
            auto [axis, value] = parse_slice(c.slices[k], d);
            SliceMesh mesh = slice_diagram(dia, axis_slice_spec(axis, value, d), workers);
            export_slices(mesh, c.out + "_slice" + std::to_string(k), config_comments(cc));
        }
    }
    if (!res.log.empty()) {
        const auto& last = res.log.back();
        double e0 = res.log.front().energy, g0 = res.log.front().grad_norm;
        std::printf("quantize: %d evaluations, energy %.8g (x%.4g), grad norm %.4g (x%.4g)\n",
                    res.calls, last.energy, e0 != 0 ? last.energy / e0 : 0.0, last.grad_norm,
                    g0 != 0 ? last.grad_norm / g0 : 0.0);
    }
    return 0;
}

int cmd_sdot(const RunConfig& c) {
    if (c.density != "uniform" && c.density != "sphere") {
        std::fprintf(stderr, "error: sdot expects density uniform|sphere\n");
        return 1;
    }
    SiteSet init;
    bool from_file = !c.sites_file.empty();
    if (from_file) init = load_or_generate(c);
    int d = from_file ? init.dim : default_dim(c);
    RunConfig cc = c;
    cc.dim = d;
    DensityField rho = DensityField::by_name(c.density, d);
    int q = resolve_order(c, rho);
    int workers = resolve_workers(c);

    SdotResult res;
    if (from_file)
        res = optimize_weights_for_sites(std::move(init), rho, c.iters, q, workers);
    else
        res = optimize_weights(c.num_sites, rho, c.iters, c.seed, q, workers);

    auto comments = config_comments(cc);
    char buf[160];
    std::snprintf(buf, sizeof buf, "target_mass=%.17g", res.target_mass);
    comments.push_back(buf);
    if (res.sites.size() == 2) {
        std::snprintf(buf, sizeof buf, "weight_gap=%.17g",
                      res.sites.weights[0] - res.sites.weights[1]);
        comments.push_back(buf);
    }
    write_sites(res.sites, c.out + "_weights.txt", comments, /*with_weights=*/true);
    write_convergence_log(res.log, c.out + "_log.txt", comments, res.target_mass);

    if (!res.log.empty()) {
        const auto& last = res.log.back();
        double dev = std::max(std::abs(last.max_mass - res.target_mass),
                              std::abs(last.min_mass - res.target_mass)) /
                     res.target_mass;
        std::printf("sdot: %d evaluations, grad norm %.4g, max mass deviation %.4g%s\n", res.calls,
                    last.grad_norm, dev, res.line_search_failed ? " (line search stalled)" : "");
        if (res.sites.size() == 2)
            std::printf("weight gap w0-w1 = %.8g\n", res.sites.weights[0] - res.sites.weights[1]);
    }
    return 0;
}

int cmd_slice(const RunConfig& c) {
    if (c.sites_file.empty()) {
        std::fprintf(stderr, "error: slice requires --sites-file\n");
        return 1;
    }
    if (c.slices.empty()) {
        std::fprintf(stderr, "error: slice requires at least one --slice axis=value\n");
        return 1;
    }
    SiteSet sites = load_or_generate(c);
    int d = sites.dim;
    RunConfig cc = c;
    cc.dim = d;
    DensityField rho = DensityField::by_name(c.density, d);
    int q = resolve_order(c, rho);
    int workers = resolve_workers(c);
    PowerDiagram dia = compute_diagram(sites, DomainMesh::cube(d), rho, q, workers);
    SliceSpec spec = chain_slice_specs(c.slices, d);
    SliceMesh mesh = slice_diagram(dia, spec, workers);
    export_slices(mesh, c.out, config_comments(cc));
    std::printf("slice: %zu cells, %zu simplices, volume %.12g\n", mesh.polys.size(),
                mesh.render.simplices.size(), mesh.total_volume());
    return 0;
}

int cmd_bench(const RunConfig& c) {
    int d = default_dim(c);
    RunConfig cc = c;
    cc.dim = d;
    DensityField rho = DensityField::by_name(c.density, d);
    int q = resolve_order(c, rho);
    int workers = resolve_workers(c);
    std::vector<int> sizes{c.num_sites / 16, c.num_sites / 4, c.num_sites};
    for (int& n : sizes) n = std::max(1, n);

    TextTable t;
    t.comments = config_comments(cc);
    t.comments.push_back("noise: 0=white 1=blue");
    t.timing_comments = {"workers=" + std::to_string(workers)};
    t.columns = {"noise", "N",     "verts", "facets", "t_knn",
                 "t_vor", "t_tri", "t_q",   "t_total"};
    DomainMesh mesh = DomainMesh::cube(d);
    for (int noise = 0; noise <= 1; ++noise) {
        for (int n : sizes) {
            SiteSet s = noise == 0 ? white_noise_sites(d, n, c.seed)
                                   : blue_noise_sites(d, n, c.seed);
            PowerDiagram dia = compute_diagram(s, mesh, rho, q, workers);
            t.rows.push_back({static_cast<double>(noise), static_cast<double>(s.size()),
                              static_cast<double>(dia.total_vertices()),
                              static_cast<double>(dia.total_facets()), dia.timers.t_knn,
                              dia.timers.t_vor, dia.timers.t_tri, dia.timers.t_q,
                              dia.timers.total()});
            std::printf("%s N=%d: clip %.4fs, knn %.4fs, decompose %.4fs, quadrature %.4fs\n",
                        noise == 0 ? "white" : "blue", s.size(), dia.timers.t_vor, dia.timers.t_knn,
                        dia.timers.t_tri, dia.timers.t_q);
        }
    }
    write_table(t, c.out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"restricted power diagrams, quantization and semi-discrete transport in 2d-6d"};
    app.require_subcommand(1);

    // axis range vs. the run's dimension is checked later (the dimension may
    // come from a site file); the axis=value shape is checkable right here
    CLI::Validator slice_syntax(
        [](std::string& s) -> std::string {
            auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
                return "expected axis=value, got '" + s + "'";
            std::string ax = s.substr(0, eq);
            bool named = ax.size() == 1 && std::string("xyztuv").find(ax[0]) != std::string::npos;
            bool indexed = std::all_of(ax.begin(), ax.end(), [](unsigned char ch) {
                return std::isdigit(ch) != 0;
            });
            if (!named && !indexed) return "unknown axis '" + ax + "'";
            try {
                size_t used = 0;
                (void)std::stod(s.substr(eq + 1), &used);
                if (used != s.size() - eq - 1) return "bad value in '" + s + "'";
            } catch (const std::exception&) {
                return "bad value in '" + s + "'";
            }
            return {};
        },
        "AXIS=VALUE");

    auto add_common = [&cfg, &slice_syntax](CLI::App* sub) {
        sub->add_option("--dim", cfg.dim, "ambient dimension")->check(CLI::Range(2, 6));
        sub->add_option("--num-sites", cfg.num_sites, "number of sites")
            ->check(CLI::PositiveNumber);
        sub->add_option("--density", cfg.density, "uniform|gaussian|cone|sphere");
        sub->add_option("--order", cfg.order, "quadrature order (0 = density default)")
            ->check(CLI::Range(0, 4));
        sub->add_option("--mode", cfg.mode, "mode (see subcommand help)");
        sub->add_option("--iters", cfg.iters, "iteration / evaluation budget")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware)")
            ->check(CLI::Range(0, 1024));
        sub->add_option("--sites-file", cfg.sites_file, "input site file");
        sub->add_option("--out", cfg.out, "output path or prefix");
        sub->add_option("--slice", cfg.slices, "hyperplane axis=value (repeatable)")
            ->check(slice_syntax);
    };

    const char* names[] = {"generate", "diagram", "quantize", "sdot", "slice", "bench"};
    const char* descs[] = {"sample a site distribution into a site file",
                           "compute one restricted power diagram with timing breakdown",
                           "optimize site positions for a density (Lloyd or L-BFGS)",
                           "optimize weights to equalize cell masses",
                           "cross-section an existing diagram with hyperplanes",
                           "diagram timing table over a range of site counts"};
    for (int k = 0; k < 6; ++k) add_common(app.add_subcommand(names[k], descs[k]));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        if (cfg.command == "generate") return cmd_generate(cfg);
        if (cfg.command == "diagram") return cmd_diagram(cfg);
        if (cfg.command == "quantize") return cmd_quantize(cfg);
        if (cfg.command == "sdot") return cmd_sdot(cfg);
        if (cfg.command == "slice") return cmd_slice(cfg);
        if (cfg.command == "bench") return cmd_bench(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::fprintf(stderr, "error: unknown command\n");
    return 1;
}

}  // namespace powerd
