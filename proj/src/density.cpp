#include "powerd/density.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace powerd {

double DensityField::eval(const Vec& x) const {
    switch (kind) {
        case DensityKind::Uniform:
            return 1.0;
        case DensityKind::Gaussian: {
            double r2 = 0;
            for (int i = 0; i < dim; ++i) {
                double d = x[i] - mu[i];
                r2 += d * d;
            }
            double norm = std::pow(2.0 * std::numbers::pi * sigma2, -0.5 * dim);
            return norm * std::exp(-0.5 * r2 / sigma2);
        }
        case DensityKind::Cone: {
            double r2 = 0;
            for (int i = 0; i < dim - 1; ++i) {
                double d = x[i] - axis_center[i];
                r2 += d * d;
            }
            double r = std::sqrt(r2);
            double t = x[dim - 1];
            // distance from (r,t) to the segment (r0,0)-(r1,1)
            double vx = r1 - r0, vy = 1.0;
            double wx = r - r0, wy = t;
            double c = (wx * vx + wy * vy) / (vx * vx + vy * vy);
            c = c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
            double dx = wx - c * vx, dy = wy - c * vy;
            double h2 = dx * dx + dy * dy;
            return 100.0 / (h2 + 0.001);
        }
        case DensityKind::Sphere: {
            double r2 = 0;
            for (int i = 0; i < dim; ++i) {
                double d = x[i] - mu[i];
                r2 += d * d;
            }
            return 1.0 + 100.0 * r2;
        }
        case DensityKind::Custom:
            return fn(x);
    }
    return 1.0;
}

DensityField DensityField::make(DensityKind kind, int dim) {
    DensityField f;
    f.kind = kind;
    f.dim = dim;
    f.mu = Vec(dim);
    for (int i = 0; i < dim; ++i) f.mu[i] = 0.5;
    f.axis_center = Vec(dim - 1 > 0 ? dim - 1 : 0);
    f.recommended_order = (kind == DensityKind::Gaussian) ? 4 : 2;
    return f;
}

DensityField DensityField::by_name(std::string_view name, int dim) {
    if (name == "uniform") return make(DensityKind::Uniform, dim);
    if (name == "gaussian") return make(DensityKind::Gaussian, dim);
    if (name == "cone") return make(DensityKind::Cone, dim);
    if (name == "sphere") return make(DensityKind::Sphere, dim);
    throw std::invalid_argument("unknown density: " + std::string(name));
}

DensityField DensityField::custom(int dim, std::function<double(const Vec&)> fn,
                                  int recommended_order) {
    DensityField f = make(DensityKind::Uniform, dim);
    f.kind = DensityKind::Custom;
    f.fn = std::move(fn);
    f.recommended_order = recommended_order;
    return f;
}

std::string DensityField::name() const {
    switch (kind) {
        case DensityKind::Uniform: return "uniform";
        case DensityKind::Gaussian: return "gaussian";
        case DensityKind::Cone: return "cone";
        case DensityKind::Sphere: return "sphere";
        case DensityKind::Custom: return "custom";
    }
    return "uniform";
}

}  // namespace powerd
