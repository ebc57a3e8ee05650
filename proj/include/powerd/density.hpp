#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "powerd/vec.hpp"

namespace powerd {

enum class DensityKind { Uniform, Gaussian, Cone, Sphere, Custom };

// Strictly positive density on the unit d-cube. The Gaussian and sphere
// fields are centered at (0.5,...,0.5); the cone field measures, in the
// (radius, height) plane, the distance from (r(x), x_d) to the segment
// (r0,0)-(r1,1), where r(x) is the distance of the first d-1 coordinates
// from axis_center.
struct DensityField {
    DensityKind kind = DensityKind::Uniform;
    int dim = 0;
    Vec mu;                  // gaussian / sphere center
    double sigma2 = 0.02;    // gaussian per-axis variance
    double r0 = 0.4, r1 = 0.7;
    Vec axis_center;         // cone, first dim-1 coordinates
    int recommended_order = 2;
    std::function<double(const Vec&)> fn;  // Custom only

    double eval(const Vec& x) const;

    static DensityField make(DensityKind kind, int dim);
    // Names: uniform, gaussian, cone, sphere.
    static DensityField by_name(std::string_view name, int dim);
    static DensityField custom(int dim, std::function<double(const Vec&)> fn,
                               int recommended_order = 2);
    std::string name() const;
};

}  // namespace powerd
