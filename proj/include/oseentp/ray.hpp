#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "oseentp/vec.hpp"

// Far-field sampling rays: unit direction plus strictly increasing radii.

namespace oseentp {

struct Ray {
    Vec3 dir;
    std::vector<double> radii;
    std::string label;

    void validate() const {
        if (std::abs(norm(dir) - 1.0) > 1e-12)
            throw std::invalid_argument("Ray: direction must be a unit vector");
        if (radii.size() < 2) throw std::invalid_argument("Ray: need at least 2 radii");
        for (std::size_t i = 0; i + 1 < radii.size(); ++i)
            if (!(radii[i] > 0 && radii[i] < radii[i + 1]))
                throw std::invalid_argument("Ray: radii must be positive and increasing");
    }
};

// Geometric radii r0 * ratio^j up to and including the first value >= r1.
inline std::vector<double> geometric_radii(double r0, double r1, double ratio) {
    if (!(r0 > 0 && r1 > r0 && ratio > 1))
        throw std::invalid_argument("geometric_radii: need 0 < r0 < r1, ratio > 1");
    std::vector<double> r;
    for (double x = r0; x < r1 * (1 + 1e-12); x *= ratio) r.push_back(x);
    return r;
}

// Any unit vector orthogonal to d.
inline Vec3 orthogonal_unit(const Vec3& d) {
    Vec3 trial = std::abs(d[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 o = trial - dot(trial, d) * d;
    return normalized(o);
}

// Standard 6-ray probe set around the drift direction: the wake axis -zhat,
// the upstream axis +zhat, two transverse, two diagonal directions.
inline std::vector<Ray> default_ray_set(const Vec3& zeta, std::vector<double> radii) {
    if (!(norm(zeta) > 0)) throw std::invalid_argument("default_ray_set: zeta must be nonzero");
    Vec3 zh = normalized(zeta);
    Vec3 o1 = orthogonal_unit(zh);
    Vec3 o2 = cross(zh, o1);
    std::vector<Ray> rays;
    const double s = 1.0 / std::sqrt(2.0);
    rays.push_back({-1.0 * zh, radii, "wake_axis"});
    rays.push_back({zh, radii, "upstream_axis"});
    rays.push_back({o1, radii, "transverse_1"});
    rays.push_back({o2, radii, "transverse_2"});
    rays.push_back({s * (zh + o1), radii, "diagonal_up"});
    rays.push_back({s * (o1 - zh), radii, "diagonal_down"});
    for (auto& r : rays) r.validate();
    return rays;
}

}  // namespace oseentp
