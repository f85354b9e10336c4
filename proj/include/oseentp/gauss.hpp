#pragma once

#include <cmath>
#include <vector>

#include "oseentp/params.hpp"

namespace oseentp {

// Gauss-Legendre rule on [-1, 1] by Newton iteration on the Legendre
// recurrence; machine precision for the small orders used here.
inline void legendre_rule(int n, std::vector<double>& xs, std::vector<double>& ws) {
    xs.assign(static_cast<std::size_t>(n), 0.0);
    ws.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int l = 2; l <= n; ++l) {
                double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int l = 2; l <= n; ++l) {
            double p2 = ((2 * l - 1) * x * p1 - (l - 1) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        xs[static_cast<std::size_t>(i)] = x;
        ws[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

}  // namespace oseentp
