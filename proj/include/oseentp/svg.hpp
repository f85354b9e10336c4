#pragma once

#include <string>
#include <vector>

// Minimal self-contained SVG emitter for log-log decay plots: decade grid,
// point markers per series, optional fitted power-law line, legend. Output is
// deterministic (fixed-precision coordinates, no timestamps).

namespace oseentp {

struct PlotSeries {
    std::string label;
    std::vector<double> x;  // strictly positive
    std::vector<double> y;  // nonpositive entries are skipped
    bool has_fit = false;
    double fit_exponent = 0;  // fitted y = exp(fit_log_amp) * x^fit_exponent
    double fit_log_amp = 0;   // natural log of the prefactor
};

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

}  // namespace oseentp
