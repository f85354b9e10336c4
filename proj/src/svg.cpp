#include "oseentp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oseentp {

namespace {

constexpr double kWidth = 720, kHeight = 500;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct LogRange {
    double lo = 0, hi = 1;  // log10 bounds

    double to_unit(double value) const { return (std::log10(value) - lo) / (hi - lo); }
};

LogRange fit_range(double vmin, double vmax) {
    LogRange r;
    r.lo = std::log10(vmin);
    r.hi = std::log10(vmax);
    if (!(r.hi - r.lo > 1e-9)) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    double pad = 0.04 * (r.hi - r.lo);
    r.lo -= pad;
    r.hi += pad;
    return r;
}

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool any = false;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("write_loglog_svg: series \"" + s.label +
                                        "\" has mismatched x/y sizes");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0)) throw std::invalid_argument("write_loglog_svg: nonpositive x");
            if (!(s.y[i] > 0)) continue;
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!any) throw std::invalid_argument("write_loglog_svg: no positive data to plot");

    LogRange rx = fit_range(xmin, xmax), ry = fit_range(ymin, ymax);
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + rx.to_unit(x) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - ry.to_unit(y)) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << xml_escape(title) << "</text>\n";

    // Frame and decade grid.
    out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(rx.lo)); d <= static_cast<int>(std::floor(rx.hi));
         ++d) {
        double x = px(std::pow(10.0, d));
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + ph + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
            << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ry.lo)); d <= static_cast<int>(std::floor(ry.hi));
         ++d) {
        double y = py(std::pow(10.0, d));
        out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(kLeft + pw) << "\" y2=\"" << num(y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" << d
            << "</text>\n";
    }
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << num(kTop + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << num(kTop + ph / 2) << ")\">" << xml_escape(y_label)
        << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const PlotSeries& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (s.has_fit) {
            // The fit uses natural logs; convert the endpoints directly.
            double x0 = xmin, x1 = xmax;
            double y0 = std::exp(s.fit_log_amp + s.fit_exponent * std::log(x0));
            double y1 = std::exp(s.fit_log_amp + s.fit_exponent * std::log(x1));
            auto clamp = [&](double v) {
                return std::min(std::pow(10.0, ry.hi), std::max(std::pow(10.0, ry.lo), v));
            };
            out << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(clamp(y0))) << "\" x2=\""
                << num(px(x1)) << "\" y2=\"" << num(py(clamp(y1))) << "\" stroke=\"" << color
                << "\" stroke-dasharray=\"5 4\" stroke-width=\"1\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.y[i] > 0)) continue;
            out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        double ly = kTop + 14 + 16 * static_cast<double>(si);
        out << "<rect x=\"" << num(kLeft + pw - 190) << "\" y=\"" << num(ly - 9)
            << "\" width=\"9\" height=\"9\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << num(kLeft + pw - 176) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_loglog_svg: cannot open " + path + " for writing");
    f << out.str();
    if (!f) throw std::runtime_error("write_loglog_svg: write failed for " + path);
}

}  // namespace oseentp
