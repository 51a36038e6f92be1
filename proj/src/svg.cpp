#include "dimred/svg.hpp"

#include "dimred/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dimred::svg {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 60.0, kRight = 170.0, kTop = 50.0, kBottom = 50.0;

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

// Anchors of a viridis-like ramp, dark purple to yellow.
constexpr std::array<std::array<double, 3>, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
                                                      {253, 231, 37}}};

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

AxisRange data_range(const Embedding& z, int col) {
    double lo = z.col(col).minCoeff(), hi = z.col(col).maxCoeff();
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string category_color(std::size_t i) { return kPalette[i % kPalette.size()]; }

std::string ramp_color(double t) {
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const double pos = t * static_cast<double>(kRamp.size() - 1);
    const auto lo = std::min(static_cast<std::size_t>(pos), kRamp.size() - 2);
    const double f = pos - static_cast<double>(lo);
    char buf[8];
    int rgb[3];
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround(kRamp[lo][c] + f * (kRamp[lo + 1][c] - kRamp[lo][c])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string render(const PlotSpec& spec) {
    const Embedding& z = spec.coords;
    const Index n = z.rows();
    if (z.cols() != 2) throw ParameterError("scatter plots need a 2-D embedding, got " + std::to_string(z.cols()) + "-D");
    if (n == 0) throw ParameterError("cannot plot an empty embedding");
    if (!spec.labels.empty() && static_cast<Index>(spec.labels.size()) != n)
        throw ParameterError("label count differs from point count");
    if (spec.values.size() != 0 && spec.values.size() != n)
        throw ParameterError("value count differs from point count");
    if (!z.allFinite()) throw ParameterError("embedding has non-finite coordinates");

    const AxisRange xr = spec.x_range.value_or(data_range(z, 0));
    const AxisRange yr = spec.y_range.value_or(data_range(z, 1));
    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto sy = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

    std::map<int, std::size_t> classes;
    for (int l : spec.labels) classes.emplace(l, 0);
    std::size_t next = 0;
    for (auto& [label, slot] : classes) slot = next++;
    double vmin = 0.0, vmax = 1.0;
    if (spec.values.size() != 0) {
        vmin = spec.values.minCoeff();
        vmax = spec.values.maxCoeff();
    }

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    o << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          << "font-size=\"16\">" << escape_xml(spec.title) << "</text>\n";
    o << "<rect class=\"frame\" x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double vx = xr.lo + t * (xr.hi - xr.lo) / 4, vy = yr.lo + t * (yr.hi - yr.lo) / 4;
        o << "<text x=\"" << fmt(sx(vx)) << "\" y=\"" << fmt(kTop + ph + 18)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(vx) << "</text>\n";
        o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(sy(vy) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(vy) << "</text>\n";
    }

    o << "<g class=\"points\" fill-opacity=\"0.75\">\n";
    for (Index i = 0; i < n; ++i) {
        std::string color = "#1f77b4";
        if (!spec.labels.empty())
            color = category_color(classes.at(spec.labels[static_cast<std::size_t>(i)]));
        else if (spec.values.size() != 0)
            color = ramp_color(vmax > vmin ? (spec.values[i] - vmin) / (vmax - vmin) : 0.5);
        o << "<circle cx=\"" << fmt(sx(z(i, 0))) << "\" cy=\"" << fmt(sy(z(i, 1))) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    o << "</g>\n";

    const double lx = kLeft + pw + 20;
    o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    if (!classes.empty()) {
        double ly = kTop + 10;
        for (const auto& [label, slot] : classes) {
            o << "<g class=\"legend-entry\"><rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 9)
              << "\" width=\"10\" height=\"10\" fill=\"" << category_color(slot) << "\"/><text x=\"" << fmt(lx + 16)
              << "\" y=\"" << fmt(ly) << "\">" << label << "</text></g>\n";
            ly += 18;
        }
    } else if (spec.values.size() != 0) {
        constexpr int steps = 5;
        for (int s = 0; s < steps; ++s) {
            const double t = 1.0 - static_cast<double>(s) / (steps - 1);
            const double ly = kTop + 10 + 18 * s;
            o << "<g class=\"legend-entry\"><rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - 9)
              << "\" width=\"10\" height=\"10\" fill=\"" << ramp_color(t) << "\"/><text x=\"" << fmt(lx + 16)
              << "\" y=\"" << fmt(ly) << "\">" << tick(vmin + t * (vmax - vmin)) << "</text></g>\n";
        }
    }
    o << "</g>\n</svg>\n";
    return o.str();
}

void emit_plot(const PlotSpec& spec) {
    const std::string text = render(spec);
    std::ofstream out(spec.path, std::ios::binary);
    if (!out) throw Error("cannot write " + spec.path.string());
    out << text;
    if (!out) throw Error("write failed for " + spec.path.string());
}

}  // namespace dimred::svg
