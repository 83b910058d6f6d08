#include "qcrb/cli/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qcrb::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (v > 0.0 && std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    // Expand to whole decades in log10.
    void finalize() {
        if (!(lo <= hi)) {
            lo = 1.0;
            hi = 10.0;
        }
        lo = std::floor(std::log10(lo));
        hi = std::ceil(std::log10(hi));
        if (hi <= lo) {
            hi = lo + 1.0;
        }
    }
};

class Axes {
public:
    Axes(Range x, Range y) : x_(x), y_(y) {}

    double px(double v) const {
        return kLeft + (std::log10(v) - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
    }
    double py(double v) const {
        const double clamped = std::max(v, std::pow(10.0, y_.lo));
        return kHeight - kBottom - (std::log10(clamped) - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
    }

private:
    Range x_;
    Range y_;
};

std::string decade_label(double exponent) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(exponent));
    return buf;
}

}  // namespace

std::string render_svg(const LogLogPlot& plot) {
    Range xr;
    Range yr;
    for (const auto& c : plot.curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (c.x[i] > 0.0 && c.y[i] > 0.0) {
                xr.add(c.x[i]);
                yr.add(c.y[i]);
            }
        }
    }
    for (const auto& p : plot.points) {
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            xr.add(p.x[i]);
            yr.add(p.y[i]);
            yr.add(p.y_high[i]);
        }
    }
    xr.finalize();
    yr.finalize();
    const Axes axes(xr, yr);

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(plot.title) + "</text>\n";

    const double x0 = kLeft;
    const double x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom;
    const double y1 = kTop;
    svg += "<g class=\"axes\" stroke=\"#888\" stroke-width=\"0.5\">\n";
    for (double e = xr.lo; e <= xr.hi + 0.5; e += 1.0) {
        const double x = axes.px(std::pow(10.0, e));
        svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x) + "\" y2=\"" + num(y1) + "\"/>\n";
    }
    for (double e = yr.lo; e <= yr.hi + 0.5; e += 1.0) {
        const double y = axes.py(std::pow(10.0, e));
        svg += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x1) + "\" y2=\"" + num(y) + "\"/>\n";
    }
    svg += "</g>\n";
    svg += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) + "\" height=\"" +
           num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = xr.lo; e <= xr.hi + 0.5; e += 1.0) {
        svg += "<text x=\"" + num(axes.px(std::pow(10.0, e))) + "\" y=\"" + num(y0 + 18) +
               "\" text-anchor=\"middle\">" + decade_label(e) + "</text>\n";
    }
    for (double e = yr.lo; e <= yr.hi + 0.5; e += 1.0) {
        svg += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(axes.py(std::pow(10.0, e)) + 4) +
               "\" text-anchor=\"end\">" + decade_label(e) + "</text>\n";
    }
    svg += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 16) + "\" text-anchor=\"middle\">" +
           escape(plot.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           num((y0 + y1) / 2) + ")\">" + escape(plot.y_label) + "</text>\n";

    for (const auto& c : plot.curves) {
        std::string points;
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (c.x[i] > 0.0 && c.y[i] > 0.0) {
                points += num(axes.px(c.x[i])) + "," + num(axes.py(c.y[i])) + " ";
            }
        }
        svg += "<polyline class=\"curve\" fill=\"none\" stroke=\"" + c.color + "\" stroke-width=\"2\"" +
               (c.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + points + "\"/>\n";
    }
    for (const auto& p : plot.points) {
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            if (!(p.x[i] > 0.0 && p.y[i] > 0.0)) {
                continue;
            }
            const double x = axes.px(p.x[i]);
            svg += "<line class=\"errorbar\" x1=\"" + num(x) + "\" y1=\"" + num(axes.py(p.y_low[i])) + "\" x2=\"" +
                   num(x) + "\" y2=\"" + num(axes.py(p.y_high[i])) + "\" stroke=\"" + p.color + "\"/>\n";
            svg += "<circle class=\"point\" cx=\"" + num(x) + "\" cy=\"" + num(axes.py(p.y[i])) +
                   "\" r=\"4\" fill=\"" + p.color + "\"/>\n";
        }
    }

    svg += "<g class=\"legend\">\n";
    double ly = kTop + 10;
    for (const auto& c : plot.curves) {
        svg += "<line x1=\"" + num(x1 + 14) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(x1 + 40) + "\" y2=\"" + num(ly) +
               "\" stroke=\"" + c.color + "\" stroke-width=\"2\"" + (c.dashed ? " stroke-dasharray=\"6 4\"" : "") +
               "/>\n";
        svg += "<text x=\"" + num(x1 + 46) + "\" y=\"" + num(ly + 4) + "\">" + escape(c.label) + "</text>\n";
        ly += 20;
    }
    for (const auto& p : plot.points) {
        svg += "<circle cx=\"" + num(x1 + 27) + "\" cy=\"" + num(ly) + "\" r=\"4\" fill=\"" + p.color + "\"/>\n";
        svg += "<text x=\"" + num(x1 + 46) + "\" y=\"" + num(ly + 4) + "\">" + escape(p.label) + "</text>\n";
        ly += 20;
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace qcrb::cli
