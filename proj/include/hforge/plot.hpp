#pragma once

// Deterministic SVG output. Every coordinate goes through one fixed-precision
// formatter, so identical inputs give identical bytes.

#include <hforge/construction.hpp>
#include <hforge/errors.hpp>
#include <hforge/ifs.hpp>
#include <hforge/search.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hforge::plot {

inline std::string fixed(double x, int digits = 3)
{
    if (std::abs(x) < 0.5 * std::pow(10.0, -digits)) x = 0.0; // no "-0.000"
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

/// Minimal SVG writer in pixel coordinates.
class Svg {
public:
    Svg(double width, double height) : width_(width), height_(height) {}

    void circle(double cx, double cy, double r, const std::string& style)
    {
        body_ += "<circle cx=\"" + fixed(cx) + "\" cy=\"" + fixed(cy) + "\" r=\"" + fixed(r) + "\" " + style + "/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string& style)
    {
        body_ += "<rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(w) + "\" height=\"" + fixed(h)
                 + "\" " + style + "/>\n";
    }
    void line(double x1, double y1, double x2, double y2, const std::string& style)
    {
        body_ += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y1) + "\" x2=\"" + fixed(x2) + "\" y2=\"" + fixed(y2)
                 + "\" " + style + "/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style)
    {
        body_ += "<polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += ' ';
            body_ += fixed(pts[i].first) + ',' + fixed(pts[i].second);
        }
        body_ += "\" " + style + "/>\n";
    }
    void polygon(const std::vector<std::pair<double, double>>& pts, const std::string& style)
    {
        body_ += "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += ' ';
            body_ += fixed(pts[i].first) + ',' + fixed(pts[i].second);
        }
        body_ += "\" " + style + "/>\n";
    }
    void text(double x, double y, const std::string& s, const std::string& style)
    {
        std::string esc;
        for (char ch : s) {
            switch (ch) {
            case '<': esc += "&lt;"; break;
            case '>': esc += "&gt;"; break;
            case '&': esc += "&amp;"; break;
            default: esc += ch;
            }
        }
        body_ += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" " + style + ">" + esc + "</text>\n";
    }

    [[nodiscard]] std::string str() const
    {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width_, 0) + "\" height=\"" + fixed(height_, 0)
               + "\" viewBox=\"0 0 " + fixed(width_, 0) + ' ' + fixed(height_, 0) + "\">\n"
               + "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
    }

private:
    double width_;
    double height_;
    std::string body_;
};

struct AttractorOptions {
    int depth = 1;
    std::size_t max_cylinders = 200'000;
    double size = 600.0; ///< canvas edge in pixels
};

/// Cylinder images phi_w(B) at the given depth, the fixed points of the maps,
/// the ball B = B(0,1/2) and, at t = 1, the inner ball V.
inline std::string attractor_svg(const ConstructionParams& p, double t, const AttractorOptions& opts = {})
{
    if (p.d > 2) throw std::invalid_argument("attractor plots need d <= 2");
    if (opts.depth < 0) throw std::invalid_argument("depth must be nonnegative");
    const IFS f = ifs_at(p, t);
    const double count = std::pow(static_cast<double>(f.size()), opts.depth);
    if (count > static_cast<double>(opts.max_cylinders)) {
        throw BudgetExceeded("plot: " + fixed(count, 0) + " cylinders exceed the cap of " + std::to_string(opts.max_cylinders));
    }

    const double px = opts.size;
    const double scale = px / 1.2; // world [-0.6, 0.6] fills the canvas
    auto X = [&](const Point& q) { return px / 2 + scale * q[0]; };
    auto Y = [&](const Point& q) { return px / 2 - (p.d > 1 ? scale * q[1] : 0.0); };

    Svg svg(px, px);
    const Ball outer{Point(static_cast<std::size_t>(p.d)), 0.5};
    svg.circle(px / 2, px / 2, scale * outer.radius, "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"");
    if (t == 1.0) {
        const Ball v = inner_ball(p);
        svg.circle(px / 2, px / 2, scale * v.radius, "fill=\"none\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"4 3\"");
    }

    // cylinders by breadth-first composition, lexicographic order
    std::vector<CylinderMap> level{CylinderMap::identity(static_cast<std::size_t>(p.d))};
    for (int k = 0; k < opts.depth; ++k) {
        std::vector<CylinderMap> next;
        next.reserve(level.size() * f.size());
        for (const auto& w : level) {
            for (const auto& m : f.maps()) next.push_back(w.then(m));
        }
        level = std::move(next);
    }
    if (opts.depth > 0) {
        for (const auto& w : level) {
            const Ball b = w.image(outer);
            svg.circle(X(b.center), Y(b.center), std::max(scale * b.radius, 0.25),
                       "fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"");
        }
    }
    for (const auto& m : f.maps()) {
        const Point q = m.fixed_point();
        svg.circle(X(q), Y(q), 3.0, "fill=\"black\"");
    }
    svg.text(10, 20, "t = " + fixed(t, 3) + ", n = " + std::to_string(p.n) + ", maps = " + std::to_string(p.ell),
             "font-family=\"monospace\" font-size=\"14\"");
    return svg.str();
}

struct SweepPlotOptions {
    double width = 640.0;
    double height = 400.0;
    std::optional<double> target; ///< horizontal reference line at c
};

/// Step band of [lower, upper] against t; each sample owns the t-interval
/// between the midpoints to its neighbours.
inline std::string sweep_svg(std::vector<SweepPoint> pts, const SweepPlotOptions& opts = {})
{
    if (pts.empty()) throw IoError("sweep plot: no data");
    std::stable_sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.t < b.t; });

    const double left = 60.0, right = 20.0, top = 20.0, bottom = 40.0;
    const double w = opts.width - left - right;
    const double h = opts.height - top - bottom;
    double ymax = 0.0;
    for (const auto& p : pts) {
        if (std::isfinite(p.estimate.upper)) ymax = std::max(ymax, p.estimate.upper);
        ymax = std::max(ymax, p.estimate.lower);
    }
    if (opts.target) ymax = std::max(ymax, *opts.target);
    ymax = ymax > 0.0 ? 1.1 * ymax : 1.0;
    auto X = [&](double t) { return left + w * t; };
    auto Y = [&](double v) { return top + h * (1.0 - std::clamp(v, 0.0, ymax) / ymax); };

    Svg svg(opts.width, opts.height);
    const std::string axis = "stroke=\"black\" stroke-width=\"1\"";
    const std::string label = "font-family=\"monospace\" font-size=\"11\"";
    svg.line(X(0), Y(0), X(1), Y(0), axis);
    svg.line(X(0), Y(0), X(0), Y(ymax), axis);
    for (int i = 0; i <= 4; ++i) {
        const double t = i / 4.0;
        svg.line(X(t), Y(0), X(t), Y(0) + 4, axis);
        svg.text(X(t) - 12, Y(0) + 18, fixed(t, 2), label);
        const double v = ymax * i / 4.0;
        svg.line(X(0) - 4, Y(v), X(0), Y(v), axis);
        svg.text(4, Y(v) + 4, fixed(v, 3), label);
    }
    svg.text(X(0.5) - 4, opts.height - 6, "t", label);

    std::vector<std::pair<double, double>> lo_line, hi_line;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double a = i == 0 ? 0.0 : 0.5 * (pts[i - 1].t + pts[i].t);
        const double b = i + 1 == pts.size() ? 1.0 : 0.5 * (pts[i].t + pts[i + 1].t);
        const auto& e = pts[i].estimate;
        const double up = std::isfinite(e.upper) ? e.upper : ymax;
        svg.rect(X(a), Y(up), X(b) - X(a), Y(e.lower) - Y(up), "fill=\"#fdd0a2\" stroke=\"none\"");
        lo_line.emplace_back(X(a), Y(e.lower));
        lo_line.emplace_back(X(b), Y(e.lower));
        hi_line.emplace_back(X(a), Y(up));
        hi_line.emplace_back(X(b), Y(up));
    }
    svg.polyline(lo_line, "fill=\"none\" stroke=\"#2171b5\" stroke-width=\"1.5\"");
    svg.polyline(hi_line, "fill=\"none\" stroke=\"#cb181d\" stroke-width=\"1.5\"");
    for (const auto& p : pts) svg.circle(X(p.t), Y(0.5 * (p.estimate.lower + std::min(p.estimate.upper, ymax))), 2.0, "fill=\"black\"");
    if (opts.target) {
        svg.line(X(0), Y(*opts.target), X(1), Y(*opts.target), "stroke=\"#238b45\" stroke-width=\"1\" stroke-dasharray=\"5 4\"");
    }
    return svg.str();
}

} // namespace hforge::plot
