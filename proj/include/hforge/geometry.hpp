#pragma once

// Low-dimensional convex geometry with conservative floating-point predicates.
//
// Every Inside/Outside answer returned by classify_ball() is padded by
// kGeometrySlack in the safe direction; anything inside the slack band is
// reported as Straddle.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hforge {

inline constexpr std::size_t kMaxDimension = 8;
inline constexpr double kGeometrySlack = 1e-12;

/// A point of R^d with inline storage (d <= kMaxDimension).
class Point {
public:
    Point() = default;

    explicit Point(std::size_t dim) : dim_(checked_dim(dim)) {}

    Point(std::initializer_list<double> coords) : dim_(checked_dim(coords.size()))
    {
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    explicit Point(std::span<const double> coords) : dim_(checked_dim(coords.size()))
    {
        std::copy(coords.begin(), coords.end(), c_.begin());
    }

    static Point axis(std::size_t dim, std::size_t k, double value = 1.0)
    {
        Point p(dim);
        p[k] = value;
        return p;
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

    double& operator[](std::size_t k) noexcept { return c_[k]; }
    double operator[](std::size_t k) const noexcept { return c_[k]; }

    [[nodiscard]] bool finite() const noexcept
    {
        return std::all_of(c_.begin(), c_.begin() + dim_, [](double x) { return std::isfinite(x); });
    }

    Point& operator+=(const Point& o) noexcept
    {
        for (std::size_t k = 0; k < dim_; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Point& operator-=(const Point& o) noexcept
    {
        for (std::size_t k = 0; k < dim_; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Point& operator*=(double a) noexcept
    {
        for (std::size_t k = 0; k < dim_; ++k) c_[k] *= a;
        return *this;
    }

    friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
    friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
    friend Point operator*(double s, Point a) noexcept { return a *= s; }
    friend Point operator*(Point a, double s) noexcept { return a *= s; }

    friend bool operator==(const Point&, const Point&) = default;

    /// Lexicographic order on coordinates (used for deterministic tie-breaks).
    friend bool lex_less(const Point& a, const Point& b) noexcept
    {
        return std::lexicographical_compare(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin(),
                                            b.c_.begin() + b.dim_);
    }

private:
    static std::uint8_t checked_dim(std::size_t dim)
    {
        if (dim > kMaxDimension) {
            throw std::invalid_argument("hforge: dimension " + std::to_string(dim) + " exceeds "
                                        + std::to_string(kMaxDimension));
        }
        return static_cast<std::uint8_t>(dim);
    }

    std::array<double, kMaxDimension> c_{};
    std::uint8_t dim_ = 0;
};

inline double dot(const Point& a, const Point& b) noexcept
{
    double acc = 0.0;
    for (std::size_t k = 0; k < a.dim(); ++k) acc += a[k] * b[k];
    return acc;
}

inline double norm(const Point& a) noexcept { return std::sqrt(dot(a, a)); }

inline double distance(const Point& a, const Point& b) noexcept { return norm(a - b); }

struct Ball {
    Point center;
    double radius = 0.0;

    [[nodiscard]] double diameter() const noexcept { return 2.0 * radius; }
};

/// The cube prod_k [x_k - h, x_k + h].
struct AxisBox {
    Point center;
    double half_width = 0.0;

    [[nodiscard]] double diameter() const noexcept
    {
        return 2.0 * half_width * std::sqrt(static_cast<double>(center.dim()));
    }
};

/// Supporting half-space {x : <normal, x> <= offset} with a unit normal.
struct HalfSpace {
    Point normal;
    double offset = 0.0;
};

namespace detail {

inline double cross2(const Point& o, const Point& a, const Point& b) noexcept
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline Point cross3(const Point& a, const Point& b) noexcept
{
    return Point{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double max_dot(std::span<const Point> pts, const Point& n) noexcept
{
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::max(best, dot(n, p));
    return best;
}

// Half-space description of conv(pts). Empty when the hull is not
// full-dimensional or the dimension is unsupported (then Inside can never be
// certified for the hull).
inline std::vector<HalfSpace> facets_of(std::span<const Point> pts, std::size_t max_vertices_3d = 48)
{
    std::vector<HalfSpace> out;
    if (pts.empty()) return out;
    const std::size_t d = pts.front().dim();
    if (d == 1) {
        double lo = pts.front()[0];
        double hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p[0]);
            hi = std::max(hi, p[0]);
        }
        if (!(hi > lo)) return out;
        out.push_back({Point{1.0}, hi});
        out.push_back({Point{-1.0}, -lo});
        return out;
    }
    if (d == 2) {
        std::vector<Point> v(pts.begin(), pts.end());
        std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() < 3) return out;
        // Andrew's monotone chain, counter-clockwise.
        std::vector<Point> hull(2 * v.size());
        std::size_t k = 0;
        for (const auto& p : v) {
            while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
            hull[k++] = p;
        }
        for (std::size_t i = v.size() - 1, lower = k + 1; i-- > 0;) {
            while (k >= lower && cross2(hull[k - 2], hull[k - 1], v[i]) <= 0.0) --k;
            hull[k++] = v[i];
        }
        hull.resize(k - 1);
        if (hull.size() < 3) return out;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Point& a = hull[i];
            const Point& b = hull[(i + 1) % hull.size()];
            Point n{b[1] - a[1], a[0] - b[0]};
            const double len = norm(n);
            if (len == 0.0) continue;
            n *= 1.0 / len;
            out.push_back({n, max_dot(pts, n)});
        }
        return out;
    }
    if (d == 3) {
        std::vector<Point> v(pts.begin(), pts.end());
        std::sort(v.begin(), v.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
        v.erase(std::unique(v.begin(), v.end()), v.end());
        if (v.size() < 4 || v.size() > max_vertices_3d) return out;
        double scale = 0.0;
        for (const auto& p : v) scale = std::max(scale, norm(p - v.front()));
        const double tol = 1e-12 * std::max(scale, 1.0);
        bool flat = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                for (std::size_t k = j + 1; k < v.size(); ++k) {
                    Point n = cross3(v[j] - v[i], v[k] - v[i]);
                    const double len = norm(n);
                    if (len <= tol * scale) continue;
                    n *= 1.0 / len;
                    const double base = dot(n, v[i]);
                    double hi = -std::numeric_limits<double>::infinity();
                    double lo = std::numeric_limits<double>::infinity();
                    for (const auto& p : v) {
                        const double x = dot(n, p);
                        hi = std::max(hi, x);
                        lo = std::min(lo, x);
                    }
                    const bool upper = hi - base <= tol;
                    const bool lower = base - lo <= tol;
                    if (upper && lower) continue;
                    flat = false;
                    if (upper) out.push_back({n, max_dot(pts, n)});
                    if (lower) out.push_back({-1.0 * n, max_dot(pts, -1.0 * n)});
                }
            }
        }
        if (flat) out.clear();
        return out;
    }
    return out;
}

} // namespace detail

/// Convex hull of a finite point set. The half-space description is computed
/// once at construction (d <= 3); the object is immutable afterwards.
class PointHull {
public:
    explicit PointHull(std::vector<Point> vertices) : vertices_(std::move(vertices))
    {
        if (vertices_.empty()) throw std::invalid_argument("PointHull: no vertices");
        const std::size_t d = vertices_.front().dim();
        for (const auto& p : vertices_) {
            if (p.dim() != d) throw std::invalid_argument("PointHull: mixed dimensions");
            if (!p.finite()) throw std::invalid_argument("PointHull: non-finite vertex");
        }
        facets_ = detail::facets_of(vertices_);
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
                diameter_ = std::max(diameter_, distance(vertices_[i], vertices_[j]));
            }
        }
    }

    [[nodiscard]] const std::vector<Point>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<HalfSpace>& facets() const noexcept { return facets_; }
    [[nodiscard]] std::size_t dim() const noexcept { return vertices_.front().dim(); }
    [[nodiscard]] double diameter() const noexcept { return diameter_; }

    [[nodiscard]] Point centroid() const
    {
        Point c(dim());
        for (const auto& p : vertices_) c += p;
        return (1.0 / static_cast<double>(vertices_.size())) * c;
    }

private:
    std::vector<Point> vertices_;
    std::vector<HalfSpace> facets_;
    double diameter_ = 0.0;
};

using ConvexCandidate = std::variant<Ball, AxisBox, PointHull>;

enum class Relation { Inside, Outside, Straddle };

inline const char* to_string(Relation r) noexcept
{
    switch (r) {
    case Relation::Inside: return "Inside";
    case Relation::Outside: return "Outside";
    case Relation::Straddle: return "Straddle";
    }
    return "?";
}

inline std::size_t dimension_of(const ConvexCandidate& u)
{
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointHull>) return v.dim();
            else return v.center.dim();
        },
        u);
}

inline double diameter(const ConvexCandidate& u)
{
    return std::visit([](const auto& v) { return v.diameter(); }, u);
}

/// Ball/box center or hull vertex centroid.
inline Point center_of(const ConvexCandidate& u)
{
    return std::visit(
        [](const auto& v) -> Point {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PointHull>) return v.centroid();
            else return v.center;
        },
        u);
}

/// The image of u under x -> scale * x + shift (scale > 0).
inline ConvexCandidate transformed(const ConvexCandidate& u, double scale, const Point& shift)
{
    return std::visit(
        [&](const auto& v) -> ConvexCandidate {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ball>) return Ball{scale * v.center + shift, scale * v.radius};
            else if constexpr (std::is_same_v<T, AxisBox>) return AxisBox{scale * v.center + shift, scale * v.half_width};
            else {
                std::vector<Point> pts;
                pts.reserve(v.vertices().size());
                for (const auto& p : v.vertices()) pts.push_back(scale * p + shift);
                return PointHull(std::move(pts));
            }
        },
        u);
}

/// Certified bounds [lower, upper] on dist(x, conv(vertices)), by Gilbert's
/// minimization of the squared distance over convex combinations. Stops early
/// once lower > stop_above or upper <= stop_below.
struct DistanceBounds {
    double lower = 0.0;
    double upper = 0.0;
};

inline DistanceBounds distance_to_hull(std::span<const Point> vertices, const Point& x,
                                       double stop_above = std::numeric_limits<double>::infinity(),
                                       double stop_below = -1.0, int max_iterations = 200)
{
    Point y = vertices.front();
    double best = distance(y, x);
    for (const auto& v : vertices) {
        const double dv = distance(v, x);
        if (dv < best) {
            best = dv;
            y = v;
        }
    }
    DistanceBounds out{0.0, best};
    for (int it = 0; it < max_iterations; ++it) {
        const Point g = y - x;
        const double gn = norm(g);
        if (gn == 0.0) return {0.0, 0.0};
        const Point* s = &vertices.front();
        double smin = dot(*s, g);
        for (const auto& v : vertices) {
            const double sv = dot(v, g);
            if (sv < smin) {
                smin = sv;
                s = &v;
            }
        }
        // Every hull point p satisfies <p - x, g/|g|> >= (smin - <x,g>)/|g|.
        out.lower = std::max(out.lower, (smin - dot(x, g)) / gn);
        out.upper = std::min(out.upper, gn);
        if (out.lower > stop_above || out.upper <= stop_below) break;
        if (out.upper - out.lower <= 1e-15 * std::max(1.0, out.upper)) break;
        const Point dir = *s - y;
        const double dd = dot(dir, dir);
        if (dd == 0.0) break;
        const double lambda = std::clamp(-dot(g, dir) / dd, 0.0, 1.0);
        if (lambda == 0.0) break;
        y += lambda * dir;
    }
    return out;
}

namespace detail {

inline Relation classify(const Ball& u, const Ball& c)
{
    if (u.center == c.center) {
        // No arithmetic involved: containment of concentric balls is exact.
        return c.radius <= u.radius ? Relation::Inside : Relation::Straddle;
    }
    const double dist = distance(u.center, c.center);
    if (dist + c.radius <= u.radius - kGeometrySlack) return Relation::Inside;
    if (dist > u.radius + c.radius + kGeometrySlack) return Relation::Outside;
    return Relation::Straddle;
}

inline Relation classify(const AxisBox& u, const Ball& c)
{
    bool inside = true;
    double excess2 = 0.0;
    for (std::size_t k = 0; k < u.center.dim(); ++k) {
        const double off = std::abs(c.center[k] - u.center[k]);
        if (off + c.radius > u.half_width - kGeometrySlack) inside = false;
        const double e = off - u.half_width;
        if (e > 0.0) excess2 += e * e;
    }
    if (inside) return Relation::Inside;
    if (std::sqrt(excess2) > c.radius + kGeometrySlack) return Relation::Outside;
    return Relation::Straddle;
}

inline Relation classify(const PointHull& u, const Ball& c)
{
    const auto& facets = u.facets();
    if (!facets.empty()) {
        double worst = -std::numeric_limits<double>::infinity();
        bool inside = true;
        for (const auto& f : facets) {
            const double v = dot(f.normal, c.center) - f.offset;
            worst = std::max(worst, v);
            if (v + c.radius > -kGeometrySlack) inside = false;
        }
        if (inside) return Relation::Inside;
        if (worst > c.radius + kGeometrySlack) return Relation::Outside;
        if (worst <= 0.0) return Relation::Straddle; // center lies in the hull
    }
    const double threshold = c.radius + kGeometrySlack;
    const auto b = distance_to_hull(u.vertices(), c.center, threshold, threshold);
    return b.lower > threshold ? Relation::Outside : Relation::Straddle;
}

} // namespace detail

/// Conservative relation of the closed ball c to the candidate u.
inline Relation classify_ball(const ConvexCandidate& u, const Ball& c)
{
    return std::visit([&](const auto& v) { return detail::classify(v, c); }, u);
}

/// Points of the lattice Z^d/(2n) in the closed ball B(0, 1/2): b_1 = (-1/2,0,...),
/// b_2 = (1/2,0,...), then the rest in lexicographic order.
inline std::vector<Point> lattice_points(int d, int n)
{
    if (d < 1 || static_cast<std::size_t>(d) > kMaxDimension) throw std::invalid_argument("lattice_points: bad dimension");
    if (n < 1) throw std::invalid_argument("lattice_points: n must be positive");
    const long long nn = static_cast<long long>(n) * n;
    const double scale = 2.0 * n;
    std::vector<Point> out;
    std::vector<long long> k(static_cast<std::size_t>(d), -n);
    Point first(static_cast<std::size_t>(d));
    Point second(static_cast<std::size_t>(d));
    first[0] = -0.5;
    second[0] = 0.5;
    out.push_back(first);
    out.push_back(second);
    while (true) {
        long long r2 = 0;
        for (auto x : k) r2 += x * x;
        if (r2 <= nn) {
            const bool is_b1 = k[0] == -n;
            const bool is_b2 = k[0] == n;
            if (!is_b1 && !is_b2) {
                Point p(static_cast<std::size_t>(d));
                for (int j = 0; j < d; ++j) p[j] = static_cast<double>(k[j]) / scale;
                out.push_back(p);
            }
        }
        int j = d - 1;
        while (j >= 0 && k[j] == n) k[j--] = -n;
        if (j < 0) break;
        ++k[j];
    }
    return out;
}

namespace detail {

inline long long isqrt(long long v)
{
    if (v < 0) return -1;
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

inline long long count_ball(int d, long long r2)
{
    if (r2 < 0) return 0;
    const long long m = isqrt(r2);
    if (d == 1) return 2 * m + 1;
    long long total = 0;
    for (long long x = -m; x <= m; ++x) total += count_ball(d - 1, r2 - x * x);
    return total;
}

} // namespace detail

/// #(B(0,1/2) ∩ Z^d/(2n)) without materializing the points.
inline long long lattice_count(int d, int n)
{
    if (d < 1 || n < 1) throw std::invalid_argument("lattice_count: d and n must be positive");
    return detail::count_ball(d, static_cast<long long>(n) * n);
}

/// Lebesgue measure of the unit ball in R^d.
inline double unit_ball_volume(int d)
{
    if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be positive");
    // omega_d = 2 pi / d * omega_{d-2}, omega_0 = 1, omega_1 = 2.
    double w = (d % 2 == 0) ? 1.0 : 2.0;
    for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) w *= 2.0 * std::numbers::pi / k;
    return w;
}

/// Largest d-volume of a set with the given diameter.
inline double isodiametric_bound(double diam, int d)
{
    if (diam < 0.0) throw std::invalid_argument("isodiametric_bound: negative diameter");
    return unit_ball_volume(d) * std::pow(0.5 * diam, d);
}

} // namespace hforge
