#pragma once

// Iterated function systems of contracting homotheties x -> r x + a.

#include <hforge/errors.hpp>
#include <hforge/geometry.hpp>
#include <hforge/interval.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hforge {

struct Similitude {
    double ratio = 0.5;
    Point translation;

    [[nodiscard]] Point apply(const Point& x) const { return ratio * x + translation; }
    [[nodiscard]] Point fixed_point() const { return (1.0 / (1.0 - ratio)) * translation; }
};

class IFS {
public:
    IFS(std::size_t dimension, std::vector<Similitude> maps) : dim_(dimension), maps_(std::move(maps))
    {
        if (dim_ < 1 || dim_ > kMaxDimension) throw std::invalid_argument("IFS: unsupported dimension");
        if (maps_.size() < 2) throw std::invalid_argument("IFS: at least two maps are required");
        for (const auto& m : maps_) {
            if (!(m.ratio > 0.0 && m.ratio < 1.0)) throw std::invalid_argument("IFS: ratio outside (0,1)");
            if (m.translation.dim() != dim_) throw std::invalid_argument("IFS: translation has wrong dimension");
            if (!m.translation.finite()) throw std::invalid_argument("IFS: non-finite translation");
        }
    }

    [[nodiscard]] std::size_t dimension() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<Similitude>& maps() const noexcept { return maps_; }
    [[nodiscard]] std::size_t size() const noexcept { return maps_.size(); }
    const Similitude& operator[](std::size_t i) const noexcept { return maps_[i]; }

    [[nodiscard]] bool equal_ratios() const noexcept
    {
        return std::all_of(maps_.begin(), maps_.end(), [&](const Similitude& m) { return m.ratio == maps_[0].ratio; });
    }

    [[nodiscard]] double max_ratio() const noexcept
    {
        double r = 0.0;
        for (const auto& m : maps_) r = std::max(r, m.ratio);
        return r;
    }

    /// The conjugate system x -> lambda * phi(x / lambda); its attractor is lambda * K.
    [[nodiscard]] IFS conjugated(double lambda) const
    {
        std::vector<Similitude> maps = maps_;
        for (auto& m : maps) m.translation *= lambda;
        return IFS(dim_, std::move(maps));
    }

private:
    std::size_t dim_;
    std::vector<Similitude> maps_;
};

/// The s > 0 with sum_i r_i^s = 1.
inline double similarity_dimension(const IFS& f)
{
    if (f.equal_ratios()) return std::log(static_cast<double>(f.size())) / -std::log(f[0].ratio);
    auto g = [&](double s) {
        double acc = 0.0;
        for (const auto& m : f.maps()) acc += std::pow(m.ratio, s);
        return acc - 1.0;
    };
    double lo = 0.0;
    double hi = static_cast<double>(f.dimension());
    while (g(hi) >= 0.0) hi *= 2.0;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Natural weights r_i^s normalized to sum to one (exactly 1/l for equal ratios).
inline std::vector<double> natural_weights(const IFS& f, double s)
{
    std::vector<double> w(f.size());
    if (f.equal_ratios()) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(f.size()));
        return w;
    }
    for (std::size_t i = 0; i < f.size(); ++i) w[i] = std::pow(f[i].ratio, s);
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= total;
    return w;
}

/// A ball mapped into itself by every map. Its center is the fixed point of the
/// barycentric map x -> (1/l) sum_i phi_i(x), i.e. sum_i a_i / sum_i (1 - r_i).
inline Ball invariant_ball(const IFS& f)
{
    Point num(f.dimension());
    double den = 0.0;
    for (const auto& m : f.maps()) {
        num += m.translation;
        den += 1.0 - m.ratio;
    }
    const Point center = (1.0 / den) * num;
    double radius = 0.0;
    for (const auto& m : f.maps()) radius = std::max(radius, distance(m.apply(center), center) / (1.0 - m.ratio));
    return {center, radius + kGeometrySlack};
}

/// Composition phi_w = phi_{i_1} o ... o phi_{i_k}, i.e. x -> scale * x + shift.
struct CylinderMap {
    double scale = 1.0;
    Point shift;

    static CylinderMap identity(std::size_t dim) { return {1.0, Point(dim)}; }

    [[nodiscard]] Point apply(const Point& x) const { return scale * x + shift; }

    /// phi_w o phi_i
    [[nodiscard]] CylinderMap then(const Similitude& m) const { return {scale * m.ratio, scale * m.translation + shift}; }

    [[nodiscard]] Ball image(const Ball& root) const { return {apply(root.center), scale * root.radius}; }
};

struct CylinderWord {
    std::vector<std::uint32_t> indices;
    CylinderMap map;
    Ball ball;
    double weight = 1.0;

    [[nodiscard]] double ratio() const noexcept { return map.scale; }
    [[nodiscard]] const Point& translation() const noexcept { return map.shift; }
};

struct CylinderOptions {
    std::size_t node_cap = 50'000'000;
};

/// The minimal prefix-free set of words whose bounding balls have diameter <= max_diam,
/// in lexicographic word order.
inline std::vector<CylinderWord> cylinders(const IFS& f, double max_diam, CylinderOptions opts = {})
{
    if (!(max_diam > 0.0)) throw std::invalid_argument("cylinders: max_diam must be positive");
    const Ball root = invariant_ball(f);
    const auto weights = natural_weights(f, similarity_dimension(f));
    std::vector<CylinderWord> out;
    std::vector<CylinderWord> stack;
    stack.push_back({{}, CylinderMap::identity(f.dimension()), root, 1.0});
    std::size_t nodes = 1;
    while (!stack.empty()) {
        CylinderWord w = std::move(stack.back());
        stack.pop_back();
        if (w.ball.diameter() <= max_diam) {
            out.push_back(std::move(w));
            continue;
        }
        nodes += f.size();
        if (nodes > opts.node_cap) throw BudgetExceeded("cylinders: node cap exceeded");
        for (std::size_t i = f.size(); i-- > 0;) {
            CylinderWord c;
            c.indices = w.indices;
            c.indices.push_back(static_cast<std::uint32_t>(i));
            c.map = w.map.then(f[i]);
            c.ball = c.map.image(root);
            c.weight = w.weight * weights[i];
            stack.push_back(std::move(c));
        }
    }
    return out;
}

struct SscOptions {
    int depth_cap = 8;
};

/// Certified(delta) carries a lower bound on min_{i != j} dist(phi_i(K), phi_j(K)).
struct SscResult {
    bool certified = false;
    double delta = 0.0;
};

namespace detail {

struct SscNode {
    CylinderMap map;
    Ball ball;
    int depth = 0;
};

// Lower bound on dist(K_u, K_v) from bounding balls, refining the larger ball
// while the pair is not separated. nullopt when unresolved at the depth cap.
inline std::optional<double> separation(const IFS& f, const Ball& root, const SscNode& u, const SscNode& v,
                                        int depth_cap)
{
    const double gap = distance(u.ball.center, v.ball.center) - u.ball.radius - v.ball.radius;
    if (gap > kGeometrySlack) return gap - kGeometrySlack;
    const bool split_u = u.ball.radius >= v.ball.radius;
    const SscNode& big = split_u ? u : v;
    const SscNode& other = split_u ? v : u;
    if (big.depth >= depth_cap) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : f.maps()) {
        SscNode child{big.map.then(m), {}, big.depth + 1};
        child.ball = child.map.image(root);
        const auto g = separation(f, root, child, other, depth_cap);
        if (!g) return std::nullopt;
        best = std::min(best, *g);
    }
    return best;
}

} // namespace detail

inline SscResult check_ssc(const IFS& f, SscOptions opts = {})
{
    const Ball root = invariant_ball(f);
    std::vector<detail::SscNode> first;
    first.reserve(f.size());
    double rmax = 0.0;
    for (const auto& m : f.maps()) {
        detail::SscNode n{CylinderMap::identity(f.dimension()).then(m), {}, 1};
        n.ball = n.map.image(root);
        rmax = std::max(rmax, n.ball.radius);
        first.push_back(n);
    }
    std::sort(first.begin(), first.end(),
              [](const auto& a, const auto& b) { return lex_less(a.ball.center, b.ball.center); });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < first.size(); ++i) {
        for (std::size_t j = i + 1; j < first.size(); ++j) {
            if (first[j].ball.center[0] - first[i].ball.center[0] - 2.0 * rmax >= best) break;
            const auto g = detail::separation(f, root, first[i], first[j], opts.depth_cap);
            if (!g) return {false, 0.0};
            best = std::min(best, *g);
        }
    }
    return {true, best};
}

struct DiameterOptions {
    /// Stop once the current maximal pair consists of cylinders of diameter <= max_diam.
    double max_diam = 1e-4;
    std::size_t node_cap = 2'000'000;
    std::size_t pair_cap = 20'000'000;
};

/// Certified enclosure of |K|. The lower end is the largest distance found
/// between fixed points of cylinder maps (these lie in K); the upper end comes
/// from branch and bound over pairs of cylinder bounding balls, so the width is
/// at most 2 * max_diam (plus slack).
inline Interval diameter_interval(const IFS& f, DiameterOptions opts = {})
{
    const Ball root = invariant_ball(f);
    struct Node {
        CylinderMap map;
        Ball ball;
        Point anchor;
    };
    auto make = [&](const CylinderMap& m) {
        Node n{m, m.image(root), Point(f.dimension())};
        n.anchor = m.scale < 1.0 ? (1.0 / (1.0 - m.scale)) * m.shift : f[0].fixed_point();
        return n;
    };
    std::vector<Node> nodes;
    nodes.push_back(make(CylinderMap::identity(f.dimension())));

    double lower = 0.0;
    if (f.size() * f.size() <= 100'000'000ULL) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            for (std::size_t j = i + 1; j < f.size(); ++j) {
                lower = std::max(lower, distance(f[i].fixed_point(), f[j].fixed_point()));
            }
        }
    }

    struct Pair {
        double ub;
        std::size_t u;
        std::size_t v;
        std::uint64_t seq;
    };
    auto cmp = [](const Pair& a, const Pair& b) { return a.ub != b.ub ? a.ub < b.ub : a.seq > b.seq; };
    std::priority_queue<Pair, std::vector<Pair>, decltype(cmp)> heap(cmp);
    std::uint64_t seq = 0;
    auto push = [&](std::size_t u, std::size_t v) {
        if (seq >= opts.pair_cap) throw BudgetExceeded("diameter_interval: pair cap exceeded");
        const Node& a = nodes[u];
        const Node& b = nodes[v];
        lower = std::max(lower, distance(a.anchor, b.anchor));
        const double ub = distance(a.ball.center, b.ball.center) + a.ball.radius + b.ball.radius;
        if (ub > lower) heap.push({ub, u, v, seq++});
    };
    push(0, 0);
    std::vector<std::size_t> children(f.size());
    double upper = lower;
    while (!heap.empty()) {
        const Pair top = heap.top();
        heap.pop();
        if (top.ub <= lower) break;
        const Ball a = nodes[top.u].ball;
        const Ball b = nodes[top.v].ball;
        if (a.diameter() <= opts.max_diam && b.diameter() <= opts.max_diam) {
            upper = top.ub;
            break;
        }
        if (nodes.size() + f.size() > opts.node_cap) throw BudgetExceeded("diameter_interval: node cap exceeded");
        const bool same = top.u == top.v;
        const std::size_t split = (same || a.radius >= b.radius) ? top.u : top.v;
        const std::size_t keep = split == top.u ? top.v : top.u;
        const CylinderMap base = nodes[split].map;
        for (std::size_t i = 0; i < f.size(); ++i) {
            children[i] = nodes.size();
            nodes.push_back(make(base.then(f[i])));
        }
        if (same) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                for (std::size_t j = i; j < f.size(); ++j) push(children[i], children[j]);
            }
        } else {
            for (std::size_t i = 0; i < f.size(); ++i) push(children[i], keep);
        }
    }
    upper = std::max(upper, lower);
    return {lower - kGeometrySlack, upper + kGeometrySlack};
}

} // namespace hforge
