#pragma once

// Convex-density bounds on H^s(K):
//
//   1 / H^s(K) = max { mu(U) / |U|^s : U compact convex, |U| >= delta }.
//
// Any candidate U with a certified lower bound on mu(U) gives an upper bound on
// H^s(K). A certified upper bound on the maximum over *all* convex U gives a
// lower bound; that is only available in d = 1 (every convex set is an
// interval) and, for the K_0 construction, through the analytic bound at the
// bottom of this file.

#include <hforge/errors.hpp>
#include <hforge/geometry.hpp>
#include <hforge/ifs.hpp>
#include <hforge/interval.hpp>
#include <hforge/measure.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace hforge {

struct DensityRecord {
    ConvexCandidate candidate;
    MeasureInterval mu;
    double diam = 0.0;
    Interval ratio; ///< [mu.lo / diam^s, mu.hi / diam^s]
};

struct HausdorffEstimate {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool lower_rigorous = false;
    bool upper_rigorous = false;
    DensityRecord witness; ///< upper == witness.diam^s / witness.mu.lo

    [[nodiscard]] double width() const noexcept { return upper - lower; }
    [[nodiscard]] bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

struct UpperBound {
    double value = std::numeric_limits<double>::infinity();
    bool rigorous = false;
    DensityRecord witness;
};

struct LowerBound {
    double value = 0.0;
    bool rigorous = false;
};

/// The diameter is rounded outward by a few ulps so that diam^s / mu.lo stays
/// an upper bound after floating-point evaluation.
inline DensityRecord make_record(ConvexCandidate u, MeasureInterval mu, double s)
{
    const double diam = diameter(u) * (1.0 + 1e-15);
    const double scale = std::pow(diam, s);
    return {std::move(u), mu, diam, {mu.lo / scale, mu.hi / scale}};
}

/// mu(U)/|U|^s with a certified enclosure; propagates MeasureBudgetExceeded.
inline DensityRecord ratio_of(const ConvexCandidate& u, const NaturalMeasure& m, double tol,
                              MeasureOptions opts = {})
{
    if (!(diameter(u) > 0.0)) throw std::invalid_argument("ratio_of: candidate has zero diameter");
    return make_record(u, measure_of(u, m, tol, opts), m.s());
}

/// The upper bound on H^s implied by a record: diam^s / mu.lo.
inline double upper_from(const DensityRecord& r, double s)
{
    return r.mu.lo > 0.0 ? std::pow(r.diam, s) / r.mu.lo : std::numeric_limits<double>::infinity();
}

/// Strict "better witness" order: larger certified ratio, then smaller
/// diameter, then lexicographically smaller center.
inline bool better_record(const DensityRecord& a, const DensityRecord& b)
{
    if (a.ratio.lo != b.ratio.lo) return a.ratio.lo > b.ratio.lo;
    if (a.diam != b.diam) return a.diam < b.diam;
    return lex_less(center_of(a.candidate), center_of(b.candidate));
}

struct CandidateBudget {
    std::size_t evaluations = 4000; ///< measure_of calls; 0 keeps only the invariant ball
    double tol = 1e-4;              ///< inner-loop measure tolerance
    double verify_tol = 1e-6;       ///< re-evaluation of the leading candidates
    std::size_t node_cap = 1'000'000;
    std::size_t max_centers = 64;
    int hill_climb_rounds = 20;
    std::size_t hill_climb_starts = 4;
    std::size_t run_cylinder_cap = 2048; ///< d = 1 run hulls
    std::uint64_t seed = 0;
};

struct CandidateSweep {
    DensityRecord best;
    double max_ratio_hi = 0.0; ///< over every measured candidate
    std::size_t evaluations = 0;
};

namespace detail {

// Depth-k cylinder intervals of a d = 1 system, sorted by center.
struct Segment {
    double center;
    double radius;
    double weight;
};

inline std::vector<Segment> segments_1d(const NaturalMeasure& m, int depth, std::size_t cap)
{
    const auto& maps = m.ifs().maps();
    std::vector<CylinderMap> level{CylinderMap::identity(1)};
    std::vector<double> w{1.0};
    for (int k = 0; k < depth; ++k) {
        if (level.size() * maps.size() > cap) throw BudgetExceeded("fattening: cylinder cap exceeded");
        std::vector<CylinderMap> next;
        std::vector<double> nw;
        next.reserve(level.size() * maps.size());
        nw.reserve(level.size() * maps.size());
        for (std::size_t a = 0; a < level.size(); ++a) {
            for (std::size_t i = 0; i < maps.size(); ++i) {
                next.push_back(level[a].then(maps[i]));
                nw.push_back(w[a] * m.weights()[i]);
            }
        }
        level = std::move(next);
        w = std::move(nw);
    }
    std::vector<Segment> out;
    out.reserve(level.size());
    for (std::size_t a = 0; a < level.size(); ++a) {
        const Ball b = level[a].image(m.root());
        out.push_back({b.center[0], b.radius, w[a]});
    }
    std::sort(out.begin(), out.end(), [](const Segment& x, const Segment& y) {
        return x.center != y.center ? x.center < y.center : x.radius < y.radius;
    });
    return out;
}

inline int auto_depth(std::size_t maps, std::size_t cap)
{
    int k = 1;
    std::size_t count = maps;
    while (count * maps <= cap) {
        count *= maps;
        ++k;
    }
    return k;
}

} // namespace detail

/// Certified lower bound on H^s(K) for d = 1. Every interval U with |U| >= delta
/// meets a first and a last depth-k cylinder i <= j; then mu(U) <= W(i..j) and
/// |U| >= c_j - c_i - R_i - R_j, so sup mu(U)/|U|^s is bounded by the largest
/// W(i..j) / max(c_j - c_i - R_i - R_j, delta)^s.
inline LowerBound rigorous_lower_1d(const NaturalMeasure& m, double delta, int depth,
                                    std::uint64_t pair_cap = 100'000'000, std::size_t cylinder_cap = 50'000'000)
{
    if (m.dimension() != 1) throw std::invalid_argument("rigorous_lower_1d: requires d = 1");
    if (!(delta > 0.0)) throw std::invalid_argument("rigorous_lower_1d: delta must be positive");
    if (depth < 0) throw std::invalid_argument("rigorous_lower_1d: negative depth");
    const auto seg = detail::segments_1d(m, depth, cylinder_cap);
    const std::uint64_t count = seg.size();
    if (count * (count + 1) / 2 > pair_cap) throw BudgetExceeded("rigorous_lower_1d: run count exceeds pair cap");
    const double s = m.s();
    double worst = 0.0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        double mass = 0.0;
        for (std::size_t j = i; j < seg.size(); ++j) {
            mass += seg[j].weight;
            const double sep = seg[j].center - seg[i].center - seg[i].radius - seg[j].radius;
            worst = std::max(worst, mass / std::pow(std::max(sep, delta), s));
        }
    }
    // Outward by a few ulps for the rounding in the weights and powers.
    return {(1.0 / worst) * (1.0 - 1e-15), true};
}

namespace detail {

// Best contiguous run hull among depth-k cylinders (d = 1), with the exact
// cylinder mass as the certified lower end of mu.
inline std::optional<DensityRecord> best_run_hull(const NaturalMeasure& m, std::size_t cylinder_cap)
{
    const int depth = auto_depth(m.ifs().size(), cylinder_cap);
    const auto seg = segments_1d(m, depth, std::max(cylinder_cap, m.ifs().size()));
    const double s = m.s();
    std::optional<DensityRecord> best;
    double best_ratio = -1.0;
    double best_span = 0.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < seg.size(); ++i) {
        double mass = 0.0;
        const double left = seg[i].center - seg[i].radius;
        double right = left;
        for (std::size_t j = i; j < seg.size(); ++j) {
            mass += seg[j].weight;
            right = std::max(right, seg[j].center + seg[j].radius);
            const double span = right - left;
            if (!(span > 0.0)) continue;
            const double ratio = mass / std::pow(span, s);
            if (ratio > best_ratio || (ratio == best_ratio && span < best_span)) {
                best_ratio = ratio;
                best_span = span;
                bi = i;
                bj = j;
            }
        }
    }
    if (best_ratio <= 0.0) return best;
    double left = seg[bi].center - seg[bi].radius;
    double right = left;
    double lo = 0.0;
    for (std::size_t j = bi; j <= bj; ++j) {
        lo += seg[j].weight;
        left = std::min(left, seg[j].center - seg[j].radius);
        right = std::max(right, seg[j].center + seg[j].radius);
    }
    // endpoints carry rounding error on the scale of their magnitude, which
    // can dwarf the span of a deep run
    const double pad = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(left), std::abs(right));
    left -= pad;
    right += pad;
    double hi = 0.0;
    for (const auto& g : seg) {
        if (g.center + g.radius >= left && g.center - g.radius <= right) hi += g.weight;
    }
    ConvexCandidate hull = PointHull({Point{left}, Point{right}});
    return make_record(std::move(hull), {std::min(lo, 1.0), std::clamp(hi, std::min(lo, 1.0), 1.0)}, s);
}

// Convex hull of the fixed points of the maps. It is mapped into itself by every
// phi_i (phi_i(x) is a convex combination of x and the fixed point of phi_i) and
// its vertices lie in K, so it equals conv(K): mu = 1 exactly and its diameter
// is |K|. nullopt when the vertex set is too large to handle.
inline std::optional<DensityRecord> fixed_point_hull(const NaturalMeasure& m, std::size_t max_vertices = 4096)
{
    const auto& maps = m.ifs().maps();
    const std::size_t d = m.dimension();
    std::vector<Point> pts;
    pts.reserve(maps.size());
    for (const auto& f : maps) pts.push_back(f.fixed_point());
    std::vector<Point> verts;
    if (d == 1) {
        auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
        verts = {*lo, *hi};
    } else if (d == 2) {
        std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.size() < 3) {
            verts = pts;
        } else {
            std::vector<Point> h(2 * pts.size());
            std::size_t k = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
                h[k++] = pts[i];
            }
            for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
                while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
                h[k++] = pts[i];
            }
            h.resize(k - 1);
            verts = std::move(h);
        }
    } else {
        verts = std::move(pts);
    }
    if (verts.size() > max_vertices) return std::nullopt;
    double mag = 0.0;
    for (const auto& v : verts) mag = std::max(mag, norm(v));
    ConvexCandidate hull = PointHull(std::move(verts));
    if (!(diameter(hull) > 0.0)) return std::nullopt;
    DensityRecord rec = make_record(std::move(hull), {1.0, 1.0}, m.s());
    // fixed points are only known to a few ulps of their magnitude
    rec.diam += 8.0 * std::numeric_limits<double>::epsilon() * mag;
    const double ds = std::pow(rec.diam, m.s());
    rec.ratio = {1.0 / ds, 1.0 / ds};
    return rec;
}

inline std::vector<double> radius_grid(double delta, double reach)
{
    std::vector<double> out;
    const double step = std::pow(2.0, 0.25);
    for (double r = 0.5 * delta; r <= reach && out.size() < 256; r *= step) out.push_back(r);
    if (out.empty()) out.push_back(reach);
    return out;
}

} // namespace detail

/// Searches balls, boxes and cluster hulls for the largest certified
/// mu(U)/|U|^s. The invariant ball is always the first candidate.
inline CandidateSweep sweep_candidates(const NaturalMeasure& m, double delta, double reach,
                                       const CandidateBudget& budget = {})
{
    const std::size_t d = m.dimension();
    const double s = m.s();
    const MeasureOptions mopts{budget.node_cap};
    CandidateSweep out;
    std::vector<DensityRecord> seen;

    auto evaluate = [&](const ConvexCandidate& u, double tol) -> DensityRecord {
        MeasureInterval mu;
        try {
            mu = measure_of(u, m, tol, mopts);
        } catch (const MeasureBudgetExceeded& e) {
            mu = e.best();
        }
        ++out.evaluations;
        DensityRecord rec = make_record(u, mu, s);
        out.max_ratio_hi = std::max(out.max_ratio_hi, rec.ratio.hi);
        return rec;
    };
    auto budget_left = [&] { return out.evaluations < budget.evaluations + 1; };

    out.best = evaluate(m.root(), budget.verify_tol);
    if (budget.evaluations == 0) return out;
    if (auto hull = detail::fixed_point_hull(m)) {
        out.max_ratio_hi = std::max(out.max_ratio_hi, hull->ratio.hi);
        seen.push_back(std::move(*hull));
    }

    // Centers: the root center and first-level cylinder centers.
    std::vector<Point> centers{m.root().center};
    const auto& maps = m.ifs().maps();
    std::vector<Ball> first;
    first.reserve(maps.size());
    for (const auto& f : maps) first.push_back(CylinderMap::identity(d).then(f).image(m.root()));
    std::vector<std::size_t> picks(first.size());
    for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
    if (picks.size() > budget.max_centers) {
        std::mt19937_64 rng(budget.seed);
        std::shuffle(picks.begin(), picks.end(), rng);
        picks.resize(budget.max_centers);
        std::sort(picks.begin(), picks.end());
    }
    for (auto i : picks) centers.push_back(first[i].center);

    const auto radii = detail::radius_grid(delta, reach);
    std::vector<DensityRecord> local; // balls and boxes, for hill climbing
    for (const auto& c : centers) {
        for (double rho : radii) {
            if (!budget_left()) break;
            local.push_back(evaluate(Ball{c, rho}, budget.tol));
            if (d > 1 && budget_left()) local.push_back(evaluate(AxisBox{c, rho}, budget.tol));
        }
    }

    // Cluster hulls. In d = 1 the clusters are contiguous runs of cylinders and
    // their masses are exact, so they are scanned exhaustively.
    if (d == 1) {
        if (auto run = detail::best_run_hull(m, budget.run_cylinder_cap)) seen.push_back(std::move(*run));
    } else {
        for (auto i : picks) {
            std::size_t last_size = 0;
            for (double rho : radii) {
                if (!budget_left()) break;
                std::vector<Point> verts;
                std::size_t members = 0;
                for (const auto& b : first) {
                    if (distance(b.center, first[i].center) > rho) continue;
                    ++members;
                    for (std::size_t k = 0; k < d; ++k) {
                        verts.push_back(b.center + Point::axis(d, k, b.radius));
                        verts.push_back(b.center - Point::axis(d, k, b.radius));
                    }
                }
                if (members < 2 || members == last_size) continue;
                last_size = members;
                if (d >= 3 && verts.size() > 48) break;
                local.push_back(evaluate(PointHull(std::move(verts)), budget.tol));
            }
        }
    }

    // Hill climb from the leading balls/boxes.
    std::sort(local.begin(), local.end(), better_record);
    const std::size_t starts = std::min(budget.hill_climb_starts, local.size());
    for (std::size_t k = 0; k < starts; ++k) {
        DensityRecord cur = local[k];
        if (std::holds_alternative<PointHull>(cur.candidate)) continue;
        double step = 0.25;
        for (int round = 0; round < budget.hill_climb_rounds && budget_left(); ++round) {
            for (int moves = 0; moves < 8 && budget_left(); ++moves) {
                const Point c = center_of(cur.candidate);
                const double rad = std::holds_alternative<Ball>(cur.candidate)
                                       ? std::get<Ball>(cur.candidate).radius
                                       : std::get<AxisBox>(cur.candidate).half_width;
                auto shaped = [&](const Point& cc, double rr) -> ConvexCandidate {
                    if (std::holds_alternative<Ball>(cur.candidate)) return Ball{cc, rr};
                    return AxisBox{cc, rr};
                };
                std::vector<ConvexCandidate> trial{shaped(c, rad * (1.0 + step)), shaped(c, rad * (1.0 - step))};
                for (std::size_t a = 0; a < d; ++a) {
                    trial.push_back(shaped(c + Point::axis(d, a, step * rad), rad));
                    trial.push_back(shaped(c - Point::axis(d, a, step * rad), rad));
                }
                std::optional<DensityRecord> step_best;
                for (const auto& u : trial) {
                    if (!budget_left()) break;
                    if (!(diameter(u) > 0.0)) continue;
                    DensityRecord r = evaluate(u, budget.tol);
                    if (r.ratio.lo > cur.ratio.lo * (1.0 + 1e-12) && (!step_best || better_record(r, *step_best))) {
                        step_best = std::move(r);
                    }
                }
                if (!step_best) break;
                cur = std::move(*step_best);
            }
            step *= 0.5;
        }
        local.push_back(std::move(cur));
    }

    // Re-measure the leaders at the verification tolerance.
    std::sort(local.begin(), local.end(), better_record);
    for (std::size_t k = 0; k < std::min<std::size_t>(3, local.size()); ++k) {
        seen.push_back(evaluate(local[k].candidate, budget.verify_tol));
    }
    for (auto& r : seen) {
        if (better_record(r, out.best)) out.best = std::move(r);
    }
    return out;
}

/// Rigorous upper bound diam^s / mu.lo from the best candidate found.
inline UpperBound optimize_upper(const NaturalMeasure& m, double delta, double reach, const CandidateBudget& budget = {})
{
    auto sweep = sweep_candidates(m, delta, reach, budget);
    const double value = upper_from(sweep.best, m.s());
    return {value, true, std::move(sweep.best)};
}

/// Uncertified lower estimate 1 / max ratio.hi over the same candidate sweep.
inline LowerBound heuristic_lower(const CandidateSweep& sweep)
{
    return {sweep.max_ratio_hi > 0.0 ? 1.0 / sweep.max_ratio_hi : 0.0, false};
}

inline LowerBound heuristic_lower(const NaturalMeasure& m, double delta, double reach, const CandidateBudget& budget = {})
{
    return heuristic_lower(sweep_candidates(m, delta, reach, budget));
}

/// (x + sqrt(d)/n)^d / ((1 - sqrt(d)/(2n))^d x^s), the bound on mu_0(U)/|U|^s
/// for |U| = x in the K_0 construction.
inline double lemma22_ratio_bound(int n, int d, double s, double x)
{
    if (n < 1 || d < 1) throw std::domain_error("lemma22_ratio_bound: n and d must be positive");
    const double lo = 1.0 / (4.0 * n);
    if (!(x >= lo && x <= 1.0)) throw std::domain_error("lemma22_ratio_bound: x outside [1/(4n), 1]");
    const double rd = std::sqrt(static_cast<double>(d));
    const double shrink = 1.0 - rd / (2.0 * n);
    if (!(shrink > 0.0)) throw std::domain_error("lemma22_ratio_bound: requires n > sqrt(d)/2");
    return std::exp(d * std::log(x + rd / n) - d * std::log(shrink) - s * std::log(x));
}

/// Stationary point of x -> lemma22_ratio_bound: d x = s (x + sqrt(d)/n).
inline double lemma22_critical_point(int n, int d, double s)
{
    return s * std::sqrt(static_cast<double>(d)) / ((d - s) * n);
}

/// max over x in [1/(4n), 1] of lemma22_ratio_bound, from the endpoints and the
/// stationary point (the function is smooth with a single critical point).
inline double lemma22_max(int n, int d, double s)
{
    const double lo = 1.0 / (4.0 * n);
    double best = std::max(lemma22_ratio_bound(n, d, s, lo), lemma22_ratio_bound(n, d, s, 1.0));
    const double xs = lemma22_critical_point(n, d, s);
    if (xs > lo && xs < 1.0) best = std::max(best, lemma22_ratio_bound(n, d, s, xs));
    return best;
}

/// Analytic lower bound 1/(1 + eps_hat) on H^s(K_0), eps_hat = lemma22_max - 1.
inline double certified_k0_bound(int n, int d, double s)
{
    return 1.0 / lemma22_max(n, d, s);
}

} // namespace hforge
