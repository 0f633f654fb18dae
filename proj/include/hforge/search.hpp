#pragma once

// Sweep t in [0,1] and bisect for H^s(K_t) = c. Only continuity of t -> H^s(K_t)
// is used; no monotonicity is assumed.

#include <hforge/construction.hpp>
#include <hforge/density.hpp>
#include <hforge/errors.hpp>
#include <hforge/estimate.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hforge {

struct SweepPoint {
    double t = 0.0;
    HausdorffEstimate estimate;
};

/// Where c sits relative to an estimate interval.
enum class Side { Below, Contains, Above };

/// Above: the whole interval is above c. Below: the whole interval is below c.
inline Side side_of(const HausdorffEstimate& e, double c) noexcept
{
    if (e.lower > c) return Side::Above;
    if (e.upper < c) return Side::Below;
    return Side::Contains;
}

inline const char* to_string(Side s) noexcept
{
    switch (s) {
    case Side::Below: return "below";
    case Side::Contains: return "contains";
    case Side::Above: return "above";
    }
    return "?";
}

/// Worker count: HAUSDORFF_FORGE_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned thread_cap()
{
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HAUSDORFF_FORGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
    }
    return hw;
}

/// Evaluates est(t) at grid+1 equispaced points, in parallel; the result order
/// never depends on scheduling.
template <class Estimator>
std::vector<SweepPoint> sweep_with(Estimator&& est, int grid, unsigned threads = 0)
{
    if (grid < 2) throw std::invalid_argument("sweep: grid must be at least 2");
    const std::size_t count = static_cast<std::size_t>(grid) + 1;
    std::vector<SweepPoint> out(count);
    std::vector<std::exception_ptr> errors(count);
    for (std::size_t i = 0; i < count; ++i) out[i].t = i + 1 == count ? 1.0 : static_cast<double>(i) / grid;

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i].estimate = est(out[i].t);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = std::min<unsigned>(threads == 0 ? thread_cap() : threads, static_cast<unsigned>(count));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

struct Bracket {
    SweepPoint lo; ///< the end with the smaller t
    SweepPoint hi;

    [[nodiscard]] double width() const noexcept { return hi.t - lo.t; }
};

/// First adjacent pair certified on opposite sides of c, or, failing that, a
/// zero-width bracket at the first grid point whose interval contains c.
inline std::optional<Bracket> find_bracket(const std::vector<SweepPoint>& pts, double c)
{
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Side a = side_of(pts[i].estimate, c);
        const Side b = side_of(pts[i + 1].estimate, c);
        if (a != Side::Contains && b != Side::Contains && a != b) return Bracket{pts[i], pts[i + 1]};
    }
    for (const auto& p : pts) {
        if (side_of(p.estimate, c) == Side::Contains) return Bracket{p, p};
    }
    return std::nullopt;
}

/// Thrown when bisection runs out of budget; carries the bracket reached.
class SearchInconclusive : public Inconclusive {
public:
    SearchInconclusive(const std::string& what, Bracket best, std::size_t evaluations)
        : Inconclusive(what), best_(std::move(best)), evaluations_(evaluations)
    {}
    [[nodiscard]] const Bracket& best() const noexcept { return best_; }
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }

private:
    Bracket best_;
    std::size_t evaluations_;
};

struct SearchResult {
    double t0 = 0.0;
    HausdorffEstimate estimate; ///< rigor flags are the weakest over every estimate consulted
    Bracket bracket;
    std::size_t evaluations = 0;
};

/// Bisection on a bracket. Midpoints certified on the t_lo side replace t_lo,
/// those on the other side replace t_hi, and midpoints whose interval contains
/// c become the current answer and also replace t_hi. Stops once the bracket is
/// at most tol_t wide and an answer containing c is in hand.
template <class Estimator>
SearchResult find_t(Estimator&& est, Bracket bracket, double c, double tol_t, std::size_t budget,
                    std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt)
{
    if (!(tol_t > 0.0)) throw std::invalid_argument("find_t: tol_t must be positive");
    bool lower_rig = bracket.lo.estimate.lower_rigorous && bracket.hi.estimate.lower_rigorous;
    bool upper_rig = bracket.lo.estimate.upper_rigorous && bracket.hi.estimate.upper_rigorous;

    std::optional<SweepPoint> answer;
    for (const SweepPoint* p : {&bracket.lo, &bracket.hi}) {
        if (side_of(p->estimate, c) == Side::Contains) {
            answer = *p;
            break;
        }
    }
    const Side lo_side = side_of(bracket.lo.estimate, c);

    std::size_t evals = 0;
    while (!(answer && bracket.width() <= tol_t)) {
        if (evals >= budget) {
            throw SearchInconclusive("find_t: budget exhausted after " + std::to_string(evals) + " evaluations",
                                     bracket, evals);
        }
        if (deadline && std::chrono::steady_clock::now() >= *deadline) {
            throw SearchInconclusive("find_t: time cap reached", bracket, evals);
        }
        const double mid = bracket.lo.t + 0.5 * (bracket.hi.t - bracket.lo.t);
        if (!(mid > bracket.lo.t && mid < bracket.hi.t)) {
            throw SearchInconclusive("find_t: bracket cannot be split further", bracket, evals);
        }
        SweepPoint m{mid, est(mid)};
        ++evals;
        lower_rig = lower_rig && m.estimate.lower_rigorous;
        upper_rig = upper_rig && m.estimate.upper_rigorous;
        const Side side = side_of(m.estimate, c);
        if (side == Side::Contains) {
            answer = m;
            bracket.hi = m;
        } else if (side == lo_side) {
            bracket.lo = m;
        } else {
            bracket.hi = m;
        }
    }
    SearchResult res{answer->t, answer->estimate, bracket, evals};
    res.estimate.lower_rigorous = res.estimate.lower_rigorous && lower_rig;
    res.estimate.upper_rigorous = res.estimate.upper_rigorous && upper_rig;
    return res;
}

struct SearchOptions {
    EstimateOptions estimate;
    double tol_t = 1.0 / 64.0;
    std::size_t budget = 64;
    unsigned threads = 0;     ///< 0 means thread_cap()
    double time_cap = 0.0;    ///< seconds of bisection; 0 means none
};

/// The estimate for K_t. At t = 0 the analytic bound joins the lower side; with
/// a forced n every flag is dropped.
inline HausdorffEstimate estimate_at(const ConstructionParams& p, double t, const EstimateOptions& opts = {})
{
    HausdorffEstimate e = estimate_hausdorff(ifs_at(p, t), opts).estimate;
    if (t == 0.0) {
        const double k0 = certified_k0_bound(p);
        // a certified bound beats a larger heuristic one
        if (k0 > e.lower || !e.lower_rigorous) {
            e.lower = std::min(k0, e.upper);
            e.lower_rigorous = k0 <= e.upper;
        }
    }
    if (p.forced) {
        e.lower_rigorous = false;
        e.upper_rigorous = false;
    }
    return e;
}

inline void require_target(const ConstructionParams& p, double c)
{
    if (!(c > p.eps && c < 1.0 - p.eps)) {
        throw std::invalid_argument("c must lie in (eps, 1 - eps)");
    }
}

inline std::vector<SweepPoint> sweep(const ConstructionParams& p, double c, int grid, const SearchOptions& opts = {})
{
    require_target(p, c);
    return sweep_with([&](double t) { return estimate_at(p, t, opts.estimate); }, grid, opts.threads);
}

inline Bracket require_bracket(const std::vector<SweepPoint>& pts, double c)
{
    auto b = find_bracket(pts, c);
    if (!b) throw Inconclusive("sweep: no grid pair straddles c");
    return *b;
}

/// Sweep, bracket and bisect.
inline SearchResult find_t(const ConstructionParams& p, double c, int grid, const SearchOptions& opts = {})
{
    const auto pts = sweep(p, c, grid, opts);
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (opts.time_cap > 0.0) {
        deadline = std::chrono::steady_clock::now()
                   + std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(opts.time_cap));
    }
    return find_t([&](double t) { return estimate_at(p, t, opts.estimate); }, require_bracket(pts, c), c, opts.tol_t,
                  opts.budget, deadline);
}

} // namespace hforge
