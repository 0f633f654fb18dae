#pragma once

// The one-parameter family Phi_t = { x -> r x + a_i(t) } built on the lattice
// F = B(0,1/2) ∩ Z^d/(2n), with
//   a_1(t) = (1-r) b_1,  a_2(t) = (1-r) b_2,  a_i(t) = (1-r) (8nr)^t b_i  (i >= 3).
// At t = 0 the attractor is spread over the whole lattice; at t = 1 all but the
// two antipodal maps are pulled into the small ball V = B(0, (4n+1) r).

#include <hforge/density.hpp>
#include <hforge/errors.hpp>
#include <hforge/geometry.hpp>
#include <hforge/ifs.hpp>
#include <hforge/measure.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hforge {

struct ConstructionParams {
    int d = 1;
    double s = 0.5;
    double eps = 0.5;
    int n = 1;
    std::vector<Point> F; ///< b_1, ..., b_l
    long long ell = 0;
    double r = 0.0;
    bool forced = false; ///< n was supplied by the caller rather than chosen
};

inline void require_feasible(int d, double s, double eps)
{
    if (d < 1 || static_cast<std::size_t>(d) > kMaxDimension) throw std::invalid_argument("dimension d out of range");
    if (!(s > 0.0 && s < d)) throw std::invalid_argument("s must lie in (0, d)");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
}

/// max_{x in [1/(4n),1]} (x + sqrt(d)/n)^d / ((1 - sqrt(d)/(2n))^d x^s) < 1 + eps at this n.
inline bool check_lemma22(int n, int d, double s, double eps)
{
    if (n < 1 || !(n > std::sqrt(static_cast<double>(d)) / 2.0)) return false;
    return lemma22_max(n, d, s) < 1.0 + eps;
}

/// (omega_d (n - sqrt(d)/2)^d - 2) / (8n+4)^s > 1/eps.
inline bool check_eq23(int n, int d, double s, double eps)
{
    const double half = std::sqrt(static_cast<double>(d)) / 2.0;
    if (!(n > half)) throw std::domain_error("check_eq23: requires n > sqrt(d)/2");
    const double count = unit_ball_volume(d) * std::pow(n - half, d) - 2.0;
    return count / std::pow(8.0 * n + 4.0, s) > 1.0 / eps;
}

/// l >= omega_d (n - sqrt(d)/2)^d.
inline bool check_eq24(int n, int d, long long ell)
{
    const double half = std::sqrt(static_cast<double>(d)) / 2.0;
    return static_cast<double>(ell) >= unit_ball_volume(d) * std::pow(n - half, d);
}

/// (8n+4) l^{-1/s} < eps^{1/s}, compared in log space.
inline bool check_eq25(int n, double s, double eps, long long ell)
{
    return std::log(8.0 * n + 4.0) - std::log(static_cast<double>(ell)) / s < std::log(eps) / s;
}

/// Smallest n passing both the ratio bound and the counting inequality.
inline int choose_n(int d, double s, double eps, int cap = 10'000'000)
{
    require_feasible(d, s, eps);
    const int start = static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)) / 2.0)) + 1;
    for (int n = start; n <= cap; ++n) {
        if (!check_eq23(n, d, s, eps) || !check_lemma22(n, d, s, eps)) continue;
        const long long ell = lattice_count(d, n);
        if (!check_eq24(n, d, ell) || !check_eq25(n, s, eps, ell)) {
            throw std::logic_error("choose_n: counting bound failed at n = " + std::to_string(n));
        }
        return n;
    }
    throw IterationCap("choose_n: no admissible n up to " + std::to_string(cap));
}

/// Builds the construction data; `force_n` bypasses choose_n (results are then
/// flagged as non-rigorous by callers).
inline ConstructionParams make_params(int d, double s, double eps, std::optional<int> force_n = std::nullopt,
                                      long long lattice_cap = 5'000'000)
{
    require_feasible(d, s, eps);
    ConstructionParams p;
    p.d = d;
    p.s = s;
    p.eps = eps;
    if (force_n) {
        if (!(*force_n > std::sqrt(static_cast<double>(d)) / 2.0)) {
            throw std::invalid_argument("force-n must exceed sqrt(d)/2");
        }
        p.n = *force_n;
        p.forced = true;
    } else {
        p.n = choose_n(d, s, eps);
    }
    p.ell = lattice_count(d, p.n);
    if (p.ell > lattice_cap) {
        throw BudgetExceeded("make_params: lattice has " + std::to_string(p.ell) + " points, cap is "
                             + std::to_string(lattice_cap));
    }
    p.F = lattice_points(d, p.n);
    p.r = std::exp(-std::log(static_cast<double>(p.ell)) / s);
    return p;
}

/// Phi_t.
inline IFS ifs_at(const ConstructionParams& p, double t)
{
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("ifs_at: t must lie in [0, 1]");
    if (p.F.size() < 2) throw std::invalid_argument("ifs_at: lattice has fewer than two points");
    const double pull = std::exp(t * std::log(8.0 * p.n * p.r));
    std::vector<Similitude> maps;
    maps.reserve(p.F.size());
    for (std::size_t i = 0; i < p.F.size(); ++i) {
        const double k = i < 2 ? 1.0 - p.r : (1.0 - p.r) * pull;
        maps.push_back({p.r, k * p.F[i]});
    }
    return IFS(static_cast<std::size_t>(p.d), std::move(maps));
}

/// The ball V = B(0, (4n+1) r) that swallows maps 3..l at t = 1.
inline Ball inner_ball(const ConstructionParams& p)
{
    return {Point(static_cast<std::size_t>(p.d)), (4.0 * p.n + 1.0) * p.r};
}

/// The cube Q(b_i, 1/(4n)) around a lattice point.
inline AxisBox lattice_cube(const ConstructionParams& p, std::size_t i)
{
    return {p.F.at(i), 1.0 / (4.0 * p.n)};
}

/// Analytic lower bound on H^s(K_0) valid in every dimension.
inline double certified_k0_bound(const ConstructionParams& p) { return certified_k0_bound(p.n, p.d, p.s); }

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
    [[nodiscard]] std::vector<CheckResult> failures() const
    {
        std::vector<CheckResult> out;
        for (const auto& c : checks) {
            if (!c.passed) out.push_back(c);
        }
        return out;
    }
};

namespace detail {

template <class T>
std::string str(const T& v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace detail

/// The parameter-level inequalities (no attractor computations).
inline std::vector<CheckResult> check_params(const ConstructionParams& p)
{
    using detail::str;
    std::vector<CheckResult> out;
    const double half = std::sqrt(static_cast<double>(p.d)) / 2.0;
    out.push_back({"ell == |F|", p.ell == static_cast<long long>(p.F.size()),
                   "ell=" + str(p.ell) + " |F|=" + str(p.F.size())});
    Point b1(static_cast<std::size_t>(p.d));
    Point b2(static_cast<std::size_t>(p.d));
    b1[0] = -0.5;
    b2[0] = 0.5;
    out.push_back({"b_1, b_2 antipodal", p.F.size() >= 2 && p.F[0] == b1 && p.F[1] == b2, ""});
    const double r_expected = std::exp(-std::log(static_cast<double>(p.ell)) / p.s);
    out.push_back({"r == ell^(-1/s)", std::abs(p.r - r_expected) <= 1e-14 * r_expected,
                   "r=" + str(p.r) + " expected=" + str(r_expected)});
    out.push_back({"ratio bound below 1+eps", check_lemma22(p.n, p.d, p.s, p.eps),
                   p.n > half ? "max=" + str(lemma22_max(p.n, p.d, p.s)) + " < " + str(1.0 + p.eps) : "n <= sqrt(d)/2"});
    out.push_back({"lattice mass exceeds 1/eps", p.n > half && check_eq23(p.n, p.d, p.s, p.eps), ""});
    out.push_back({"lattice count lower bound", p.n > half && check_eq24(p.n, p.d, p.ell), ""});
    // stored r, not the one implied by ell: the two disagree on tampered input
    const bool eq25 = p.r > 0.0 && std::log(8.0 * p.n + 4.0) + std::log(p.r) < std::log(p.eps) / p.s;
    out.push_back({"(8n+4) r < eps^(1/s)", eq25,
                   "(8n+4)r=" + str((8.0 * p.n + 4.0) * p.r) + " eps^(1/s)=" + str(std::pow(p.eps, 1.0 / p.s))});
    out.push_back({"8nr < 1", 8.0 * p.n * p.r < 1.0, "8nr=" + str(8.0 * p.n * p.r)});
    return out;
}

struct VerifyOptions {
    std::uint64_t seed = 0;
    double measure_tol = 1e-7;
    double diameter_width = 1e-3;
    std::size_t cube_samples = 10;
};

/// Numerical confirmation of the construction's structural claims at sampled t.
inline VerifyReport verify_prop2(const ConstructionParams& p, const std::vector<double>& t_samples,
                                const VerifyOptions& opts = {})
{
    using detail::str;
    VerifyReport rep;
    rep.checks = check_params(p);
    const double ell = static_cast<double>(p.ell);
    for (double t : t_samples) {
        const std::string at = " @t=" + str(t);
        const IFS f = ifs_at(p, t);
        const auto ssc = check_ssc(f);
        rep.checks.push_back({"SSC" + at, ssc.certified, ssc.certified ? "delta>=" + str(ssc.delta) : "unknown"});
        const double dim = similarity_dimension(f);
        rep.checks.push_back({"dimension == s" + at, std::abs(dim - p.s) <= 1e-10, "dim=" + str(dim)});
        try {
            const auto diam = diameter_interval(f, {opts.diameter_width / 2.5});
            rep.checks.push_back({"diameter == 1" + at, diam.contains(1.0) && diam.width() <= opts.diameter_width,
                                  "[" + str(diam.lo) + ", " + str(diam.hi) + "]"});
        } catch (const BudgetExceeded& e) {
            rep.checks.push_back({"diameter == 1" + at, false, e.what()});
        }
        if (!ssc.certified) continue;
        const NaturalMeasure m(f);
        if (t == 0.0) {
            std::vector<std::size_t> idx(p.F.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            if (idx.size() > std::max<std::size_t>(opts.cube_samples, 64)) {
                std::mt19937_64 rng(opts.seed);
                std::shuffle(idx.begin() + 2, idx.end(), rng);
                idx.resize(std::max<std::size_t>(opts.cube_samples, 2));
            }
            bool ok = true;
            std::string worst;
            for (auto i : idx) {
                const auto mu = measure_of(lattice_cube(p, i), m, opts.measure_tol);
                if (!mu.contains(1.0 / ell) || mu.width() > 1e-6) {
                    ok = false;
                    worst = "i=" + str(i + 1) + " mu=[" + str(mu.lo) + ", " + str(mu.hi) + "]";
                }
            }
            rep.checks.push_back({"cube identity mu(Q(b_i,1/(4n))) = 1/ell" + at, ok,
                                  ok ? str(idx.size()) + " cubes" : worst});
        }
        if (t == 1.0) {
            const Ball v = inner_ball(p);
            const auto mu = measure_of(v, m, opts.measure_tol);
            const double expect = (ell - 2.0) / ell;
            rep.checks.push_back({"mu(V) = (ell-2)/ell" + at, mu.contains(expect) || std::abs(mu.lo - expect) <= 1e-12,
                                  "mu=[" + str(mu.lo) + ", " + str(mu.hi) + "]"});
            const double vd = v.diameter();
            rep.checks.push_back({"|V| = (8n+2) r" + at, std::abs(vd - (8.0 * p.n + 2.0) * p.r) <= 1e-15, str(vd)});
            const double ratio = mu.lo / std::pow(vd, p.s);
            rep.checks.push_back({"mu(V)/|V|^s > 1/eps" + at, ratio > 1.0 / p.eps, "ratio=" + str(ratio)});
        }
    }
    return rep;
}

} // namespace hforge
