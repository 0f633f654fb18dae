#pragma once

// The hforge command implementations. Each returns a process exit code:
//   0 ok, 1 I/O, 2 precondition, 3 verification failure, 4 inconclusive or budget.

#include <hforge/construction.hpp>
#include <hforge/errors.hpp>
#include <hforge/estimate.hpp>
#include <hforge/io.hpp>
#include <hforge/plot.hpp>
#include <hforge/search.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace hforge::cli {

enum Exit : int { kOk = 0, kIo = 1, kPrecondition = 2, kVerification = 3, kInconclusive = 4 };

struct Streams {
    std::ostream& out = std::cout;
    std::ostream& err = std::cerr;
};

struct Budgets {
    std::size_t evaluations = 4000;
    double tol = 1e-4;
    double verify_tol = 1e-6;
    std::size_t node_cap = 1'000'000;
    std::uint64_t pair_cap = 100'000'000;
    int depth = -1; ///< d = 1 fattening depth, negative for automatic
    std::uint64_t seed = 0;
};

inline EstimateOptions estimate_options(const Budgets& b)
{
    EstimateOptions o;
    o.candidates.evaluations = b.evaluations;
    o.candidates.tol = b.tol;
    o.candidates.verify_tol = b.verify_tol;
    o.candidates.node_cap = b.node_cap;
    o.candidates.seed = b.seed;
    o.fattening_depth = b.depth;
    o.pair_cap = b.pair_cap;
    return o;
}

inline std::string num(double x) { return io::format_double(x); }

/// Runs body and maps library exceptions onto exit codes. on_inconclusive may
/// write partial output before the code is returned.
inline int guarded(Streams s, const std::function<int()>& body,
                   const std::function<void(const std::string&)>& on_inconclusive = {})
{
    auto inconclusive = [&](const std::exception& e) {
        s.err << "inconclusive: " << e.what() << '\n';
        if (on_inconclusive) {
            try {
                on_inconclusive(e.what());
            } catch (const std::exception& w) {
                s.err << "error: " << w.what() << '\n';
                return kIo;
            }
        }
        return kInconclusive;
    };
    try {
        return body();
    } catch (const IoError& e) {
        s.err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const IterationCap& e) {
        s.err << "infeasible: " << e.what() << '\n';
        return kPrecondition;
    } catch (const Inconclusive& e) {
        return inconclusive(e);
    } catch (const BudgetExceeded& e) {
        return inconclusive(e);
    } catch (const std::invalid_argument& e) {
        s.err << "precondition: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::domain_error& e) {
        s.err << "precondition: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        s.err << "error: " << e.what() << '\n';
        return kIo;
    }
}

inline io::json checks_json(const std::vector<CheckResult>& checks)
{
    io::json a = io::json::array();
    for (const auto& c : checks) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return a;
}

inline void print_checks(std::ostream& os, const std::vector<CheckResult>& checks)
{
    for (const auto& c : checks) {
        os << (c.passed ? "  ok    " : "  FAIL  ") << c.name;
        if (!c.detail.empty()) os << "  (" << c.detail << ')';
        os << '\n';
    }
}

inline ConstructionParams load_params(const std::string& path)
{
    return io::params_from_json(io::parse(io::read_file(path), path));
}

// construct

struct ConstructArgs {
    int d = 1;
    double s = 0.5;
    double eps = 0.5;
    std::optional<int> force_n;
    std::string out_path; ///< params JSON; empty to skip
    bool json = false;
};

inline int cmd_construct(const ConstructArgs& a, Streams st = {})
{
    return guarded(st, [&] {
        const ConstructionParams p = make_params(a.d, a.s, a.eps, a.force_n);
        const auto checks = check_params(p);
        const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
        if (!a.out_path.empty()) io::write_file(a.out_path, io::to_json(p).dump(2) + "\n");

        if (a.json) {
            io::json j = {{"d", p.d},           {"s", p.s},         {"eps", p.eps},
                          {"n", p.n},           {"ell", p.ell},     {"r", p.r},
                          {"eight_n_plus_4_r", (8.0 * p.n + 4.0) * p.r},
                          {"eps_pow_inv_s", std::pow(p.eps, 1.0 / p.s)},
                          {"forced_n", p.forced}, {"certified_k0_bound", certified_k0_bound(p)},
                          {"checks", checks_json(checks)}};
            st.out << j.dump(2) << '\n';
        } else {
            st.out << "n = " << p.n << "\nell = " << p.ell << "\nr = " << num(p.r) << "\n(8n+4) r = "
                   << num((8.0 * p.n + 4.0) * p.r) << "\neps^(1/s) = " << num(std::pow(p.eps, 1.0 / p.s))
                   << "\nanalytic lower bound on H^s(K_0) = " << num(certified_k0_bound(p)) << "\nchecks:\n";
            print_checks(st.out, checks);
        }
        if (p.forced) {
            st.err << "warning: n forced to " << p.n << "; results for these params are not certified\n";
            return static_cast<int>(kOk);
        }
        return static_cast<int>(ok ? kOk : kVerification);
    });
}

// verify

struct VerifyArgs {
    std::string params_path;
    std::vector<double> t_samples{0.0, 0.5, 1.0};
    std::uint64_t seed = 0;
    bool json = false;
};

inline int cmd_verify(const VerifyArgs& a, Streams st = {})
{
    return guarded(st, [&] {
        const ConstructionParams p = load_params(a.params_path);
        for (double t : a.t_samples) {
            if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("t samples must lie in [0, 1]");
        }
        VerifyOptions vo;
        vo.seed = a.seed;
        const VerifyReport rep = verify_prop2(p, a.t_samples, vo);
        if (a.json) {
            st.out << io::json{{"passed", rep.passed()}, {"checks", checks_json(rep.checks)}}.dump(2) << '\n';
        } else {
            print_checks(st.out, rep.checks);
            st.out << (rep.passed() ? "all checks passed\n" : "verification FAILED\n");
        }
        return static_cast<int>(rep.passed() ? kOk : kVerification);
    });
}

// estimate

struct EstimateArgs {
    std::string params_path; ///< either this...
    std::string ifs_path;    ///< ...or this
    double t = 0.0;
    Budgets budgets;
    std::string out_path;
    bool json = false;
};

inline int cmd_estimate(const EstimateArgs& a, Streams st = {})
{
    if (a.params_path.empty() == a.ifs_path.empty()) {
        st.err << "precondition: give exactly one of --params or --ifs\n";
        return kPrecondition;
    }
    auto emit = [&](const io::json& j) {
        if (!a.out_path.empty()) io::write_file(a.out_path, j.dump(2) + "\n");
    };
    return guarded(
        st,
        [&] {
            const EstimateOptions opts = estimate_options(a.budgets);
            HausdorffEstimate e;
            io::json j;
            if (!a.params_path.empty()) {
                const ConstructionParams p = load_params(a.params_path);
                if (!(a.t >= 0.0 && a.t <= 1.0)) throw std::invalid_argument("t must lie in [0, 1]");
                e = estimate_at(p, a.t, opts);
                j = io::to_json(e);
                j["t"] = a.t;
                j["s"] = p.s;
            } else {
                const IFS f = io::ifs_from_json(io::parse(io::read_file(a.ifs_path), a.ifs_path));
                const auto rep = estimate_hausdorff(f, opts);
                e = rep.estimate;
                j = io::to_json(e);
                j["s"] = rep.s;
                j["delta"] = rep.delta;
                j["diameter"] = {rep.diameter.lo, rep.diameter.hi};
            }
            emit(j);
            if (a.json) {
                st.out << j.dump(2) << '\n';
            } else {
                st.out << "lower = " << num(e.lower) << (e.lower_rigorous ? "  (rigorous)" : "  (heuristic)") << '\n'
                       << "upper = " << num(e.upper) << (e.upper_rigorous ? "  (rigorous)" : "  (heuristic)") << '\n'
                       << "witness diameter = " << num(e.witness.diam) << ", mu in [" << num(e.witness.mu.lo) << ", "
                       << num(e.witness.mu.hi) << "]\n";
            }
            return static_cast<int>(kOk);
        },
        [&](const std::string& why) {
            io::json j = {{"status", "inconclusive"}, {"message", why}};
            if (!a.params_path.empty()) j["t"] = a.t;
            emit(j);
            if (a.json) st.out << j.dump(2) << '\n';
        });
}

// sweep and search

struct SweepArgs {
    std::string params_path;
    std::optional<double> c;
    int grid = 8;
    Budgets budgets;
    std::string csv_path; ///< empty writes the CSV to stdout
    bool json = false;
};

inline int cmd_sweep(const SweepArgs& a, Streams st = {})
{
    return guarded(st, [&] {
        const ConstructionParams p = load_params(a.params_path);
        if (a.c) require_target(p, *a.c);
        SearchOptions so;
        so.estimate = estimate_options(a.budgets);
        const auto pts = sweep_with([&](double t) { return estimate_at(p, t, so.estimate); }, a.grid);
        const std::string csv = io::sweep_csv(pts);
        if (!a.csv_path.empty()) io::write_file(a.csv_path, csv);

        std::optional<Bracket> br;
        if (a.c) br = find_bracket(pts, *a.c);
        if (a.json) {
            io::json rows = io::json::array();
            for (const auto& q : pts) {
                io::json r = io::to_json(q.estimate);
                r.erase("witness");
                r["t"] = q.t;
                rows.push_back(r);
            }
            io::json j = {{"points", rows}};
            if (a.c) {
                j["c"] = *a.c;
                j["bracket"] = br ? io::json{br->lo.t, br->hi.t} : io::json(nullptr);
            }
            st.out << j.dump(2) << '\n';
        } else if (a.csv_path.empty()) {
            st.out << csv;
        } else {
            st.out << "wrote " << pts.size() << " rows to " << a.csv_path << '\n';
        }
        if (a.c && !br) {
            st.err << "inconclusive: no grid pair straddles c = " << num(*a.c) << '\n';
            return static_cast<int>(kInconclusive);
        }
        return static_cast<int>(kOk);
    });
}

struct SearchArgs {
    std::string params_path;
    double c = 0.5;
    int grid = 4;
    double tol_t = 1.0 / 64.0;
    std::size_t budget = 64;
    double time_cap = 0.0;
    Budgets budgets;
    std::string csv_path;
    std::string out_path;
    bool json = false;
};

inline io::json bracket_json(const Bracket& b)
{
    return {{"t_lo", b.lo.t},
            {"t_hi", b.hi.t},
            {"width", b.width()},
            {"lo", {b.lo.estimate.lower, b.lo.estimate.upper}},
            {"hi", {b.hi.estimate.lower, b.hi.estimate.upper}}};
}

inline int cmd_search(const SearchArgs& a, Streams st = {})
{
    std::optional<Bracket> best;
    auto emit = [&](const io::json& j) {
        if (!a.out_path.empty()) io::write_file(a.out_path, j.dump(2) + "\n");
        if (a.json) st.out << j.dump(2) << '\n';
    };
    return guarded(
        st,
        [&] {
            const ConstructionParams p = load_params(a.params_path);
            require_target(p, a.c);
            SearchOptions so;
            so.estimate = estimate_options(a.budgets);
            so.tol_t = a.tol_t;
            so.budget = a.budget;
            so.time_cap = a.time_cap;
            const auto pts = sweep(p, a.c, a.grid, so);
            if (!a.csv_path.empty()) io::write_file(a.csv_path, io::sweep_csv(pts));
            best = find_bracket(pts, a.c);
            if (!best) throw Inconclusive("sweep: no grid pair straddles c");
            std::optional<std::chrono::steady_clock::time_point> deadline;
            if (a.time_cap > 0.0) {
                deadline = std::chrono::steady_clock::now()
                           + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(a.time_cap));
            }
            SearchResult res;
            try {
                res = find_t([&](double t) { return estimate_at(p, t, so.estimate); }, *best, a.c, a.tol_t, a.budget,
                             deadline);
            } catch (const SearchInconclusive& e) {
                best = e.best();
                throw;
            }
            io::json j = {{"status", "ok"},
                          {"c", a.c},
                          {"t0", res.t0},
                          {"evaluations", res.evaluations},
                          {"bracket", bracket_json(res.bracket)},
                          {"estimate", io::to_json(res.estimate)}};
            emit(j);
            if (!a.json) {
                st.out << "t0 = " << num(res.t0) << "\nH^s(K_t0) in [" << num(res.estimate.lower) << ", "
                       << num(res.estimate.upper) << "]" << (res.estimate.lower_rigorous && res.estimate.upper_rigorous ? "  (rigorous)" : "  (heuristic)")
                       << "\nbracket [" << num(res.bracket.lo.t) << ", " << num(res.bracket.hi.t) << "] after "
                       << res.evaluations << " bisection steps\n";
            }
            return static_cast<int>(kOk);
        },
        [&](const std::string& why) {
            io::json j = {{"status", "inconclusive"}, {"c", a.c}, {"message", why}};
            j["bracket"] = best ? bracket_json(*best) : io::json(nullptr);
            emit(j);
        });
}

// plot

struct PlotArgs {
    std::string params_path; ///< attractor mode
    double t = 0.0;
    int depth = 1;
    std::string sweep_csv;   ///< sweep mode
    std::optional<double> c;
    std::string out_path;    ///< empty writes the SVG to stdout
    bool json = false;
};

inline int cmd_plot(const PlotArgs& a, Streams st = {})
{
    if (a.params_path.empty() == a.sweep_csv.empty()) {
        st.err << "precondition: give exactly one of --params or --sweep\n";
        return kPrecondition;
    }
    return guarded(st, [&] {
        std::string svg;
        if (!a.params_path.empty()) {
            const ConstructionParams p = load_params(a.params_path);
            if (!(a.t >= 0.0 && a.t <= 1.0)) throw std::invalid_argument("t must lie in [0, 1]");
            plot::AttractorOptions po;
            po.depth = a.depth;
            svg = plot::attractor_svg(p, a.t, po);
        } else {
            plot::SweepPlotOptions po;
            po.target = a.c;
            svg = plot::sweep_svg(io::sweep_from_csv(io::read_file(a.sweep_csv)), po);
        }
        if (a.out_path.empty()) {
            st.out << svg;
        } else {
            io::write_file(a.out_path, svg);
            if (a.json) {
                st.out << io::json{{"svg", a.out_path}, {"bytes", svg.size()}}.dump(2) << '\n';
            } else {
                st.out << "wrote " << a.out_path << '\n';
            }
        }
        return static_cast<int>(kOk);
    });
}

} // namespace hforge::cli
