// hforge: construct, verify, estimate, sweep, search, plot.

#include <hforge/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace hforge::cli;

void add_budgets(CLI::App* cmd, Budgets& b)
{
    cmd->add_option("--budget", b.evaluations, "candidate evaluations for the upper-bound search")->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol", b.verify_tol, "measure tolerance for the final candidates")->check(CLI::PositiveNumber);
    cmd->add_option("--inner-tol", b.tol, "measure tolerance inside the candidate search")->check(CLI::PositiveNumber);
    cmd->add_option("--node-cap", b.node_cap, "cylinder nodes per measure evaluation")->check(CLI::PositiveNumber);
    cmd->add_option("--pair-cap", b.pair_cap, "run-pair cap for the d = 1 lower bound")->check(CLI::PositiveNumber);
    cmd->add_option("--depth", b.depth, "d = 1 fattening depth (default: automatic)");
    cmd->add_option("--seed", b.seed, "seed for candidate subsampling");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hausdorff measure bounds for self-similar sets"};
    app.require_subcommand(1);
    int code = kOk;

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "derive n, F, ell, r and check every inequality");
    construct->add_option("-d,--dim", ca.d, "ambient dimension")->required();
    construct->add_option("-s,--s", ca.s, "target dimension s in (0, d)")->required();
    construct->add_option("-e,--eps", ca.eps, "epsilon in (0, 1)")->required();
    construct->add_option("--force-n", ca.force_n, "use this n instead of the minimal admissible one");
    construct->add_option("-o,--out", ca.out_path, "write params JSON here");
    construct->add_flag("--json", ca.json, "machine-readable output");
    construct->callback([&] { code = cmd_construct(ca); });

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "numerically confirm the structural claims at sampled t");
    verify->add_option("-p,--params", va.params_path, "params JSON")->required();
    verify->add_option("-t,--t", va.t_samples, "t samples")->expected(1, -1);
    verify->add_option("--seed", va.seed, "seed for cube sampling");
    verify->add_flag("--json", va.json, "machine-readable output");
    verify->callback([&] { code = cmd_verify(va); });

    EstimateArgs ea;
    auto* estimate = app.add_subcommand("estimate", "two-sided bounds on H^s");
    estimate->add_option("-p,--params", ea.params_path, "params JSON");
    estimate->add_option("--ifs", ea.ifs_path, "IFS JSON");
    estimate->add_option("-t,--t", ea.t, "family parameter t in [0, 1]");
    add_budgets(estimate, ea.budgets);
    estimate->add_option("-o,--out", ea.out_path, "write estimate JSON here");
    estimate->add_flag("--json", ea.json, "machine-readable output");
    estimate->callback([&] { code = cmd_estimate(ea); });

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "estimates on an equispaced t grid");
    sweep->add_option("-p,--params", sa.params_path, "params JSON")->required();
    sweep->add_option("-c,--c", sa.c, "target value; reports a straddling pair");
    sweep->add_option("--grid", sa.grid, "number of grid intervals (>= 2)");
    add_budgets(sweep, sa.budgets);
    sweep->add_option("-o,--out", sa.csv_path, "write CSV here (default: stdout)");
    sweep->add_flag("--json", sa.json, "machine-readable output");
    sweep->callback([&] { code = cmd_sweep(sa); });

    SearchArgs ra;
    auto* search = app.add_subcommand("search", "find t0 with H^s(K_t0) = c");
    search->add_option("-p,--params", ra.params_path, "params JSON")->required();
    search->add_option("-c,--c", ra.c, "target value in (eps, 1 - eps)");
    search->add_option("--grid", ra.grid, "initial sweep intervals (>= 2)");
    search->add_option("--tol-t", ra.tol_t, "bracket width")->check(CLI::PositiveNumber);
    search->add_option("--steps", ra.budget, "bisection step budget");
    search->add_option("--time-cap", ra.time_cap, "seconds allowed for bisection (0: none)")->check(CLI::NonNegativeNumber);
    add_budgets(search, ra.budgets);
    search->add_option("--csv", ra.csv_path, "write the initial sweep CSV here");
    search->add_option("-o,--out", ra.out_path, "write result JSON here");
    search->add_flag("--json", ra.json, "machine-readable output");
    search->callback([&] { code = cmd_search(ra); });

    PlotArgs pa;
    auto* plot = app.add_subcommand("plot", "SVG of an attractor or of a sweep band");
    plot->add_option("-p,--params", pa.params_path, "params JSON (attractor mode)");
    plot->add_option("-t,--t", pa.t, "family parameter t");
    plot->add_option("--depth", pa.depth, "cylinder depth")->check(CLI::NonNegativeNumber);
    plot->add_option("--sweep", pa.sweep_csv, "sweep CSV (band mode)");
    plot->add_option("-c,--c", pa.c, "reference line in band mode");
    plot->add_option("-o,--out", pa.out_path, "write SVG here (default: stdout)");
    plot->add_flag("--json", pa.json, "machine-readable output");
    plot->callback([&] { code = cmd_plot(pa); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kPrecondition;
    }
    return code;
}
