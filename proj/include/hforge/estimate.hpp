#pragma once

#include <hforge/density.hpp>
#include <hforge/errors.hpp>
#include <hforge/ifs.hpp>
#include <hforge/measure.hpp>

#include <cmath>
#include <optional>

namespace hforge {

struct EstimateOptions {
    CandidateBudget candidates;
    /// Depth of the d = 1 fattening; negative picks the deepest level with at
    /// most candidates.run_cylinder_cap cylinders.
    int fattening_depth = -1;
    std::uint64_t pair_cap = 100'000'000;
    DiameterOptions diameter{1e-4, 2'000'000};
    SscOptions ssc;
};

/// Everything computed on the way to an estimate.
struct EstimateReport {
    HausdorffEstimate estimate;
    double s = 0.0;
    double delta = 0.0;
    Interval diameter;
    int fattening_depth = 0;
};

/// Two-sided bounds on H^s(K). Upper bounds are always certified; the lower
/// bound is certified in d = 1 and heuristic otherwise.
inline EstimateReport estimate_hausdorff(const IFS& f, const EstimateOptions& opts = {})
{
    const auto ssc = check_ssc(f, opts.ssc);
    if (!ssc.certified) throw Inconclusive("estimate: strong separation could not be certified");
    const NaturalMeasure m(f);
    EstimateReport rep;
    rep.s = m.s();
    rep.delta = ssc.delta;
    rep.diameter = diameter_interval(f, opts.diameter);

    auto sweep = sweep_candidates(m, ssc.delta, rep.diameter.hi, opts.candidates);
    HausdorffEstimate& est = rep.estimate;
    est.upper = upper_from(sweep.best, m.s());
    est.upper_rigorous = true;
    est.witness = sweep.best;

    if (f.dimension() == 1) {
        rep.fattening_depth = opts.fattening_depth >= 0
                                  ? opts.fattening_depth
                                  : detail::auto_depth(f.size(), opts.candidates.run_cylinder_cap);
        const auto lb = rigorous_lower_1d(m, ssc.delta, rep.fattening_depth, opts.pair_cap);
        est.lower = lb.value;
        est.lower_rigorous = true;
    } else {
        const auto lb = heuristic_lower(sweep);
        est.lower = lb.value;
        est.lower_rigorous = false;
    }
    return rep;
}

} // namespace hforge
