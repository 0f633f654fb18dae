#include <hforge/construction.hpp>
#include <hforge/density.hpp>
#include <hforge/estimate.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace hforge;

namespace {

IFS cantor() { return IFS(1, {{1.0 / 3, Point{0.0}}, {1.0 / 3, Point{2.0 / 3}}}); }

IFS dust()
{
    return IFS(2, {{0.25, Point{0.0, 0.0}}, {0.25, Point{0.75, 0.0}}, {0.25, Point{0.0, 0.75}}, {0.25, Point{0.75, 0.75}}});
}

// Independent evaluation of the ratio bound in plain arithmetic.
double ratio_direct(int n, int d, double s, double x)
{
    const double rd = std::sqrt(static_cast<double>(d));
    return std::pow(x + rd / n, d) / (std::pow(1.0 - rd / (2.0 * n), d) * std::pow(x, s));
}

} // namespace

TEST(RatioOf, InnerBallAtOne)
{
    const auto p = make_params(1, 0.5, 0.5);
    const NaturalMeasure m(ifs_at(p, 1.0));
    const auto rec = ratio_of(inner_ball(p), m, 1e-9);
    const double expect = (p.ell - 2.0) / std::pow(8.0 * p.n + 2.0, p.s);
    EXPECT_NEAR(rec.diam, (8.0 * p.n + 2.0) * p.r, 1e-15);
    EXPECT_NEAR(expect, 23.0 / std::sqrt(98.0), 1e-12);
    EXPECT_LE(rec.ratio.lo, expect * (1 + 1e-12));
    EXPECT_GE(rec.ratio.hi, expect * (1 - 1e-12));
    EXPECT_GT(rec.ratio.lo, 1.0 / p.eps);
}

TEST(RatioOf, InvariantBallAndUnitInterval)
{
    const NaturalMeasure m(cantor());
    const auto root = ratio_of(m.root(), m, 1e-9);
    EXPECT_EQ(root.mu.lo, 1.0);
    EXPECT_NEAR(root.ratio.lo, 1.0, 1e-11); // |B-hat| = 1 + 2 slack

    // cylinders within the geometric slack of 0 or 1 never resolve, so the
    // enclosure of mu([0,1]) bottoms out well above 1e-9
    const auto unit = ratio_of(PointHull({Point{0.0}, Point{1.0}}), m, 1e-6);
    EXPECT_LE(unit.ratio.lo, 1.0);
    EXPECT_GE(unit.ratio.hi, 1.0 - 1e-14);
    EXPECT_GE(unit.ratio.lo, 1.0 - 1e-6);
    EXPECT_THROW(ratio_of(Ball{Point{0.5}, 0.0}, m, 1e-3), std::invalid_argument);
}

TEST(RigorousLower1d, CantorConvergesMonotonically)
{
    const NaturalMeasure m(cantor());
    const double delta = check_ssc(cantor()).delta;
    double prev = 0.0;
    for (int k = 0; k <= 6; ++k) {
        const auto lb = rigorous_lower_1d(m, delta, k);
        EXPECT_TRUE(lb.rigorous);
        EXPECT_GT(lb.value, 0.0);
        EXPECT_LE(lb.value, 1.0);
        if (k >= 2) {
            EXPECT_GE(lb.value, prev);
        }
        prev = lb.value;
    }
    EXPECT_GE(prev, 0.95);
}

TEST(RigorousLower1d, ConstructionAtZero)
{
    const auto p = make_params(1, 0.5, 0.5);
    const IFS f = ifs_at(p, 0.0);
    const NaturalMeasure m(f);
    const auto lb = rigorous_lower_1d(m, check_ssc(f).delta, 2);
    EXPECT_GT(lb.value, 2.0 / 3.0);
}

TEST(RigorousLower1d, Preconditions)
{
    EXPECT_THROW(rigorous_lower_1d(NaturalMeasure(dust()), 0.1, 2), std::invalid_argument);
    EXPECT_THROW(rigorous_lower_1d(NaturalMeasure(cantor()), 0.0, 2), std::invalid_argument);
    EXPECT_THROW(rigorous_lower_1d(NaturalMeasure(cantor()), 0.3, 12, 1000), BudgetExceeded);
}

TEST(OptimizeUpper, InnerBallOrBetterAtOne)
{
    for (double eps : {0.5, 0.4}) {
        const auto p = make_params(1, 0.5, eps);
        const IFS f = ifs_at(p, 1.0);
        const NaturalMeasure m(f);
        const auto ub = optimize_upper(m, check_ssc(f).delta, 1.0);
        EXPECT_TRUE(ub.rigorous);
        EXPECT_LE(ub.value, std::pow(8.0 * p.n + 2.0, p.s) / (p.ell - 2.0) * (1 + 1e-9));
        EXPECT_LT(ub.value, eps);
    }
}

TEST(OptimizeUpper, CantorNearOne)
{
    const NaturalMeasure m(cantor());
    const auto ub = optimize_upper(m, 1.0 / 3.0, 1.0);
    EXPECT_GE(ub.value, 1.0);
    EXPECT_LE(ub.value, 1.0 + 1e-6);
    // the witness is the unit interval itself
    ASSERT_TRUE(std::holds_alternative<PointHull>(ub.witness.candidate));
    const auto& v = std::get<PointHull>(ub.witness.candidate).vertices();
    EXPECT_EQ(v.front()[0], 0.0);
    EXPECT_NEAR(v.back()[0], 1.0, 1e-15);
}

TEST(OptimizeUpper, NeverAboveDiameterPower)
{
    for (const IFS& f : {cantor(), dust(), IFS(1, {{0.5, Point{0.0}}, {0.25, Point{0.75}}})}) {
        const auto ssc = check_ssc(f);
        ASSERT_TRUE(ssc.certified);
        const auto diam = diameter_interval(f);
        const NaturalMeasure m(f);
        const auto sweep = sweep_candidates(m, ssc.delta, diam.hi);
        const double up = upper_from(sweep.best, m.s());
        EXPECT_LE(up, std::pow(diam.hi, m.s()) * (1 + 1e-9));
        // reciprocal contract
        EXPECT_DOUBLE_EQ(up, std::pow(sweep.best.diam, m.s()) / sweep.best.mu.lo);
    }
}

TEST(HeuristicLower, CantorDustBaseline)
{
    const IFS f = dust();
    const auto ssc = check_ssc(f);
    const NaturalMeasure m(f);
    const auto diam = diameter_interval(f);
    const auto sweep = sweep_candidates(m, ssc.delta, diam.hi);
    const auto lb = heuristic_lower(sweep);
    const double up = upper_from(sweep.best, m.s());
    EXPECT_FALSE(lb.rigorous);
    EXPECT_LE(lb.value, up);
    EXPECT_LE(up, std::pow(diam.hi, m.s()) * (1 + 1e-9));
    // regression baseline; the sweep lands next to sqrt(2) = |K|
    EXPECT_NEAR(lb.value, 1.41419, 1e-4);
}

TEST(HeuristicLower, ZeroBudgetUsesInvariantBallOnly)
{
    const NaturalMeasure m(dust());
    CandidateBudget b;
    b.evaluations = 0;
    const auto sweep = sweep_candidates(m, 0.1, 2.0, b);
    EXPECT_EQ(sweep.evaluations, 1u);
    EXPECT_TRUE(std::holds_alternative<Ball>(sweep.best.candidate));
    const auto lb = heuristic_lower(sweep);
    EXPECT_NEAR(lb.value, std::pow(m.root().diameter(), m.s()), 1e-12);
}

TEST(RatioBound, KnownValues)
{
    EXPECT_NEAR(lemma22_ratio_bound(12, 1, 0.5, 1.0), 26.0 / 23.0, 1e-14);
    EXPECT_NEAR(lemma22_ratio_bound(1, 1, 0.5, 0.25), 5.0, 1e-14);
    EXPECT_NEAR(lemma22_ratio_bound(1, 1, 0.5, 1.0), 4.0, 1e-14);
    EXPECT_THROW(lemma22_ratio_bound(12, 1, 0.5, 1.0 / 49.0), std::domain_error);
    EXPECT_THROW(lemma22_ratio_bound(12, 1, 0.5, 1.01), std::domain_error);
    // large n drives the bound at x = 1 to 1
    EXPECT_NEAR(lemma22_ratio_bound(1'000'000, 1, 0.5, 1.0), 1.0, 2e-6);
}

TEST(RatioBound, MatchesDirectEvaluationAndDenseGrid)
{
    for (int d = 1; d <= 3; ++d) {
        for (double s : {0.3 * d, 0.5 * d, 0.9 * d}) {
            for (int n : {2, 5, 12, 40}) {
                if (!(n > std::sqrt(static_cast<double>(d)) / 2.0)) continue;
                const double lo = 1.0 / (4.0 * n);
                double grid_max = 0.0;
                for (int i = 0; i <= 20000; ++i) {
                    const double x = lo + (1.0 - lo) * i / 20000.0;
                    const double v = ratio_direct(n, d, s, x);
                    EXPECT_NEAR(lemma22_ratio_bound(n, d, s, x), v, 1e-12 * v);
                    grid_max = std::max(grid_max, v);
                }
                EXPECT_GE(lemma22_max(n, d, s), grid_max * (1 - 1e-12));
                EXPECT_LE(lemma22_max(n, d, s), grid_max * (1 + 1e-6));
            }
        }
    }
}

TEST(RatioBound, CriticalPointIsStationary)
{
    const int n = 12, d = 2;
    const double s = 1.5;
    const double xs = lemma22_critical_point(n, d, s);
    EXPECT_NEAR(d * xs, s * (xs + std::sqrt(2.0) / n), 1e-14);
    const double h = 1e-6;
    const double deriv = (std::log(lemma22_ratio_bound(n, d, s, xs + h)) - std::log(lemma22_ratio_bound(n, d, s, xs - h))) / (2 * h);
    EXPECT_NEAR(deriv, 0.0, 1e-6);
}

TEST(CertifiedK0Bound, KnownValues)
{
    EXPECT_NEAR(certified_k0_bound(12, 1, 0.5), 23.0 / 26.0, 1e-14);
    EXPECT_GE(certified_k0_bound(12, 1, 0.5), 2.0 / 3.0);
    EXPECT_NEAR(certified_k0_bound(16, 1, 0.5), 0.91176470588235, 1e-12);
    // tends to 1
    EXPECT_GT(certified_k0_bound(100'000, 1, 0.5), 0.99);
}

TEST(EstimateHausdorff, CantorContainsOne)
{
    const auto rep = estimate_hausdorff(cantor());
    EXPECT_TRUE(rep.estimate.contains(1.0));
    EXPECT_TRUE(rep.estimate.lower_rigorous);
    EXPECT_TRUE(rep.estimate.upper_rigorous);
    EXPECT_LE(rep.estimate.lower, rep.estimate.upper);
}

TEST(EstimateHausdorff, RejectsOverlap)
{
    EXPECT_THROW(estimate_hausdorff(IFS(1, {{0.5, Point{0.0}}, {0.5, Point{0.5}}})), Inconclusive);
}

TEST(EstimateHausdorff, SandwichAndFlags)
{
    const std::vector<IFS> systems{cantor(), dust(), IFS(1, {{0.5, Point{0.0}}, {0.25, Point{0.75}}}),
                                   IFS(2, {{0.3, Point{0.0, 0.0}}, {0.3, Point{0.7, 0.0}}, {0.3, Point{0.35, 0.6}}}),
                                   IFS(3, {{0.3, Point{0.0, 0.0, 0.0}}, {0.3, Point{0.7, 0.0, 0.0}}, {0.3, Point{0.0, 0.0, 0.7}}})};
    for (const auto& f : systems) {
        const auto rep = estimate_hausdorff(f);
        const auto& e = rep.estimate;
        EXPECT_GT(e.lower, 0.0);
        EXPECT_LE(e.lower, e.upper);
        EXPECT_LE(e.upper, std::pow(rep.diameter.hi, rep.s) * (1 + 1e-9));
        EXPECT_EQ(e.lower_rigorous, f.dimension() == 1);
        EXPECT_TRUE(e.upper_rigorous);
        EXPECT_DOUBLE_EQ(e.upper, upper_from(e.witness, rep.s));
    }
}

// Conjugating by x -> 3x multiplies H^s by 3^s.
TEST(EstimateHausdorff, ScaleEquivariance)
{
    const auto p = make_params(1, 0.5, 0.4);
    const std::vector<IFS> systems{cantor(), ifs_at(p, 0.37), dust(),
                                   IFS(2, {{0.3, Point{0.0, 0.0}}, {0.3, Point{0.7, 0.0}}, {0.3, Point{0.35, 0.6}}})};
    const double lambda = 3.0;
    for (const auto& f : systems) {
        const auto a = estimate_hausdorff(f).estimate;
        const auto b = estimate_hausdorff(f.conjugated(lambda)).estimate;
        const double k = std::pow(lambda, similarity_dimension(f));
        EXPECT_NEAR(b.lower, k * a.lower, 1e-9 * k * a.lower);
        EXPECT_NEAR(b.upper, k * a.upper, 1e-9 * k * a.upper);
    }
}

TEST(EstimateHausdorff, Deterministic)
{
    const IFS f = dust();
    const auto a = estimate_hausdorff(f).estimate;
    const auto b = estimate_hausdorff(f).estimate;
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.upper, b.upper);
}
