#include <hforge/construction.hpp>
#include <hforge/ifs.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hforge;

namespace {

IFS cantor() { return IFS(1, {{1.0 / 3, Point{0.0}}, {1.0 / 3, Point{2.0 / 3}}}); }

IFS dust()
{
    return IFS(2, {{0.25, Point{0.0, 0.0}}, {0.25, Point{0.75, 0.0}}, {0.25, Point{0.0, 0.75}}, {0.25, Point{0.75, 0.75}}});
}

// Random d-dimensional systems with equal or mixed ratios, small enough to keep
// the first-level images apart most of the time.
IFS random_ifs(std::mt19937_64& rng, std::size_t d, std::size_t l)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> r(0.05, 0.2);
    std::vector<Similitude> maps;
    for (std::size_t i = 0; i < l; ++i) {
        Point a(d);
        for (std::size_t k = 0; k < d; ++k) a[k] = u(rng);
        maps.push_back({r(rng), a});
    }
    return IFS(d, maps);
}

} // namespace

TEST(Similitude, ApplyAndFixedPoint)
{
    const Similitude m{0.25, Point{0.75, -0.3}};
    const Point q = m.fixed_point();
    const Point mq = m.apply(q);
    EXPECT_NEAR(mq[0], q[0], 1e-15);
    EXPECT_NEAR(mq[1], q[1], 1e-15);
}

TEST(Ifs, RejectsMalformed)
{
    EXPECT_THROW(IFS(1, {{0.5, Point{0.0}}}), std::invalid_argument);
    EXPECT_THROW(IFS(1, {{1.0, Point{0.0}}, {0.5, Point{0.5}}}), std::invalid_argument);
    EXPECT_THROW(IFS(1, {{0.0, Point{0.0}}, {0.5, Point{0.5}}}), std::invalid_argument);
    EXPECT_THROW(IFS(2, {{0.5, Point{0.0}}, {0.5, Point{0.5}}}), std::invalid_argument);
    EXPECT_THROW(IFS(1, {{0.5, Point{NAN}}, {0.5, Point{0.5}}}), std::invalid_argument);
}

TEST(SimilarityDimension, KnownValues)
{
    EXPECT_NEAR(similarity_dimension(cantor()), std::log(2.0) / std::log(3.0), 1e-15);
    EXPECT_NEAR(std::log(2.0) / std::log(3.0), 0.6309297536, 1e-10);

    const auto p = make_params(1, 0.5, 0.5);
    EXPECT_NEAR(similarity_dimension(ifs_at(p, 0.0)), 0.5, 1e-12);

    // 2^-s + 4^-s = 1  <=>  2^-s = 1/golden ratio
    const IFS mixed(1, {{0.5, Point{0.0}}, {0.25, Point{0.75}}});
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(similarity_dimension(mixed), std::log2(golden), 1e-12);
    EXPECT_NEAR(similarity_dimension(mixed), 0.6942419136306173, 1e-12);
}

TEST(SimilarityDimension, SolvesMoranEquation)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const IFS f = random_ifs(rng, 2, 2 + trial % 6);
        const double s = similarity_dimension(f);
        double sum = 0.0;
        for (const auto& m : f.maps()) sum += std::pow(m.ratio, s);
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(InvariantBall, MapsIntoItself)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const IFS f = random_ifs(rng, 1 + trial % 3, 2 + trial % 5);
        const Ball b = invariant_ball(f);
        for (const auto& m : f.maps()) {
            const Ball img{m.apply(b.center), m.ratio * b.radius};
            EXPECT_LE(distance(img.center, b.center) + img.radius, b.radius + 1e-15);
        }
    }
}

TEST(InvariantBall, KnownValues)
{
    const Ball c = invariant_ball(cantor());
    EXPECT_LE(c.center[0] - c.radius, 0.0);
    EXPECT_GE(c.center[0] + c.radius, 1.0);

    const Ball h = invariant_ball(IFS(1, {{0.5, Point{0.5}}, {0.5, Point{0.0}}}));
    EXPECT_LE(h.center[0] - h.radius, 0.0);
    EXPECT_GE(h.center[0] + h.radius, 1.0);

    const auto p = make_params(1, 0.5, 0.5);
    const Ball b0 = invariant_ball(ifs_at(p, 0.0));
    EXPECT_LE(b0.center[0] - b0.radius, -0.5);
    EXPECT_GE(b0.center[0] + b0.radius, 0.5);
    EXPECT_LE(b0.radius, 0.5 + kGeometrySlack + 1e-15);
}

TEST(Ssc, KnownValues)
{
    const auto c = check_ssc(cantor());
    ASSERT_TRUE(c.certified);
    EXPECT_NEAR(c.delta, 1.0 / 3.0, 1e-9);
    EXPECT_LE(c.delta, 1.0 / 3.0);

    EXPECT_FALSE(check_ssc(IFS(1, {{0.5, Point{0.0}}, {0.5, Point{0.5}}})).certified);

    for (double eps : {0.5, 0.4}) {
        const auto p = make_params(1, 0.5, eps);
        const auto s0 = check_ssc(ifs_at(p, 0.0));
        ASSERT_TRUE(s0.certified);
        EXPECT_GE(s0.delta, 1.0 / (4.0 * p.n));
    }
}

TEST(Ssc, DeltaIsSoundAgainstSampledPoints)
{
    std::mt19937_64 rng(9);
    int certified = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const IFS f = random_ifs(rng, 2, 3 + trial % 3);
        const auto ssc = check_ssc(f);
        if (!ssc.certified) continue;
        ++certified;
        // points of K: fixed points of depth-3 compositions
        const auto words = cylinders(f, invariant_ball(f).diameter() * std::pow(f.max_ratio(), 2) * 1.0001);
        std::vector<std::pair<std::uint32_t, Point>> pts;
        for (const auto& w : words) {
            if (w.indices.empty()) continue;
            pts.emplace_back(w.indices.front(), (1.0 / (1.0 - w.map.scale)) * w.map.shift);
        }
        for (const auto& [i, p] : pts) {
            for (const auto& [j, q] : pts) {
                if (i != j) {
                    EXPECT_GE(distance(p, q), ssc.delta);
                }
            }
        }
    }
    EXPECT_GT(certified, 5);
}

TEST(Cylinders, KnownValues)
{
    const IFS f = cantor();
    const Ball root = invariant_ball(f);
    const auto whole = cylinders(f, 2 * root.diameter());
    ASSERT_EQ(whole.size(), 1u);
    EXPECT_TRUE(whole[0].indices.empty());
    EXPECT_EQ(whole[0].weight, 1.0);

    // B-hat is inflated by the slack, so 1/9 plus a hair gives the length-2 words
    const auto two = cylinders(f, 1.0 / 9.0 + 1e-9);
    ASSERT_EQ(two.size(), 4u);
    double total = 0.0;
    for (const auto& w : two) {
        EXPECT_EQ(w.indices.size(), 2u);
        EXPECT_DOUBLE_EQ(w.weight, 0.25);
        total += w.weight;
    }
    EXPECT_DOUBLE_EQ(total, 1.0);

    // uniform depth: l^k words
    const IFS d = dust();
    const double bd = invariant_ball(d).diameter();
    for (int k = 1; k <= 4; ++k) {
        const auto ws = cylinders(d, bd * std::pow(0.25, k) * (1 + 1e-9));
        EXPECT_EQ(ws.size(), static_cast<std::size_t>(std::pow(4, k)));
    }
}

TEST(Cylinders, WeightsSumToOne)
{
    std::mt19937_64 rng(13);
    std::vector<IFS> systems{cantor(), dust(), IFS(1, {{0.5, Point{0.0}}, {0.25, Point{0.75}}})};
    for (int i = 0; i < 10; ++i) systems.push_back(random_ifs(rng, 1 + i % 3, 2 + i % 4));
    for (const auto& f : systems) {
        const double s = similarity_dimension(f);
        for (double md : {0.5, 0.1, 0.02, 0.005}) {
            const auto ws = cylinders(f, md);
            double total = 0.0, direct = 0.0;
            for (const auto& w : ws) {
                total += w.weight;
                double prod = 1.0;
                for (auto i : w.indices) prod *= f[i].ratio;
                direct += std::pow(prod, s);
                EXPECT_LE(w.ball.diameter(), md);
            }
            EXPECT_NEAR(total, 1.0, 1e-10);
            EXPECT_NEAR(direct, 1.0, 1e-10);
        }
    }
}

TEST(Cylinders, LexicographicAndBudgeted)
{
    const auto ws = cylinders(dust(), 0.05);
    for (std::size_t i = 1; i < ws.size(); ++i) EXPECT_TRUE(ws[i - 1].indices < ws[i].indices);
    EXPECT_THROW(cylinders(dust(), 1e-6, {1000}), BudgetExceeded);
    EXPECT_THROW(cylinders(dust(), 0.0), std::invalid_argument);
}

TEST(DiameterInterval, KnownValues)
{
    for (const IFS& f : {cantor(), IFS(1, {{0.25, Point{0.0}}, {0.25, Point{0.75}}})}) {
        const auto iv = diameter_interval(f);
        EXPECT_TRUE(iv.contains(1.0));
        EXPECT_LE(iv.width(), 2e-4 + 1e-11);
    }
    for (double eps : {0.5, 0.4}) {
        const auto p = make_params(1, 0.5, eps);
        for (double t : {0.0, 0.3, 1.0}) {
            const auto iv = diameter_interval(ifs_at(p, t));
            EXPECT_TRUE(iv.contains(1.0));
            EXPECT_LE(iv.width(), 2e-4 + 1e-11);
        }
    }
    const auto p2 = make_params(2, 0.75, 0.5, 3);
    for (double t : {0.0, 1.0}) {
        const auto iv = diameter_interval(ifs_at(p2, t), {1e-3});
        EXPECT_TRUE(iv.contains(1.0));
        EXPECT_LE(iv.width(), 2e-3 + 1e-11);
    }
}

TEST(DiameterInterval, ShrinksWithResolution)
{
    const IFS f = dust(); // |K| = sqrt(2)
    const auto coarse = diameter_interval(f, {1e-2});
    const auto fine = diameter_interval(f, {1e-4});
    EXPECT_TRUE(coarse.contains(std::sqrt(2.0)));
    EXPECT_TRUE(fine.contains(std::sqrt(2.0)));
    EXPECT_LE(fine.width(), coarse.width());
    EXPECT_LE(coarse.lo, coarse.hi);
    EXPECT_THROW(diameter_interval(f, {1e-9, 100}), BudgetExceeded);
}
