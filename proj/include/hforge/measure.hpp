#pragma once

// The natural self-similar measure and certified enclosures of mu(U).

#include <hforge/errors.hpp>
#include <hforge/geometry.hpp>
#include <hforge/ifs.hpp>

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hforge {

/// mu = sum_i r_i^s mu o phi_i^{-1}, together with the invariant ball that
/// roots every cylinder.
class NaturalMeasure {
public:
    explicit NaturalMeasure(IFS ifs)
        : ifs_(std::move(ifs)), s_(similarity_dimension(ifs_)), weights_(natural_weights(ifs_, s_)),
          root_(invariant_ball(ifs_))
    {}

    [[nodiscard]] const IFS& ifs() const noexcept { return ifs_; }
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    [[nodiscard]] const Ball& root() const noexcept { return root_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return ifs_.dimension(); }

private:
    IFS ifs_;
    double s_;
    std::vector<double> weights_;
    Ball root_;
};

/// Enclosure [lo, hi] of mu(U), 0 <= lo <= hi <= 1.
struct MeasureInterval {
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }

    friend bool operator==(const MeasureInterval&, const MeasureInterval&) = default;
};

/// Thrown by measure_of when the node budget runs out; carries the enclosure reached.
class MeasureBudgetExceeded : public BudgetExceeded {
public:
    explicit MeasureBudgetExceeded(MeasureInterval best)
        : BudgetExceeded("measure_of: node budget exhausted"), best_(best)
    {}
    [[nodiscard]] MeasureInterval best() const noexcept { return best_; }

private:
    MeasureInterval best_;
};

struct MeasureOptions {
    std::size_t node_cap = 5'000'000;
};

/// mu(phi_w(K)) = prod_j weight[i_j].
inline double pushforward_weight(std::span<const std::uint32_t> word, const NaturalMeasure& m)
{
    double w = 1.0;
    for (auto i : word) w *= m.weights().at(i);
    return w;
}

inline double pushforward_weight(const CylinderWord& word, const NaturalMeasure& m)
{
    return pushforward_weight(std::span<const std::uint32_t>(word.indices), m);
}

/// Refines straddling cylinders, heaviest first, until hi - lo <= tol.
inline MeasureInterval measure_of(const ConvexCandidate& u, const NaturalMeasure& m, double tol,
                                  MeasureOptions opts = {})
{
    if (!(tol > 0.0)) throw std::invalid_argument("measure_of: tol must be positive");
    if (dimension_of(u) != m.dimension()) throw std::invalid_argument("measure_of: dimension mismatch");

    struct Node {
        double weight;
        std::uint64_t seq;
        CylinderMap map;
    };
    auto lighter = [](const Node& a, const Node& b) { return a.weight != b.weight ? a.weight < b.weight : a.seq > b.seq; };
    std::priority_queue<Node, std::vector<Node>, decltype(lighter)> pending(lighter);

    double inside = 0.0;
    double straddle = 0.0;
    std::uint64_t seq = 0;
    auto finish = [&] {
        const double lo = std::clamp(inside, 0.0, 1.0);
        return MeasureInterval{lo, std::clamp(inside + straddle, lo, 1.0)};
    };

    const CylinderMap id = CylinderMap::identity(m.dimension());
    switch (classify_ball(u, m.root())) {
    case Relation::Inside: return {1.0, 1.0};
    case Relation::Outside: return {0.0, 0.0};
    case Relation::Straddle:
        pending.push({1.0, seq++, id});
        straddle = 1.0;
        break;
    }

    const auto& maps = m.ifs().maps();
    const auto& weights = m.weights();
    std::size_t nodes = 1;
    while (!pending.empty() && straddle > tol) {
        if (nodes + maps.size() > opts.node_cap) throw MeasureBudgetExceeded(finish());
        const Node top = pending.top();
        pending.pop();
        straddle -= top.weight;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const CylinderMap child = top.map.then(maps[i]);
            const double w = top.weight * weights[i];
            switch (classify_ball(u, child.image(m.root()))) {
            case Relation::Inside: inside += w; break;
            case Relation::Outside: break;
            case Relation::Straddle:
                straddle += w;
                pending.push({w, seq++, child});
                break;
            }
        }
        nodes += maps.size();
        if (pending.empty()) straddle = 0.0;
    }
    return finish();
}

} // namespace hforge
