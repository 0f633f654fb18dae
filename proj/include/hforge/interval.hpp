#pragma once

#include <algorithm>
#include <ostream>

namespace hforge {

/// Closed interval [lo, hi] of reals used as an enclosure.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] double mid() const noexcept { return 0.5 * (lo + hi); }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }

    friend bool operator==(const Interval&, const Interval&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Interval& iv)
    {
        return os << '[' << iv.lo << ", " << iv.hi << ']';
    }
};

} // namespace hforge
