// Walks the d = 1 family from K_0 to K_1 and prints the bounds at each step.

#include <hforge/hforge.hpp>

#include <cstdio>

int main()
{
    const auto params = hforge::make_params(1, 0.5, 0.4);
    std::printf("n = %d, maps = %lld, r = %.6g\n", params.n, params.ell, params.r);
    for (int i = 0; i <= 8; ++i) {
        const double t = i / 8.0;
        const auto e = hforge::estimate_at(params, t);
        std::printf("t = %.3f  H^s in [%.6f, %.6f]\n", t, e.lower, e.upper);
    }
}
