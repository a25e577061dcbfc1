#pragma once

// Shared test utilities: deterministic parameter draws and a fixed-step RK4
// reference integrator kept independent of the library's adaptive engine.

#include <array>
#include <cmath>
#include <random>

#include "rigid/core.hpp"

namespace testsup {

class Rng {
  public:
    explicit Rng(unsigned long long seed) : gen_(seed) {}
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(gen_);
    }
    int pick(int n) {
        std::uniform_int_distribution<int> d(0, n - 1);
        return d(gen_);
    }

  private:
    std::mt19937_64 gen_;
};

inline rigid::RawParams random_raw(Rng& rng, double scale) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
}

inline rigid::RigidParams random_rigid(Rng& rng, double scale) {
    return {rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale), rng.uniform(-scale, scale),
            rng.uniform(-scale, scale)};
}

// Homogeneous-center stratum draw, scaled so radii up to ~0.9 stay inside the
// period annulus.
inline rigid::RigidParams random_homogeneous_center(Rng& rng, double amax = 0.1) {
    return {0.0, 0.0, rng.uniform(-amax, amax), rng.uniform(-amax, amax),
            rng.uniform(-amax, amax)};
}

// Reversible-center stratum draw: for b1 b2 != 0 the stratum is
//   a1 = a3 (b1^2 - b2^2) / (2 b2^2),   a2 = a3 (3 b1^2 - b2^2) / (2 b1 b2),
// a3 free; the axis-aligned subfamilies {b2=a2=0} and {b1=a1=a3=0} are the
// degenerate limits. The draw is rescaled through the family symmetry
// (b, a) -> (b/L, a/L^3) to keep radii up to ~0.9 inside the annulus.
inline rigid::RigidParams random_reversible_center(Rng& rng) {
    rigid::RigidParams p;
    int flavor = rng.pick(4);
    if (flavor == 0) {
        p = {rng.uniform(0.2, 1.0) * (rng.pick(2) ? 1 : -1), 0.0, rng.uniform(-1, 1), 0.0,
             rng.uniform(-1, 1)};
    } else if (flavor == 1) {
        p = {0.0, rng.uniform(0.2, 1.0) * (rng.pick(2) ? 1 : -1), 0.0, rng.uniform(-1, 1),
             0.0};
    } else {
        double b1 = rng.uniform(0.3, 1.0) * (rng.pick(2) ? 1 : -1);
        double b2 = rng.uniform(0.3, 1.0) * (rng.pick(2) ? 1 : -1);
        double a3 = rng.uniform(-1.0, 1.0);
        double a1 = a3 * (b1 * b1 - b2 * b2) / (2 * b2 * b2);
        double a2 = a3 * (3 * b1 * b1 - b2 * b2) / (2 * b1 * b2);
        p = {b1, b2, a1, a2, a3};
    }
    double amax = std::max({std::fabs(p.a1), std::fabs(p.a2), std::fabs(p.a3)});
    double bmax = std::max(std::fabs(p.b1), std::fabs(p.b2));
    double L = std::max({1.0, std::cbrt(amax / 0.1), bmax / 0.2});
    return {p.b1 / L, p.b2 / L, p.a1 / (L * L * L), p.a2 / (L * L * L), p.a3 / (L * L * L)};
}

template <int N, class F>
std::array<double, N> rk4(F f, double t0, std::array<double, N> y, double t1, int steps) {
    double h = (t1 - t0) / steps;
    double t = t0;
    for (int s = 0; s < steps; ++s) {
        auto k1 = f(t, y);
        std::array<double, N> y2, y3, y4;
        for (int i = 0; i < N; ++i) y2[i] = y[i] + 0.5 * h * k1[i];
        auto k2 = f(t + 0.5 * h, y2);
        for (int i = 0; i < N; ++i) y3[i] = y[i] + 0.5 * h * k2[i];
        auto k3 = f(t + 0.5 * h, y3);
        for (int i = 0; i < N; ++i) y4[i] = y[i] + h * k3[i];
        auto k4 = f(t + h, y4);
        for (int i = 0; i < N; ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t += h;
    }
    return y;
}

}  // namespace testsup
