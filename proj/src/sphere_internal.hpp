#pragma once

// Shared internals of the sphere module: the compactified right-hand side and
// the event-detecting integration driver used by integrate_sphere, the
// equator-crossing map and the periodic-orbit shooter.

#include <array>
#include <cmath>
#include <optional>

#include "rigid/abel_dynamics.hpp"
#include "rigid/detail/dopri5.hpp"
#include "rigid/errors.hpp"
#include "rigid/sphere.hpp"

namespace rigid::detail {

constexpr double kEquatorLocTol = 1e-10;               // |z3| after localization
constexpr double kEquatorGuard = 10 * kEquatorLocTol;  // arming threshold

inline SphereState renormalized(double z1, double z2, double z3) {
    double n = std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
    return {z1 / n, z2 / n, z3 / n};
}

struct SphereRhs {
    RigidParams p;
    std::array<double, 3> operator()(double, const std::array<double, 3>& z) const {
        double z1 = z[0], z2 = z[1], z3 = z[2];
        double w = p.b1 * z1 * z3 * z3 + p.b2 * z2 * z3 * z3 + p.a1 * z1 * z1 * z1 +
                   p.a2 * z1 * z1 * z2 + p.a3 * z1 * z2 * z2;
        return {z3 * (-z2 * z3 + z1 * w), z3 * (z1 * z3 + z2 * w), (z3 * z3 - 1.0) * w};
    }
};

struct CrossingEvent {
    double time = 0;  // absolute time on the caller's clock
    double alpha = 0;
    SphereState state;
};

// Integrates from (t0, z0) to t_limit, renormalizing after every accepted
// step and reporting each post-step state through sink(t, state). When
// detect_equator is set, stops at the first sign change of z3 after |z3| has
// exceeded the arming guard; the crossing is localized on the dense
// interpolant. Returns the crossing, or nullopt when t_limit was reached.
template <class Sink>
std::optional<CrossingEvent> run_sphere(const RigidParams& p, const SphereState& z0, double t0,
                                        double t_limit, const IntegratorSettings& s,
                                        bool detect_equator, Sink&& sink) {
    SphereRhs rhs{p};
    StepperOptions opt{s.rel_tol, s.abs_tol, s.max_step};
    Dopri5<3, SphereRhs> st(rhs, t0, {z0.z1, z0.z2, z0.z3}, opt);

    bool armed = false;
    double armed_sign = 0.0;
    if (detect_equator && std::fabs(z0.z3) > kEquatorGuard) {
        armed = true;
        armed_sign = z0.z3 > 0 ? 1.0 : -1.0;
    }
    while (st.t() < t_limit) {
        if (!st.step(t_limit)) throw Error("sphere integration: step size underflow");
        auto y = st.y();
        SphereState z = renormalized(y[0], y[1], y[2]);
        st.override_state({z.z1, z.z2, z.z3});

        if (detect_equator) {
            if (!armed) {
                if (std::fabs(z.z3) > kEquatorGuard) {
                    armed = true;
                    armed_sign = z.z3 > 0 ? 1.0 : -1.0;
                }
            } else if (z.z3 * armed_sign < 0.0) {
                double lo = st.t_prev(), hi = st.t();
                std::array<double, 3> zm{};
                for (int i = 0; i < 100; ++i) {
                    double mid = 0.5 * (lo + hi);
                    zm = st.dense(mid);
                    if (std::fabs(zm[2]) <= kEquatorLocTol) {
                        lo = hi = mid;
                        break;
                    }
                    if ((zm[2] > 0 ? 1.0 : -1.0) == armed_sign)
                        lo = mid;
                    else
                        hi = mid;
                }
                double tc = 0.5 * (lo + hi);
                zm = st.dense(tc);
                CrossingEvent ev;
                ev.time = tc;
                ev.state = renormalized(zm[0], zm[1], zm[2]);
                ev.alpha = std::atan2(ev.state.z2, ev.state.z1);
                sink(tc, ev.state);
                return ev;
            }
        }
        sink(st.t(), z);
    }
    return std::nullopt;
}

struct NullSink {
    void operator()(double, const SphereState&) const {}
};

}  // namespace rigid::detail
