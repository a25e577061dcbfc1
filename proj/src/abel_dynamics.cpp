#include "rigid/abel_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigid/detail/dopri5.hpp"
#include "rigid/errors.hpp"

namespace rigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFixedPointTol = 1e-9;    // |R(r)-r| below this counts as a fixed point
constexpr double kBisectTol = 1e-10;       // target |d| for bisected roots
constexpr double kNonHyperbolicTol = 1e-6; // |multiplier-1| threshold
// Step underflow with r already this large is a blow-up, not a failure.
constexpr double kEscapeFloor = 1e3;

struct AbelRhs {
    AbelCoeffs c;
    std::array<double, 1> operator()(double th, const std::array<double, 1>& y) const {
        double r2 = y[0] * y[0];
        return {c.eval_B(th) * r2 + c.eval_A(th) * r2 * r2};
    }
};

struct AbelVarRhs {
    AbelCoeffs c;
    std::array<double, 2> operator()(double th, const std::array<double, 2>& y) const {
        double r = y[0], v = y[1];
        double B = c.eval_B(th), A = c.eval_A(th);
        double r2 = r * r;
        return {B * r2 + A * r2 * r2, (2.0 * B * r + 4.0 * A * r2 * r) * v};
    }
};

void check_inputs(double r0, double theta0, double theta1, const IntegratorSettings& s) {
    s.validate();
    if (!std::isfinite(r0) || !std::isfinite(theta0) || !std::isfinite(theta1))
        throw InvalidInput("integrate_abel: non-finite input");
    if (r0 < 0.0) throw InvalidInput("integrate_abel: r0 must be >= 0");
    if (!(theta0 < theta1)) throw InvalidInput("integrate_abel: theta0 < theta1 required");
}

// Locate the first theta in the last accepted step with r(theta) = r_escape.
template <class Stepper>
double locate_escape(const Stepper& st, double r_escape) {
    double lo = st.t_prev(), hi = st.t();
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (st.dense(mid)[0] > r_escape)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Shared driver: integrates r (dimension 1) or (r, v) (dimension 2).
template <int N, class Rhs>
ReturnMapResult run_abel(Rhs rhs, std::array<double, N> y0, double theta0, double theta1,
                         const IntegratorSettings& s) {
    ReturnMapResult out;
    if (y0[0] > s.r_escape) {
        out.outcome = ReturnMapResult::Outcome::Escape;
        out.theta_escape = theta0;
        return out;
    }
    detail::StepperOptions opt{s.rel_tol, s.abs_tol, s.max_step};
    detail::Dopri5<N, Rhs> st(rhs, theta0, y0, opt);
    while (st.t() < theta1) {
        if (!st.step(theta1)) {
            if (st.underflow() && st.y()[0] >= kEscapeFloor) {
                out.outcome = ReturnMapResult::Outcome::Escape;
                out.theta_escape = st.t();
                return out;
            }
            throw Error("integrate_abel: step size underflow away from blow-up");
        }
        if (st.y()[0] > s.r_escape) {
            out.outcome = ReturnMapResult::Outcome::Escape;
            out.theta_escape = locate_escape(st, s.r_escape);
            return out;
        }
    }
    out.outcome = ReturnMapResult::Outcome::Value;
    out.r_end = st.y()[0];
    if constexpr (N == 2) out.derivative = st.y()[1];
    return out;
}

}  // namespace

void IntegratorSettings::validate() const {
    bool ok = std::isfinite(rel_tol) && std::isfinite(abs_tol) && std::isfinite(max_step) &&
              std::isfinite(r_escape) && rel_tol > 0 && abs_tol > 0 && max_step > 0 &&
              r_escape > 0 && rel_tol >= 1e-14;
    if (!ok) throw InvalidInput("IntegratorSettings: tolerances must be positive, rel_tol >= 1e-14");
}

ReturnMapResult integrate_abel(const AbelCoeffs& c, double r0, double theta0, double theta1,
                               const IntegratorSettings& s) {
    check_inputs(r0, theta0, theta1, s);
    if (r0 == 0.0) {
        ReturnMapResult out;  // r = 0 is invariant
        out.r_end = 0.0;
        return out;
    }
    return run_abel<1>(AbelRhs{c}, {r0}, theta0, theta1, s);
}

ReturnMapResult return_map(const AbelCoeffs& c, double r0, const IntegratorSettings& s) {
    check_inputs(r0, 0.0, kTwoPi, s);
    if (r0 == 0.0) {
        ReturnMapResult out;
        out.r_end = 0.0;
        out.derivative = 1.0;
        return out;
    }
    return run_abel<2>(AbelVarRhs{c}, {r0, 1.0}, 0.0, kTwoPi, s);
}

LimitCycleSet find_limit_cycles(const AbelCoeffs& c, double r_max, int grid_n,
                                const IntegratorSettings& s) {
    s.validate();
    if (!(r_max > 0) || !std::isfinite(r_max) || grid_n < 8)
        throw InvalidInput("find_limit_cycles: r_max > 0 and grid_n >= 8 required");

    LimitCycleSet out;
    out.r_max_searched = r_max;
    out.grid_n = grid_n;

    auto displacement = [&](double r) -> std::optional<std::pair<double, double>> {
        ReturnMapResult rm = return_map(c, r, s);
        if (rm.escaped()) return std::nullopt;
        return std::make_pair(rm.r_end - r, *rm.derivative);
    };

    auto classify = [&](double r_star, double mult) {
        LimitCycle lc{r_star, mult};
        if (std::fabs(mult - 1.0) <= kNonHyperbolicTol)
            out.non_hyperbolic.push_back(lc);
        else
            out.cycles.push_back(lc);
    };

    std::vector<std::optional<std::pair<double, double>>> d(grid_n + 1);
    for (int k = 1; k <= grid_n; ++k) {
        double r = r_max * k / grid_n;
        d[k] = displacement(r);
        if (!d[k]) ++out.escaped_cells;
    }

    for (int k = 1; k <= grid_n; ++k) {
        if (!d[k]) continue;
        double rk = r_max * k / grid_n;
        if (std::fabs(d[k]->first) <= kFixedPointTol) {
            classify(rk, d[k]->second);
            continue;
        }
        if (k == grid_n || !d[k + 1]) continue;
        if (std::fabs(d[k + 1]->first) <= kFixedPointTol) continue;  // handled as own cell
        if (std::signbit(d[k]->first) == std::signbit(d[k + 1]->first)) continue;

        // bisect: the escape set is an upper set in r, so midpoints between
        // two non-escaping radii cannot escape
        double lo = rk, hi = r_max * (k + 1) / grid_n;
        double dlo = d[k]->first;
        double root = lo, mult = d[k]->second;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            auto dm = displacement(mid);
            if (!dm) break;
            if (std::fabs(dm->first) <= kBisectTol) {
                root = mid;
                mult = dm->second;
                converged = true;
                break;
            }
            if (std::signbit(dm->first) == std::signbit(dlo)) {
                lo = mid;
                dlo = dm->first;
            } else {
                hi = mid;
            }
            if (hi - lo <= 1e-14 * std::max(1.0, hi)) break;
        }
        if (converged) classify(root, mult);
    }

    // merge duplicates that adjacent brackets may have converged to
    auto dedupe = [](std::vector<LimitCycle>& v) {
        std::sort(v.begin(), v.end(),
                  [](const LimitCycle& a, const LimitCycle& b) { return a.r_star < b.r_star; });
        v.erase(std::unique(v.begin(), v.end(),
                            [](const LimitCycle& a, const LimitCycle& b) {
                                return std::fabs(a.r_star - b.r_star) <=
                                       1e-8 * std::max(1.0, std::fabs(b.r_star));
                            }),
                v.end());
    };
    dedupe(out.cycles);
    dedupe(out.non_hyperbolic);
    return out;
}

PlanarOrbit planar_orbit(const RawParams& p, double x0, double y0, double t1,
                         const IntegratorSettings& s) {
    s.validate();
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(t1))
        throw InvalidInput("planar_orbit: non-finite input");
    PlanarOrbit out;
    double r0 = std::hypot(x0, y0);
    if (r0 == 0.0) {
        if (t1 != 0.0) throw InvalidInput("planar_orbit: the origin is critical");
        out.t = {0.0};
        out.x = {x0};
        out.y = {y0};
        return out;
    }
    double theta0 = std::atan2(y0, x0);
    int n = std::max(1, static_cast<int>(std::ceil(std::fabs(t1) / s.max_step)));

    AbelCoeffs c = abel_coeffs(p);
    AbelRhs rhs{c};
    detail::StepperOptions opt{s.rel_tol, s.abs_tol, s.max_step};
    detail::Dopri5<1, AbelRhs> st(rhs, theta0, {r0}, opt);

    auto push = [&](double th, double r) {
        out.t.push_back(th - theta0);
        out.x.push_back(r * std::cos(th));
        out.y.push_back(r * std::sin(th));
    };
    push(theta0, r0);
    if (t1 == 0.0) return out;

    double theta1 = theta0 + t1;
    int next = 1;
    bool forward = t1 > 0;
    while (next <= n) {
        if ((forward && st.t() >= theta1) || (!forward && st.t() <= theta1)) break;
        if (!st.step(theta1)) {
            if (st.underflow() && st.y()[0] >= kEscapeFloor) {
                out.escaped = true;
                out.theta_escape = st.t();
                return out;
            }
            throw Error("planar_orbit: step size underflow away from blow-up");
        }
        if (st.y()[0] > s.r_escape) {
            out.escaped = true;
            out.theta_escape = locate_escape(st, s.r_escape);
            return out;
        }
        // emit the uniform-theta samples covered by this step
        while (next <= n) {
            double th = theta0 + t1 * next / n;
            bool covered = forward ? (th <= st.t() + 1e-15) : (th >= st.t() - 1e-15);
            if (!covered) break;
            push(th, st.dense(th)[0]);
            ++next;
        }
    }
    return out;
}

}  // namespace rigid
