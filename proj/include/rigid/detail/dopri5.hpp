#pragma once

// Embedded Dormand-Prince 5(4) stepper with PI step-size control and the
// standard quartic dense-output interpolant. Header-only and templated on the
// state dimension so the Abel equation (N=1,2) and the sphere field (N=3)
// share one driver.

#include <array>
#include <cmath>
#include <limits>

namespace rigid::detail {

struct StepperOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double first_step = 0.0;  // 0 = choose automatically
};

template <int N, class F>
class Dopri5 {
  public:
    using State = std::array<double, N>;

    Dopri5(F rhs, double t0, const State& y0, const StepperOptions& opt)
        : rhs_(rhs), opt_(opt), t_(t0), t_prev_(t0), y_(y0), y_prev_(y0) {
        k1_ = rhs_(t_, y_);
    }

    double t() const { return t_; }
    double t_prev() const { return t_prev_; }
    const State& y() const { return y_; }
    const State& y_prev() const { return y_prev_; }
    bool underflow() const { return underflow_; }

    // Replace the current state (e.g. renormalization after an accepted
    // step). The dense interpolant of the already-taken step is kept.
    void override_state(const State& y) {
        y_ = y;
        k1_ = rhs_(t_, y_);
    }

    // Advance by one accepted step, never stepping past t_limit. Returns
    // false when the step size underflows or the state stops being finite;
    // the caller decides what that means (blow-up, failure).
    bool step(double t_limit) {
        const double dir = t_limit >= t_ ? 1.0 : -1.0;
        double span = std::fabs(t_limit - t_);
        if (span == 0.0) return false;
        if (h_ == 0.0) h_ = initial_step(dir, span);

        for (int attempt = 0; attempt < 200; ++attempt) {
            double h = dir * std::min({std::fabs(h_), opt_.max_step, span});
            if (std::fabs(h) <= step_floor()) {
                underflow_ = true;
                return false;
            }
            if (try_step(h)) {
                last_h_ = h;
                return true;
            }
            if (!std::isfinite(err_)) {
                // wild rejection: halve and retry
                h_ = h / 2;
                continue;
            }
            double fac11 = std::pow(err_, kExpo1);
            h_ = h / std::min(kFacc1, fac11 / kSafe);
        }
        underflow_ = true;
        return false;
    }

    // Dense evaluation inside the last accepted step [t_prev, t].
    State dense(double ti) const {
        const double h = last_h_;
        double theta = h != 0.0 ? (ti - t_prev_) / h : 0.0;
        double th1 = 1.0 - theta;
        State out;
        for (int i = 0; i < N; ++i)
            out[i] = rc1_[i] +
                     theta * (rc2_[i] + th1 * (rc3_[i] + theta * (rc4_[i] + th1 * rc5_[i])));
        return out;
    }

  private:
    static constexpr double kSafe = 0.9;
    static constexpr double kBeta = 0.04;
    static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
    static constexpr double kFacc1 = 5.0;   // max growth
    static constexpr double kFacc2 = 0.1;   // max shrink

    double step_floor() const {
        return 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t_));
    }

    double initial_step(double dir, double span) const {
        double dy = 0, df = 0;
        for (int i = 0; i < N; ++i) {
            double sc = opt_.abs_tol + opt_.rel_tol * std::fabs(y_[i]);
            dy += (y_[i] / sc) * (y_[i] / sc);
            df += (k1_[i] / sc) * (k1_[i] / sc);
        }
        double h = (dy > 0 && df > 0) ? 0.01 * std::sqrt(dy / df) : 1e-6;
        return dir * std::min({h, span, opt_.max_step});
    }

    bool try_step(double h) {
        const State& y = y_;
        State k2, k3, k4, k5, k6, k7, yt, y5;
        auto stage = [&](const std::array<double, 7>& a, int m) {
            for (int i = 0; i < N; ++i) {
                double acc = a[0] * k1_[i];
                if (m > 1) acc += a[1] * k2[i];
                if (m > 2) acc += a[2] * k3[i];
                if (m > 3) acc += a[3] * k4[i];
                if (m > 4) acc += a[4] * k5[i];
                if (m > 5) acc += a[5] * k6[i];
                yt[i] = y[i] + h * acc;
            }
        };
        stage({1.0 / 5}, 1);
        k2 = rhs_(t_ + h / 5, yt);
        stage({3.0 / 40, 9.0 / 40}, 2);
        k3 = rhs_(t_ + 3 * h / 10, yt);
        stage({44.0 / 45, -56.0 / 15, 32.0 / 9}, 3);
        k4 = rhs_(t_ + 4 * h / 5, yt);
        stage({19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729}, 4);
        k5 = rhs_(t_ + 8 * h / 9, yt);
        stage({9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656}, 5);
        k6 = rhs_(t_ + h, yt);
        stage({35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}, 6);
        y5 = yt;
        k7 = rhs_(t_ + h, y5);

        // embedded 4th-order error estimate
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        double err = 0;
        for (int i = 0; i < N; ++i) {
            double sc = opt_.abs_tol +
                        opt_.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
            double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            err += (e / sc) * (e / sc);
        }
        err_ = std::sqrt(err / N);
        if (!(err_ <= 1.0) || !finite(y5)) {
            if (!finite(y5)) err_ = std::numeric_limits<double>::infinity();
            return false;
        }

        // dense-output coefficients (Hairer's contd5)
        static constexpr double d1 = -12715105075.0 / 11282082432.0,
                                d3 = 87487479700.0 / 32700410799.0,
                                d4 = -10690763975.0 / 1880347072.0,
                                d5 = 701980252875.0 / 199316789632.0,
                                d6 = -1453857185.0 / 822651844.0,
                                d7 = 69997945.0 / 29380423.0;
        for (int i = 0; i < N; ++i) {
            double dy = y5[i] - y[i];
            double bspl = h * k1_[i] - dy;
            rc1_[i] = y[i];
            rc2_[i] = dy;
            rc3_[i] = bspl;
            rc4_[i] = dy - h * k7[i] - bspl;
            rc5_[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                           d7 * k7[i]);
        }

        t_prev_ = t_;
        y_prev_ = y_;
        t_ += h;
        y_ = y5;
        k1_ = k7;  // FSAL

        double fac11 = std::pow(std::max(err_, 1e-10), kExpo1);
        double fac = fac11 / std::pow(facold_, kBeta);
        fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
        h_ = h / fac;
        facold_ = std::max(err_, 1e-4);
        return true;
    }

    static bool finite(const State& y) {
        for (double v : y)
            if (!std::isfinite(v)) return false;
        return true;
    }

    F rhs_;
    StepperOptions opt_;
    double t_, t_prev_;
    State y_, y_prev_;
    State k1_{};
    State rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{};
    double h_ = 0.0, last_h_ = 0.0;
    double err_ = 0.0, facold_ = 1e-4;
    bool underflow_ = false;
};

}  // namespace rigid::detail
