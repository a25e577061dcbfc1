#include "rigid/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigid/detail/polynomials.hpp"
#include "rigid/errors.hpp"
#include "sphere_internal.hpp"

namespace rigid {

SphereState sphere_state(double z1, double z2, double z3) {
    if (!std::isfinite(z1) || !std::isfinite(z2) || !std::isfinite(z3))
        throw InvalidInput("sphere_state: non-finite coordinates");
    if (z1 * z1 + z2 * z2 + z3 * z3 == 0.0) throw InvalidInput("sphere_state: zero vector");
    return detail::renormalized(z1, z2, z3);
}

SphereState chart_to_sphere(const ChartPoint& c) {
    double w1, w2;
    if (c.chart == Chart::U2) {
        w1 = c.u;
        w2 = 1.0;
    } else {
        w1 = 1.0;
        w2 = c.u;
    }
    double sigma;
    if (c.v != 0.0)
        sigma = (c.hemisphere == Hemisphere::North) == (c.v > 0.0) ? 1.0 : -1.0;
    else
        sigma = c.hemisphere == Hemisphere::North ? 1.0 : -1.0;
    return detail::renormalized(sigma * w1, sigma * w2, sigma * c.v);
}

ChartPoint sphere_to_chart(const SphereState& z, Chart chart) {
    double den = chart == Chart::U2 ? z.z2 : z.z1;
    if (den == 0.0) throw DomainError("sphere_to_chart: point outside the chart");
    ChartPoint c;
    c.chart = chart;
    c.u = (chart == Chart::U2 ? z.z1 : z.z2) / den;
    c.v = z.z3 / den;
    if (z.z3 > 0)
        c.hemisphere = Hemisphere::North;
    else if (z.z3 < 0)
        c.hemisphere = Hemisphere::South;
    else
        c.hemisphere = den > 0 ? Hemisphere::North : Hemisphere::South;
    return c;
}

double InfinityPoint::equator_angle() const {
    // U2 root u: direction (u, 1); U1 root u: direction (1, u).
    return chart == Chart::U2 ? std::atan2(1.0, u) : std::atan2(u, 1.0);
}

std::array<double, 3> eval_sphere_field(const RigidParams& p, const SphereState& z) {
    return detail::SphereRhs{p}(0.0, {z.z1, z.z2, z.z3});
}

std::pair<double, double> chart_u2_field(const RigidParams& p, double u, double v) {
    double v2 = v * v;
    double du = -v2 * (u * u + 1.0);
    double dv = -p.a1 * u * u * u - p.b1 * u * v2 - u * v2 * v - p.a2 * u * u - p.b2 * v2 -
                p.a3 * u;
    return {du, dv};
}

std::pair<double, double> chart_u1_field(const RigidParams& p, double u, double v) {
    double v2 = v * v;
    double du = v2 * (u * u + 1.0);
    double dv = -p.a3 * u * u - p.a2 * u - p.a1 - p.b1 * v2 - p.b2 * u * v2 + u * v2 * v;
    return {du, dv};
}

double discriminant(const RigidParams& p) { return p.a2 * p.a2 - 4.0 * p.a1 * p.a3; }

std::vector<InfinityPoint> classify_infinity(const RigidParams& p) {
    if (p.degenerate())
        throw DegenerateFamily("classify_infinity: a1 = a2 = a3 = 0 is the Riccati case");

    // Stratum membership is exact in the coefficients; multiplicities are
    // decided structurally, never from numerical clustering.
    std::vector<InfinityPoint> pts;
    auto add = [&](Chart chart, double u, int mult, InfinityKind kind, bool ambiguous = false) {
        pts.push_back({chart, u, mult, kind, ambiguous});
    };
    auto kind_of = [](int mult) {
        return mult == 1 ? InfinityKind::Cusp : InfinityKind::TwoHypTwoPar;
    };

    if (p.a1 != 0.0) {
        if (p.a2 == 0.0 && p.a3 == 0.0) {
            // g = -a1 u^3: triple root; cusp iff b2 = 0
            add(Chart::U2, 0.0, 3,
                p.b2 != 0.0 ? InfinityKind::TwoHypTwoPar : InfinityKind::Cusp);
        } else if (p.a3 == 0.0) {
            // g = -u^2 (a1 u + a2): double origin root plus a simple one
            add(Chart::U2, 0.0, 2, kind_of(2));
            add(Chart::U2, -p.a2 / p.a1, 1, kind_of(1));
        } else {
            double d = discriminant(p);
            add(Chart::U2, 0.0, 1, kind_of(1));
            if (d > 0.0) {
                auto r = detail::quadratic_roots(p.a3, p.a2, p.a1);
                add(Chart::U2, r[0], 1, kind_of(1));
                add(Chart::U2, r[1], 1, kind_of(1));
            } else if (d == 0.0) {
                add(Chart::U2, -p.a2 / (2.0 * p.a1), 2, kind_of(2));
            }
            // d < 0: the quadratic factor has no real roots
        }
    } else {
        // a1 = 0: the missing direction appears as the origin root of h in U1
        if (p.a2 != 0.0 && p.a3 != 0.0) {
            add(Chart::U2, 0.0, 1, kind_of(1));
            add(Chart::U2, -p.a3 / p.a2, 1, kind_of(1));
            add(Chart::U1, 0.0, 1, kind_of(1));
        } else if (p.a2 != 0.0) {  // a3 = 0: g = -a2 u^2
            add(Chart::U2, 0.0, 2, kind_of(2));
            add(Chart::U1, 0.0, 1, kind_of(1));
        } else {  // a1 = a2 = 0, a3 != 0: simple in U2, double origin root in U1
            add(Chart::U2, 0.0, 1, kind_of(1));
            add(Chart::U1, 0.0, 2, kind_of(2), /*ambiguous=*/true);
        }
    }

    std::sort(pts.begin(), pts.end(), [](const InfinityPoint& a, const InfinityPoint& b) {
        if (a.chart != b.chart) return a.chart == Chart::U2;
        return a.u < b.u;
    });
    return pts;
}

double equator_normal_speed(const RigidParams& p, double alpha) {
    double c = std::cos(alpha), s = std::sin(alpha);
    return -(p.a1 * c * c * c + p.a2 * c * c * s + p.a3 * c * s * s);
}

SphereTrajectory integrate_sphere(const RigidParams& p, const SphereState& z0, double t1,
                                  const IntegratorSettings& s, bool detect_equator) {
    s.validate();
    if (!std::isfinite(z0.z1) || !std::isfinite(z0.z2) || !std::isfinite(z0.z3))
        throw InvalidInput("integrate_sphere: non-finite state");
    if (!(t1 > 0) || !std::isfinite(t1)) throw InvalidInput("integrate_sphere: t1 must be positive");

    SphereTrajectory out;
    out.t.push_back(0.0);
    out.states.push_back(z0);
    auto sink = [&](double t, const SphereState& z) {
        out.t.push_back(t);
        out.states.push_back(z);
    };
    auto ev = detail::run_sphere(p, z0, 0.0, t1, s, detect_equator, sink);
    if (ev) {
        out.event_found = true;
        out.event_time = ev->time;
        out.event_alpha = ev->alpha;
        out.event_state = ev->state;
    } else if (detect_equator) {
        out.timed_out = true;
    }
    return out;
}

double sphere_first_integral(const RigidParams& p, const SphereState& z) {
    if (p.b1 != 0.0 || p.b2 != 0.0)
        throw DomainError("sphere_first_integral requires the homogeneous stratum b1=b2=0");
    double r2 = z.z1 * z.z1 + z.z2 * z.z2;
    if (r2 == 0.0) throw DomainError("sphere_first_integral is singular at the poles");
    double num = -z.z3 * z.z3 * z.z3 + p.a2 * z.z1 * z.z1 * z.z1 -
                 3.0 * p.a1 * z.z1 * z.z1 * z.z2 - (2.0 * p.a1 + p.a3) * z.z2 * z.z2 * z.z2;
    return num / (3.0 * std::pow(r2, 1.5));
}

namespace {

// Integrates until the planar angle atan2(z2, z1) winds by 2*pi (the angular
// speed on the sphere clock is z3^2 >= 0), reporting the largest
// first-integral drift along the way.
double homogeneous_orbit_drift(const RigidParams& p, const SphereState& z0,
                               const IntegratorSettings& s) {
    double h0 = sphere_first_integral(p, z0);
    double winding = 0.0, prev_angle = std::atan2(z0.z2, z0.z1);
    double drift = 0.0;
    constexpr double kTimeCap = 400.0;
    auto sink = [&](double, const SphereState& z) {
        double ang = std::atan2(z.z2, z.z1);
        winding += std::remainder(ang - prev_angle, 2.0 * std::numbers::pi);
        prev_angle = ang;
        drift = std::max(drift, std::fabs(sphere_first_integral(p, z) - h0));
    };
    detail::SphereRhs rhs{p};
    detail::StepperOptions opt{s.rel_tol, s.abs_tol, s.max_step};
    detail::Dopri5<3, detail::SphereRhs> st(rhs, 0.0, {z0.z1, z0.z2, z0.z3}, opt);
    while (std::fabs(winding) < 2.0 * std::numbers::pi && st.t() < kTimeCap) {
        if (!st.step(kTimeCap)) throw Error("global_center_check: step underflow");
        auto y = st.y();
        SphereState z = detail::renormalized(y[0], y[1], y[2]);
        st.override_state({z.z1, z.z2, z.z3});
        sink(st.t(), z);
    }
    return drift;
}

SphereState reflect_meridian(const SphereState& z, double n1, double n2) {
    double dot = z.z1 * n1 + z.z2 * n2;
    return {z.z1 - 2.0 * dot * n1, z.z2 - 2.0 * dot * n2, z.z3};
}

}  // namespace

GlobalCenterReport global_center_check(const RigidParams& p, const IntegratorSettings& s) {
    GlobalCenterReport rep;
    CenterClass cc = center_condition(p);
    rep.center_tag = cc.tag;
    if (cc.tag == CenterTag::NotCenter) {
        rep.status = GlobalCenterStatus::NotApplicable;
        return rep;
    }

    if (cc.tag == CenterTag::HomogeneousCenter) {
        // 5 seeds spanning both hemispheres, one of them on the equator
        const double lats[5] = {-0.8, -0.4, 0.0, 0.4, 0.8};
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) {
            double z3 = lats[i];
            double rho = std::sqrt(1.0 - z3 * z3);
            double ang = 0.4 + 0.9 * i;
            SphereState z0{rho * std::cos(ang), rho * std::sin(ang), z3};
            worst = std::max(worst, homogeneous_orbit_drift(p, z0, s));
        }
        rep.max_residual = worst;
        rep.status = worst <= 1e-6 ? GlobalCenterStatus::Passed : GlobalCenterStatus::Failed;
        return rep;
    }

    // Reversible stratum: the reflection R across the meridian b1 z1 + b2 z2 = 0
    // conjugates the flow to its time reverse, so phi_T(R(phi_T(z0))) = R(z0).
    double nn = std::hypot(cc.axis_b1, cc.axis_b2);
    double n1 = cc.axis_b1 / nn, n2 = cc.axis_b2 / nn;
    SphereState z0 = sphere_state(n2 + 0.2, -n1 + 0.1, 0.6);
    const double T = 7.0;
    SphereTrajectory leg1 = integrate_sphere(p, z0, T, s);
    SphereState w = reflect_meridian(leg1.states.back(), n1, n2);
    SphereTrajectory leg2 = integrate_sphere(p, w, T, s);
    SphereState back = leg2.states.back();
    SphereState target = reflect_meridian(z0, n1, n2);
    double res = std::sqrt((back.z1 - target.z1) * (back.z1 - target.z1) +
                           (back.z2 - target.z2) * (back.z2 - target.z2) +
                           (back.z3 - target.z3) * (back.z3 - target.z3));
    rep.max_residual = res;
    rep.status = res <= 1e-6 ? GlobalCenterStatus::Passed : GlobalCenterStatus::Failed;
    return rep;
}

}  // namespace rigid
