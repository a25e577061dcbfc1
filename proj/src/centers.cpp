#include "rigid/centers.hpp"

#include <cmath>
#include <numbers>

#include "rigid/errors.hpp"

namespace rigid {

namespace {
constexpr double kPi = std::numbers::pi;
}

double lyapunov_l2(const RigidParams& p) {
    return kPi / 2.0 * detail::l2_bracket(p.b1, p.b2, p.a1, p.a2, p.a3);
}

double lyapunov_l3(const RigidParams& p) {
    return -kPi / 2.0 * detail::l3_bracket(p.b1, p.b2, p.a1, p.a2, p.a3);
}

CenterClass center_condition(const RigidParams& p) {
    CenterClass out;
    if (p.b1 == 0.0 && p.b2 == 0.0) {
        out.tag = CenterTag::HomogeneousCenter;
        return out;
    }
    double e1 = detail::center2_first(p.b1, p.b2, p.a1, p.a2, p.a3);
    double e2 = detail::center2_second(p.b1, p.b2, p.a1, p.a2, p.a3);
    double norm = max_norm(p);
    double norm_a = std::max({std::fabs(p.a1), std::fabs(p.a2), std::fabs(p.a3)});
    double tol = 1e-12 * norm * norm * norm * norm_a;
    if (std::fabs(e1) <= tol && std::fabs(e2) <= tol) {
        out.tag = CenterTag::ReversibleCenter;
        out.axis_b1 = p.b1;
        out.axis_b2 = p.b2;
        return out;
    }
    out.tag = CenterTag::NotCenter;
    out.l2 = lyapunov_l2(p);
    out.l3 = lyapunov_l3(p);
    return out;
}

double first_integral_planar(const RigidParams& p, double x, double y) {
    if (p.b1 != 0.0 || p.b2 != 0.0)
        throw DomainError("first_integral_planar requires the homogeneous stratum b1=b2=0");
    double r2 = x * x + y * y;
    if (r2 == 0.0) throw DomainError("first_integral_planar is singular at the origin");
    double num = -1.0 + p.a2 * x * x * x - 3.0 * p.a1 * x * x * y -
                 (2.0 * p.a1 + p.a3) * y * y * y;
    return num / (3.0 * std::pow(r2, 1.5));
}

RigidParams build_hopf_example(double eps, double a2) {
    RigidParams p;
    p.b1 = 5.0;
    p.b2 = 1.0;
    p.a1 = (1.0 + 120.0 * a2 * kPi - 82.0 * eps) / (74.0 * kPi);
    p.a2 = a2;
    p.a3 = (-3.0 + 10.0 * a2 * kPi + 98.0 * eps) / (74.0 * kPi);
    return p;
}

double hopf_a2_minimizing_discriminant(double eps) {
    // D(a2) = A a2^2 + B a2 + C for the family above (sympy-checked):
    //   A = 169/1369, B = 10(35-1094 eps)/(1369 pi),
    //   C = (8036 eps^2 - 344 eps + 3)/(1369 pi^2).
    double A = 169.0 / 1369.0;
    double B = 10.0 * (35.0 - 1094.0 * eps) / (1369.0 * kPi);
    return -B / (2.0 * A);
}

bool check_no_limit_cycles(const RawParams& p) {
    auto [q, phi] = normalize_b1(p);
    return q.a1 * q.a3 >= 0.0;
}

}  // namespace rigid
