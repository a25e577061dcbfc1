#pragma once

// Lyapunov constants, center classification, the planar first integral of the
// homogeneous stratum, the one-limit-cycle Hopf family, and the a1*a3 >= 0
// no-limit-cycle certificate.

#include "rigid/core.hpp"

namespace rigid {

enum class CenterTag { NotCenter, HomogeneousCenter, ReversibleCenter };

struct CenterClass {
    CenterTag tag = CenterTag::NotCenter;
    // ReversibleCenter: direction (axis_b1, axis_b2) of the symmetry axis
    // b1 x + b2 y = 0.
    double axis_b1 = 0, axis_b2 = 0;
    // NotCenter: the obstructing pair.
    double l2 = 0, l3 = 0;
};

namespace detail {

// Polynomial brackets shared between the double-precision API and the exact
// rational-pi arithmetic used in the tests.
template <class T>
T l2_bracket(const T& b1, const T& b2, const T& a1, const T& a2, const T& a3) {
    return a2 * b1 - T(3) * a1 * b2 - a3 * b2;
}

template <class T>
T l3_bracket(const T& b1, const T& b2, const T& a1, const T& a2, const T& a3) {
    T b1sq = b1 * b1, b2sq = b2 * b2;
    return T(-1) * a2 * b1 * b1sq + T(3) * a1 * b1sq * b2 + T(3) * a3 * b1sq * b2 -
           T(9) * a2 * b1 * b2sq + T(23) * a1 * b2 * b2sq + T(7) * a3 * b2 * b2sq;
}

template <class T>
T center2_first(const T& b1, const T& b2, const T& a1, const T& a2, const T& a3) {
    return T(3) * a1 * b2 * (b2 * b2 - b1 * b1) +
           b1 * (a2 * b1 * b1 + T(2) * a3 * b1 * b2 - T(3) * a2 * b2 * b2);
}

template <class T>
T center2_second(const T& b1, const T& b2, const T& /*a1*/, const T& a2, const T& a3) {
    return b2 * (T(-3) * a3 * b1 * b1 + T(2) * a2 * b1 * b2 + a3 * b2 * b2);
}

}  // namespace detail

// (pi/2) (a2 b1 - 3 a1 b2 - a3 b2)
double lyapunov_l2(const RigidParams& p);

// -(pi/2) (-a2 b1^3 + 3 a1 b1^2 b2 + 3 a3 b1^2 b2 - 9 a2 b1 b2^2
//          + 23 a1 b2^3 + 7 a3 b2^3)
double lyapunov_l3(const RigidParams& p);

// HomogeneousCenter iff b1 = b2 = 0 (exactly); otherwise ReversibleCenter iff
// both second-condition expressions vanish within 1e-12 * ||p||^3 * ||p||_a;
// otherwise NotCenter carrying (l2, l3).
CenterClass center_condition(const RigidParams& p);

// H(x,y) = (-1 + a2 x^3 - 3 a1 x^2 y - (2 a1 + a3) y^3) / (3 ((x^2+y^2)^3)^(1/2)).
// Requires b1 = b2 = 0 and (x,y) != (0,0); throws DomainError otherwise.
double first_integral_planar(const RigidParams& p, double x, double y);

// The family with b1 = 5, b2 = 1, a1 = (1+120 a2 pi - 82 eps)/(74 pi),
// a3 = (-3+10 a2 pi + 98 eps)/(74 pi): its Lyapunov constants are l2 = eps,
// l3 = 1, so eps < 0 small spawns one limit cycle by a degenerate Hopf
// bifurcation.
RigidParams build_hopf_example(double eps, double a2);

// The a2 minimizing D(a2) = a2^2 - 4 a1 a3 over the Hopf family at fixed eps.
// For eps < 0 the minimum is negative, which puts two cusps on the equator.
double hopf_a2_minimizing_discriminant(double eps);

// Sufficient (one-sided) no-limit-cycle certificate: rotate to the b1 = 0
// frame and test a1' * a3' >= 0. True means provably no planar limit cycles;
// false is inconclusive.
bool check_no_limit_cycles(const RawParams& p);

}  // namespace rigid
