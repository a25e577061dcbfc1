#pragma once

// Parameter types of the rigid family x' = -y + x F(x,y), y' = x + y F(x,y)
// with F(x,y) = b1 x + b2 y + a1 x^3 + a2 x^2 y + a3 x y^2 + a4 y^3,
// frame rotations (the a4-killing and b1-killing normalizations) and the
// polar/Abel representation r' = B(theta) r^2 + A(theta) r^4.

#include <utility>

namespace rigid {

// The six coefficients of F in an arbitrary frame.
struct RawParams {
    double b1 = 0, b2 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;
};

// The a4 = 0 normal frame. a1 = a2 = a3 = 0 degenerates to a separable
// Riccati equation; the sphere analysis refuses that case.
struct RigidParams {
    double b1 = 0, b2 = 0, a1 = 0, a2 = 0, a3 = 0;

    bool degenerate() const { return a1 == 0.0 && a2 == 0.0 && a3 == 0.0; }
    RawParams raw() const { return {b1, b2, a1, a2, a3, 0.0}; }
};

// Trigonometric coefficients of B(theta) = b1 cos + b2 sin and
// A(theta) = a1 cos^3 + a2 cos^2 sin + a3 cos sin^2 + a4 sin^3.
// Both are odd under theta -> theta + pi.
struct AbelCoeffs {
    double b1 = 0, b2 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0;

    double eval_B(double theta) const;
    double eval_A(double theta) const;
};

// An angle in radians reduced to [0, 2*pi).
struct RotationAngle {
    double phi = 0;

    static RotationAngle reduced(double raw);
};

double eval_F(const RawParams& p, double x, double y);

// Right-hand side of the planar system: (-y + x F, x + y F).
std::pair<double, double> eval_planar_field(const RawParams& p, double x, double y);

// Coefficients of F in coordinates rotated by phi. Convention: the new
// angular variable satisfies theta = Theta + phi, i.e. B'(Theta) = B(Theta+phi)
// and A'(Theta) = A(Theta+phi).
RawParams rotate_frame(const RawParams& p, RotationAngle phi);

// Rotation killing a4. phi solves A(pi/2 + phi) = 0; dividing A(psi) by
// cos^3(psi) turns this into the real cubic a1 + a2 t + a3 t^2 + a4 t^3 = 0
// in t = tan(psi), which always has a real root. Of several real roots the
// one of smallest |t| is chosen. Post: |A'(pi/2)| <= 1e-12 * max(1, ||p||).
std::pair<RigidParams, RotationAngle> normalize_a4(const RawParams& p);

// Rotation killing b1: phi = atan2(-b1, b2) solves b1 cos(phi)+b2 sin(phi)=0.
// a4 is generally nonzero in this frame.
std::pair<RawParams, RotationAngle> normalize_b1(const RawParams& p);

AbelCoeffs abel_coeffs(const RawParams& p);

// B(theta) r^2 + A(theta) r^4.
double eval_abel_rhs(const AbelCoeffs& c, double theta, double r);

// max-norm of the coefficients; scales all normalization tolerances.
double max_norm(const RawParams& p);
double max_norm(const RigidParams& p);

}  // namespace rigid
