#include "rigid/core.hpp"

#include <cmath>
#include <numbers>

#include "rigid/detail/polynomials.hpp"
#include "rigid/errors.hpp"

namespace rigid {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double AbelCoeffs::eval_B(double theta) const {
    return b1 * std::cos(theta) + b2 * std::sin(theta);
}

double AbelCoeffs::eval_A(double theta) const {
    double c = std::cos(theta), s = std::sin(theta);
    return a1 * c * c * c + a2 * c * c * s + a3 * c * s * s + a4 * s * s * s;
}

RotationAngle RotationAngle::reduced(double raw) {
    if (!std::isfinite(raw)) throw InvalidInput("rotation angle must be finite");
    double phi = std::fmod(raw, kTwoPi);
    if (phi < 0) phi += kTwoPi;
    if (phi >= kTwoPi) phi = 0.0;
    return RotationAngle{phi};
}

double eval_F(const RawParams& p, double x, double y) {
    return p.b1 * x + p.b2 * y + p.a1 * x * x * x + p.a2 * x * x * y + p.a3 * x * y * y +
           p.a4 * y * y * y;
}

std::pair<double, double> eval_planar_field(const RawParams& p, double x, double y) {
    double f = eval_F(p, x, y);
    return {-y + x * f, x + y * f};
}

RawParams rotate_frame(const RawParams& p, RotationAngle phi) {
    double c = std::cos(phi.phi), s = std::sin(phi.phi);
    double c2 = c * c, s2 = s * s, cs = c * s;
    RawParams q;
    q.b1 = p.b1 * c + p.b2 * s;
    q.b2 = -p.b1 * s + p.b2 * c;
    q.a1 = p.a1 * c * c2 + p.a2 * c2 * s + p.a3 * c * s2 + p.a4 * s * s2;
    q.a2 = -3 * p.a1 * c2 * s + p.a2 * (c * c2 - 2 * cs * s) + p.a3 * (2 * c2 * s - s * s2) +
           3 * p.a4 * c * s2;
    q.a3 = 3 * p.a1 * c * s2 + p.a2 * (s * s2 - 2 * c2 * s) + p.a3 * (c * c2 - 2 * c * s2) +
           3 * p.a4 * c2 * s;
    q.a4 = -p.a1 * s * s2 + p.a2 * c * s2 - p.a3 * c2 * s + p.a4 * c * c2;
    return q;
}

std::pair<RigidParams, RotationAngle> normalize_a4(const RawParams& p) {
    if (p.a4 == 0.0)
        return {RigidParams{p.b1, p.b2, p.a1, p.a2, p.a3}, RotationAngle{0.0}};

    auto roots = detail::cubic_roots(p.a1, p.a2, p.a3, p.a4);
    double t = roots.front();
    for (double r : roots)
        if (std::fabs(r) < std::fabs(t)) t = r;
    double psi = std::atan(t);

    // Newton polish on psi -> A(psi); dA/dpsi is the a2-component of the
    // rotation map evaluated at psi.
    AbelCoeffs c = abel_coeffs(p);
    for (int it = 0; it < 12; ++it) {
        double cc = std::cos(psi), ss = std::sin(psi);
        double val = c.eval_A(psi);
        double der = -3 * p.a1 * cc * cc * ss + p.a2 * (cc * cc * cc - 2 * cc * ss * ss) +
                     p.a3 * (2 * cc * cc * ss - ss * ss * ss) + 3 * p.a4 * cc * ss * ss;
        if (der == 0.0 || !std::isfinite(val)) break;
        double step = val / der;
        psi -= step;
        if (std::fabs(step) <= 1e-16) break;
    }

    RotationAngle phi = RotationAngle::reduced(psi - std::numbers::pi / 2.0);
    RawParams q = rotate_frame(p, phi);
    return {RigidParams{q.b1, q.b2, q.a1, q.a2, q.a3}, phi};
}

std::pair<RawParams, RotationAngle> normalize_b1(const RawParams& p) {
    if (p.b1 == 0.0) return {p, RotationAngle{0.0}};
    RotationAngle phi = RotationAngle::reduced(std::atan2(-p.b1, p.b2));
    RawParams q = rotate_frame(p, phi);
    q.b1 = 0.0;
    return {q, phi};
}

AbelCoeffs abel_coeffs(const RawParams& p) {
    return AbelCoeffs{p.b1, p.b2, p.a1, p.a2, p.a3, p.a4};
}

double eval_abel_rhs(const AbelCoeffs& c, double theta, double r) {
    double r2 = r * r;
    return c.eval_B(theta) * r2 + c.eval_A(theta) * r2 * r2;
}

double max_norm(const RawParams& p) {
    return std::max({std::fabs(p.b1), std::fabs(p.b2), std::fabs(p.a1), std::fabs(p.a2),
                     std::fabs(p.a3), std::fabs(p.a4)});
}

double max_norm(const RigidParams& p) {
    return std::max({std::fabs(p.b1), std::fabs(p.b2), std::fabs(p.a1), std::fabs(p.a2),
                     std::fabs(p.a3)});
}

}  // namespace rigid
