#pragma once

// Closed-form real roots of quadratics and cubics with a Newton polish.

#include <algorithm>
#include <cmath>
#include <vector>

namespace rigid::detail {

// Real roots of c2 x^2 + c1 x + c0 (c2 != 0), stable quadratic formula.
inline std::vector<double> quadratic_roots(double c0, double c1, double c2) {
    double disc = c1 * c1 - 4 * c2 * c0;
    if (disc < 0) return {};
    if (disc == 0) return {-c1 / (2 * c2)};
    double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    double r1 = q / c2;
    double r2 = (q != 0.0) ? c0 / q : -c1 / c2 - r1;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0), ascending, polished by
// Newton iteration on the original cubic.
inline std::vector<double> cubic_roots(double c0, double c1, double c2, double c3) {
    double b = c2 / c3, c = c1 / c3, d = c0 / c3;
    // depressed cubic t^3 + p t + q, x = t - b/3
    double p = c - b * b / 3.0;
    double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    double shift = -b / 3.0;

    std::vector<double> roots;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0) {
        double s = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + s);
        double v = std::cbrt(-q / 2.0 - s);
        roots = {u + v + shift};
    } else if (p == 0.0 && q == 0.0) {
        roots = {shift};
    } else {
        // three real roots (disc <= 0 implies p < 0 unless p=q=0)
        double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        double phi = std::acos(arg) / 3.0;
        constexpr double tau = 2.0 * 3.14159265358979323846 / 3.0;
        for (int k = 0; k < 3; ++k) roots.push_back(m * std::cos(phi - tau * k) + shift);
    }

    auto f = [&](double x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    auto fp = [&](double x) { return (3 * c3 * x + 2 * c2) * x + c1; };
    for (double& x : roots) {
        for (int it = 0; it < 8; ++it) {
            double der = fp(x);
            if (der == 0.0) break;
            double dx = f(x) / der;
            x -= dx;
            if (std::fabs(dx) <= 1e-16 * std::max(1.0, std::fabs(x))) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace rigid::detail
