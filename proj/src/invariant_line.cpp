#include <array>
#include <cmath>

#include "rigid/sphere.hpp"

namespace rigid {

namespace {

// Dense polynomial in y of degree <= 7: enough for the cofactor arithmetic.
using YPoly = std::array<double, 8>;

YPoly ymono(double coeff, int deg) {
    YPoly p{};
    p[deg] = coeff;
    return p;
}

YPoly sub_scaled(const YPoly& a, const YPoly& b, const YPoly& lin) {
    // a - b * lin, lin of degree <= 1
    YPoly out = a;
    for (int i = 0; i + 1 < 8; ++i) {
        out[i] -= b[i] * lin[0];
        out[i + 1] -= b[i] * lin[1];
    }
    return out;
}

YPoly scaled(const YPoly& a, double f) {
    YPoly out{};
    for (int i = 0; i < 8; ++i) out[i] = a[i] * f;
    return out;
}

int ydeg(const YPoly& p) {
    for (int i = 7; i >= 0; --i)
        if (p[i] != 0.0) return i;
    return -1;
}

}  // namespace

LineResult invariant_line(const RigidParams& p) {
    LineResult out;
    double w = p.a1 + p.b1 * p.b2 * p.b2;
    double b2_3 = p.b2 * p.b2 * p.b2;
    double e1 = p.a2 * b2_3 + 2.0 * p.a1 * w;
    double e2 = p.a3 * b2_3 * b2_3 - p.a1 * w * w;
    double tol1 = 1e-12 * (std::fabs(p.a2 * b2_3) + 2.0 * std::fabs(p.a1 * p.a1) +
                           2.0 * std::fabs(p.a1 * p.b1 * p.b2 * p.b2));
    double tol2 = 1e-12 * (std::fabs(p.a3 * b2_3 * b2_3) + std::fabs(p.a1 * w * w));
    out.conditions_hold = std::fabs(e1) <= tol1 && std::fabs(e2) <= tol2;
    if (!out.conditions_hold) return out;
    if (p.b2 == 0.0) {
        out.degenerate_b2 = true;  // the closed-form line collapses; manual review
        return out;
    }

    double c1 = -b2_3, c2 = w, c3 = p.b2 * p.b2;
    out.c1 = c1;
    out.c2 = c2;
    out.c3 = c3;

    // c1 P + c2 Q as a polynomial in x with coefficients in R[y]:
    //   P = -y + b1 x^2 + b2 x y + a1 x^4 + a2 x^3 y + a3 x^2 y^2
    //   Q =  x + b1 x y + b2 y^2 + a1 x^3 y + a2 x^2 y^2 + a3 x y^3
    std::array<YPoly, 5> n{};
    auto acc = [&](int xdeg, double coeff, int yd) { n[xdeg][yd] += coeff; };
    acc(0, -c1, 1);               // c1 * (-y)
    acc(2, c1 * p.b1, 0);         // c1 * b1 x^2
    acc(1, c1 * p.b2, 1);         // c1 * b2 x y
    acc(4, c1 * p.a1, 0);         // c1 * a1 x^4
    acc(3, c1 * p.a2, 1);         // c1 * a2 x^3 y
    acc(2, c1 * p.a3, 2);         // c1 * a3 x^2 y^2
    acc(1, c2, 0);                // c2 * x
    acc(1, c2 * p.b1, 1);         // c2 * b1 x y
    acc(0, c2 * p.b2, 2);         // c2 * b2 y^2
    acc(3, c2 * p.a1, 1);         // c2 * a1 x^3 y
    acc(2, c2 * p.a2, 2);         // c2 * a2 x^2 y^2
    acc(1, c2 * p.a3, 3);         // c2 * a3 x y^3

    // synthetic division by c1 x + (c2 y + c3)
    YPoly lin = ymono(c3, 0);
    lin[1] = c2;
    std::array<YPoly, 4> k{};
    k[3] = scaled(n[4], 1.0 / c1);
    k[2] = scaled(sub_scaled(n[3], k[3], lin), 1.0 / c1);
    k[1] = scaled(sub_scaled(n[2], k[2], lin), 1.0 / c1);
    k[0] = scaled(sub_scaled(n[1], k[1], lin), 1.0 / c1);
    YPoly rem = sub_scaled(n[0], k[0], lin);

    double residual = 0.0;
    for (double c : rem) residual = std::max(residual, std::fabs(c));
    out.residual = residual;

    int deg = -1;
    for (int i = 0; i < 4; ++i) {
        int dy = ydeg(k[i]);
        if (dy >= 0) deg = std::max(deg, i + dy);
    }
    out.cofactor_degree = deg;

    double cnorm = std::max({std::fabs(c1), std::fabs(c2), std::fabs(c3)});
    out.present = residual <= 1e-10 * max_norm(p) * cnorm;
    return out;
}

}  // namespace rigid
