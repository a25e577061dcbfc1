#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rigid/abel_dynamics.hpp"
#include "rigid/centers.hpp"
#include "rigid/errors.hpp"
#include "rigid/sphere.hpp"
#include "support.hpp"

using namespace rigid;
using testsup::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

// ----- exact rational arithmetic graded by powers of pi ---------------------
// Values live in span{1, eps, a2} (x) span{pi^-1, 1, pi} with exact rational
// coefficients, enough to reproduce the l2 = eps, l3 = 1 cancellation
// symbolically.

struct Frac {
    long long n = 0, d = 1;

    Frac() = default;
    Frac(long long num, long long den = 1) : n(num), d(den) { reduce(); }
    void reduce() {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n == 0) d = 1;
    }
    Frac operator+(const Frac& o) const { return Frac(n * o.d + o.n * d, d * o.d); }
    Frac operator-(const Frac& o) const { return Frac(n * o.d - o.n * d, d * o.d); }
    Frac operator*(const Frac& o) const { return Frac(n * o.n, d * o.d); }
    Frac operator/(const Frac& o) const { return Frac(n * o.d, d * o.n); }
    bool operator==(const Frac& o) const { return n == o.n && d == o.d; }
    bool zero() const { return n == 0; }
};

struct Sym {
    // c[v][k]: coefficient of {1, eps, a2}[v] * pi^(k-1)
    Frac c[3][3];

    Sym() = default;
    explicit Sym(long long v) { c[0][1] = Frac(v); }
    static Sym pi(long long num = 1, long long den = 1) {
        Sym s;
        s.c[0][2] = Frac(num, den);
        return s;
    }
    static Sym eps() {
        Sym s;
        s.c[1][1] = Frac(1);
        return s;
    }
    static Sym a2() {
        Sym s;
        s.c[2][1] = Frac(1);
        return s;
    }
    bool scalar_var() const {  // no eps/a2 component
        for (int k = 0; k < 3; ++k)
            if (!c[1][k].zero() || !c[2][k].zero()) return false;
        return true;
    }
    Sym operator+(const Sym& o) const {
        Sym r;
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) r.c[v][k] = c[v][k] + o.c[v][k];
        return r;
    }
    Sym operator-(const Sym& o) const {
        Sym r;
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) r.c[v][k] = c[v][k] - o.c[v][k];
        return r;
    }
    Sym operator*(const Sym& o) const {
        if (!scalar_var() && !o.scalar_var())
            throw std::logic_error("Sym: product of two variable-bearing values");
        Sym r;
        for (int v1 = 0; v1 < 3; ++v1)
            for (int k1 = 0; k1 < 3; ++k1) {
                if (c[v1][k1].zero()) continue;
                for (int v2 = 0; v2 < 3; ++v2)
                    for (int k2 = 0; k2 < 3; ++k2) {
                        if (o.c[v2][k2].zero()) continue;
                        int v = v1 + v2, k = k1 + k2 - 1;
                        if (v > 2 || k < 0 || k > 2)
                            throw std::logic_error("Sym: grading out of range");
                        r.c[v][k] = r.c[v][k] + c[v1][k1] * o.c[v2][k2];
                    }
            }
        return r;
    }
    // division by a pure rational*pi^k monomial
    Sym operator/(const Sym& o) const {
        int ov = -1, ok = -1;
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k)
                if (!o.c[v][k].zero()) {
                    if (ov >= 0) throw std::logic_error("Sym: division by a sum");
                    ov = v;
                    ok = k;
                }
        if (ov != 0) throw std::logic_error("Sym: division by a variable");
        Sym r;
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k) {
                if (c[v][k].zero()) continue;
                int kk = k - (ok - 1);
                if (kk < 0 || kk > 2) throw std::logic_error("Sym: grading out of range");
                r.c[v][kk] = c[v][k] / o.c[ov][ok];
            }
        return r;
    }
    bool equals_eps() const {
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k)
                if (!(c[v][k] == ((v == 1 && k == 1) ? Frac(1) : Frac(0)))) return false;
        return true;
    }
    bool equals_one() const {
        for (int v = 0; v < 3; ++v)
            for (int k = 0; k < 3; ++k)
                if (!(c[v][k] == ((v == 0 && k == 1) ? Frac(1) : Frac(0)))) return false;
        return true;
    }
};

}  // namespace

TEST_CASE("lyapunov constants, single-term cases") {
    CHECK(lyapunov_l2(RigidParams{0, 0, 0.4, -0.9, 1.7}) == 0.0);
    CHECK(lyapunov_l3(RigidParams{0, 0, 0.4, -0.9, 1.7}) == 0.0);
    CHECK(lyapunov_l2(RigidParams{1, 0, 0, 1, 0}) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(lyapunov_l3(RigidParams{1, 0, 0, 1, 0}) == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("one-cycle family: l2 = eps, l3 = 1 in exact rational-pi arithmetic") {
    Sym eps = Sym::eps(), a2 = Sym::a2();
    Sym b1(5), b2(1);
    Sym a1 = (Sym(1) + Sym(120) * a2 * Sym::pi() - Sym(82) * eps) / (Sym(74) * Sym::pi());
    Sym a3 = (Sym(-3) + Sym(10) * a2 * Sym::pi() + Sym(98) * eps) / (Sym(74) * Sym::pi());

    Sym l2 = Sym::pi(1, 2) * detail::l2_bracket(b1, b2, a1, a2, a3);
    Sym l3 = Sym(-1) * Sym::pi(1, 2) * detail::l3_bracket(b1, b2, a1, a2, a3);
    CHECK(l2.equals_eps());
    CHECK(l3.equals_one());
}

TEST_CASE("one-cycle family: floating-point l2, l3 for random (eps, a2)") {
    Rng rng(101);
    for (int i = 0; i < 50; ++i) {
        double eps = rng.uniform(-0.5, 0.5), a2 = rng.uniform(-2.0, 2.0);
        RigidParams p = build_hopf_example(eps, a2);
        CHECK(lyapunov_l2(p) == doctest::Approx(eps).epsilon(1e-13));
        CHECK(lyapunov_l3(p) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("center_condition strata") {
    CenterClass homog = center_condition(RigidParams{0, 0, 0.3, -0.8, 1.1});
    CHECK(homog.tag == CenterTag::HomogeneousCenter);

    CenterClass rev = center_condition(RigidParams{3, 0, 1, 0, 2});
    CHECK(rev.tag == CenterTag::ReversibleCenter);
    CHECK(rev.axis_b1 == 3.0);  // axis 3x = 0, i.e. the line x = 0
    CHECK(rev.axis_b2 == 0.0);

    CenterClass foc = center_condition(build_hopf_example(-0.05, 0.0));
    CHECK(foc.tag == CenterTag::NotCenter);
    CHECK(foc.l2 == doctest::Approx(-0.05).epsilon(1e-12));
    CHECK(foc.l3 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reversible stratum parametrization satisfies the center conditions") {
    Rng rng(103);
    for (int i = 0; i < 20; ++i) {
        RigidParams p = testsup::random_reversible_center(rng);
        CenterClass cc = center_condition(p);
        CHECK(cc.tag == CenterTag::ReversibleCenter);
        double n = max_norm(p);
        double tol = 1e-12 * (n * n + n * n * n * n);
        CHECK(std::fabs(lyapunov_l2(p)) <= tol);
        CHECK(std::fabs(lyapunov_l3(p)) <= tol);
    }
}

TEST_CASE("homogeneous stratum zeroes the lyapunov constants") {
    Rng rng(107);
    for (int i = 0; i < 20; ++i) {
        RigidParams p = testsup::random_homogeneous_center(rng, 1.5);
        CHECK(lyapunov_l2(p) == 0.0);
        CHECK(lyapunov_l3(p) == 0.0);
    }
}

TEST_CASE("planar first integral values and domain") {
    CHECK(first_integral_planar(RigidParams{0, 0, 0, 0, 0}, 1, 0) ==
          doctest::Approx(-1.0 / 3).epsilon(1e-15));
    CHECK(first_integral_planar(RigidParams{0, 0, 0, 1, 0}, 1, 0) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(first_integral_planar(RigidParams{0, 0, 1, 0, 0}, 0, 0), DomainError);
    CHECK_THROWS_AS(first_integral_planar(RigidParams{1, 0, 1, 0, 0}, 1, 0), DomainError);
}

TEST_CASE("planar first integral is conserved along an orbit") {
    // independent fixed-step RK4 on the planar field
    RigidParams p{0, 0, 1, -1, 2};
    RawParams raw = p.raw();
    auto f = [&](double, const std::array<double, 2>& s) -> std::array<double, 2> {
        auto [dx, dy] = eval_planar_field(raw, s[0], s[1]);
        return {dx, dy};
    };
    double h0 = first_integral_planar(p, 0.3, 0.0);
    std::array<double, 2> s{0.3, 0.0};
    double maxdrift = 0.0;
    int chunks = 64, steps_per = 4000;
    for (int cch = 0; cch < chunks; ++cch) {
        s = testsup::rk4<2>(f, 0.0, s, 2 * kPi / chunks, steps_per);
        maxdrift = std::max(maxdrift, std::fabs(first_integral_planar(p, s[0], s[1]) - h0));
    }
    CHECK(maxdrift <= 1e-7);
}

TEST_CASE("build_hopf_example coefficients at eps = a2 = 0") {
    RigidParams p = build_hopf_example(0, 0);
    CHECK(p.b1 == 5.0);
    CHECK(p.b2 == 1.0);
    CHECK(p.a1 == doctest::Approx(1.0 / (74 * kPi)).epsilon(1e-15));
    CHECK(p.a2 == 0.0);
    CHECK(p.a3 == doctest::Approx(-3.0 / (74 * kPi)).epsilon(1e-15));
}

TEST_CASE("hopf_a2_minimizing_discriminant gives D < 0 for eps < 0") {
    for (double eps : {-0.05, -0.01, -0.2}) {
        double a2 = hopf_a2_minimizing_discriminant(eps);
        RigidParams p = build_hopf_example(eps, a2);
        CHECK(discriminant(p) < 0.0);
    }
}

TEST_CASE("no-limit-cycle certificate") {
    CHECK(check_no_limit_cycles(RawParams{0, 0.7, 1, -0.4, 2, 0.9}));
    CHECK_FALSE(check_no_limit_cycles(RawParams{0, 0.7, 1, -0.4, -1, 0.9}));

    // the certificate only depends on the frame through a rotation, and any
    // two b1 = 0 frames differ by a half turn which flips all of A's signs
    Rng rng(109);
    for (int i = 0; i < 25; ++i) {
        RawParams base{0, rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                       rng.uniform(-1, 1), rng.uniform(-1, 1)};
        bool expect = check_no_limit_cycles(base);
        RawParams rotated = rotate_frame(base, RotationAngle::reduced(rng.uniform(0, 2 * kPi)));
        CHECK(check_no_limit_cycles(rotated) == expect);
    }
}

TEST_CASE("reversible centers: reflected time-reversed trajectories coincide") {
    Rng rng(113);
    IntegratorSettings s;
    for (int i = 0; i < 5; ++i) {
        RigidParams p = testsup::random_reversible_center(rng);
        double nn = std::hypot(p.b1, p.b2);
        double n1, n2;
        if (nn == 0.0) continue;
        n1 = p.b1 / nn;
        n2 = p.b2 / nn;
        auto reflect = [&](double x, double y) {
            double d = x * n1 + y * n2;
            return std::pair{x - 2 * d * n1, y - 2 * d * n2};
        };
        double x0 = 0.31, y0 = 0.12, T = 1.3;
        auto [rx, ry] = reflect(x0, y0);
        PlanarOrbit fwd = planar_orbit(p.raw(), rx, ry, T, s);
        PlanarOrbit bwd = planar_orbit(p.raw(), x0, y0, -T, s);
        REQUIRE_FALSE(fwd.escaped);
        REQUIRE_FALSE(bwd.escaped);
        auto [ex, ey] = reflect(bwd.x.back(), bwd.y.back());
        CHECK(fwd.x.back() == doctest::Approx(ex).epsilon(1e-7));
        CHECK(fwd.y.back() == doctest::Approx(ey).epsilon(1e-7));
    }
}
