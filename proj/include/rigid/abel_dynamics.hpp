#pragma once

// Numerical engine for r' = B(theta) r^2 + A(theta) r^4: blow-up-aware
// integration over theta, the 2*pi return map with variational derivative,
// and limit-cycle detection. Planar periodic orbits of the rigid system are
// exactly the positive fixed points of the return map, since theta' = 1.

#include <optional>
#include <vector>

#include "rigid/core.hpp"

namespace rigid {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.031415926535897934;  // pi/100
    double r_escape = 1e6;  // radius above which the solution is declared escaping

    void validate() const;  // throws InvalidInput
};

struct ReturnMapResult {
    enum class Outcome { Value, Escape };

    Outcome outcome = Outcome::Value;
    double r_end = 0;         // Outcome::Value
    double theta_escape = 0;  // Outcome::Escape: first theta with r > r_escape
    std::optional<double> derivative;  // d r_end / d r0, when requested

    bool escaped() const { return outcome == Outcome::Escape; }
};

// Adaptive integration of the Abel equation from (theta0, r0) to theta1.
// The quartic right-hand side admits finite-theta blow-up; escape is a
// first-class outcome, not an error. Throws InvalidInput for r0 < 0,
// theta0 >= theta1 or non-finite input.
ReturnMapResult integrate_abel(const AbelCoeffs& c, double r0, double theta0, double theta1,
                               const IntegratorSettings& s);

// integrate_abel over [0, 2*pi], with the variational equation
// v' = (2 B r + 4 A r^3) v, v(0) = 1 integrated alongside to fill
// `derivative`.
ReturnMapResult return_map(const AbelCoeffs& c, double r0, const IntegratorSettings& s);

struct LimitCycle {
    double r_star = 0;
    double multiplier = 0;  // return-map derivative at r_star
};

struct LimitCycleSet {
    std::vector<LimitCycle> cycles;          // isolated (hyperbolic) cycles, ascending r
    std::vector<LimitCycle> non_hyperbolic;  // |multiplier - 1| <= 1e-6: annulus candidates
    int escaped_cells = 0;
    double r_max_searched = 0;
    int grid_n = 0;
};

// Scans d(r) = return_map(r) - r on the grid r_k = k r_max / grid_n,
// bisecting each sign change to |d| <= 1e-10. Fixed points with
// |multiplier - 1| <= 1e-6 are excluded from the isolated list (possible
// annulus members). Escaping cells are skipped, not errors.
LimitCycleSet find_limit_cycles(const AbelCoeffs& c, double r_max, int grid_n,
                                const IntegratorSettings& s);

struct PlanarOrbit {
    std::vector<double> t;  // elapsed planar time (= elapsed theta)
    std::vector<double> x, y;
    bool escaped = false;
    double theta_escape = 0;  // meaningful when escaped
};

// Trajectory of the planar system through (x0, y0) for time t1 (may be
// negative). Since theta' = 1 the Abel equation is integrated with theta as
// time and mapped back through x = r cos(theta), y = r sin(theta); samples
// are taken at uniform theta steps no wider than s.max_step. Escape is
// reported as a truncated trajectory.
PlanarOrbit planar_orbit(const RawParams& p, double x0, double y0, double t1,
                         const IntegratorSettings& s);

}  // namespace rigid
