#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "rigid/errors.hpp"
#include "rigid/sphere.hpp"
#include "sphere_internal.hpp"

namespace rigid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPsiTol = 1e-9;        // bisection target for the half-turn defect
constexpr double kResidualTol = 1e-6;   // closure / antipodal-symmetry acceptance
constexpr double kLegTimeLimit = 100.0; // per-crossing integration budget
constexpr int kGridStart = 64;
constexpr int kGridCap = 1024;

double wrap_pi(double x) {
    double w = std::remainder(x, kTwoPi);
    return w;  // (-pi, pi]
}

SphereState equator_point(double alpha) {
    return {std::cos(alpha), std::sin(alpha), 0.0};
}

// Successive equator crossings reached from a regular equator start; each leg
// re-arms the crossing detector from the previous crossing point.
struct LegRun {
    std::vector<detail::CrossingEvent> crossings;  // cumulative times
    bool complete = false;                         // reached the requested count
};

template <class Sink>
LegRun run_crossings(const RigidParams& p, const SphereState& z0, int count,
                     const IntegratorSettings& s, Sink&& sink) {
    LegRun out;
    SphereState z = z0;
    double t = 0.0;
    for (int leg = 0; leg < count; ++leg) {
        auto ev = detail::run_sphere(p, z, t, t + kLegTimeLimit, s, true, sink);
        if (!ev) return out;
        out.crossings.push_back(*ev);
        z = ev->state;
        t = ev->time;
    }
    out.complete = true;
    return out;
}

// Half-turn defect of the m-th crossing: zero iff the m-th crossing lands on
// the antipode of alpha.
std::optional<double> psi_defect(const RigidParams& p, double alpha, int m,
                                 const IntegratorSettings& s) {
    LegRun run = run_crossings(p, equator_point(alpha), m, s, detail::NullSink{});
    if (!run.complete) return std::nullopt;
    return wrap_pi(run.crossings.back().alpha - alpha - std::numbers::pi);
}

struct ArcSample {
    double alpha = 0;
    std::optional<double> psi;
};

struct Bracket {
    double lo = 0, hi = 0;
    double psi_lo = 0, psi_hi = 0;
};

// Samples psi on the open arc and collects sign-change brackets, doubling the
// grid until the bracket count is stable between refinements (or the cap).
// Also notes sign changes across NoReturn gaps (heteroclinic indicator).
struct ArcScan {
    std::vector<Bracket> brackets;
    bool heteroclinic_gap = false;
};

ArcScan scan_arc(const RigidParams& p, double arc_lo, double arc_len, int m,
                 const IntegratorSettings& s) {
    ArcScan out;
    std::size_t prev_count = static_cast<std::size_t>(-1);
    for (int n = kGridStart; n <= kGridCap; n *= 2) {
        std::vector<ArcSample> samples(n);
        for (int i = 0; i < n; ++i) {
            double a = arc_lo + arc_len * (i + 0.5) / n;
            samples[i] = {a, psi_defect(p, a, m, s)};
        }
        std::vector<Bracket> brackets;
        bool gap = false;
        const ArcSample* last_valid = nullptr;
        bool gap_since_valid = false;
        for (const auto& smp : samples) {
            if (!smp.psi) {
                gap_since_valid = last_valid != nullptr;
                continue;
            }
            if (last_valid) {
                double p0 = *last_valid->psi, p1 = *smp.psi;
                bool sign_change = std::signbit(p0) != std::signbit(p1) &&
                                   std::fabs(p0 - p1) < std::numbers::pi;
                if (sign_change) {
                    if (gap_since_valid)
                        gap = true;  // sign change bracketing a NoReturn cell
                    else
                        brackets.push_back({last_valid->alpha, smp.alpha, p0, p1});
                }
            }
            last_valid = &smp;
            gap_since_valid = false;
        }
        out.brackets = std::move(brackets);
        out.heteroclinic_gap = out.heteroclinic_gap || gap;
        if (out.brackets.size() == prev_count) break;
        prev_count = out.brackets.size();
    }
    return out;
}

std::optional<double> bisect_bracket(const RigidParams& p, Bracket b, int m,
                                     const IntegratorSettings& s) {
    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (b.lo + b.hi);
        auto pm = psi_defect(p, mid, m, s);
        if (!pm) return std::nullopt;  // NoReturn inside the bracket
        if (std::fabs(*pm) <= kPsiTol) return mid;
        if (std::signbit(*pm) == std::signbit(b.psi_lo)) {
            b.lo = mid;
            b.psi_lo = *pm;
        } else {
            b.hi = mid;
            b.psi_hi = *pm;
        }
        if (b.hi - b.lo <= 1e-13) return std::nullopt;  // separatrix-steep, reject
    }
    return std::nullopt;
}

double state_distance(const SphereState& a, const SphereState& b) {
    return std::sqrt((a.z1 - b.z1) * (a.z1 - b.z1) + (a.z2 - b.z2) * (a.z2 - b.z2) +
                     (a.z3 - b.z3) * (a.z3 - b.z3));
}

// Full-orbit validation of a candidate crossing angle: 2m legs, antipodal
// residual at leg m, closure residual at leg 2m.
std::optional<SpherePeriodicOrbit> validate_candidate(const RigidParams& p, double alpha,
                                                      int m, const IntegratorSettings& s) {
    SpherePeriodicOrbit orbit;
    SphereState z0 = equator_point(alpha);
    orbit.t.push_back(0.0);
    orbit.samples.push_back(z0);
    auto sink = [&](double t, const SphereState& z) {
        orbit.t.push_back(t);
        orbit.samples.push_back(z);
    };
    LegRun run = run_crossings(p, z0, 2 * m, s, sink);
    if (!run.complete) return std::nullopt;

    const detail::CrossingEvent& half = run.crossings[m - 1];
    const detail::CrossingEvent& full = run.crossings[2 * m - 1];
    orbit.symmetry_residual =
        state_distance(half.state, SphereState{-z0.z1, -z0.z2, -z0.z3});
    orbit.closure_residual = state_distance(full.state, z0);
    orbit.period = full.time;
    for (const auto& ev : run.crossings) orbit.equator_crossings.push_back(ev.alpha);
    if (orbit.symmetry_residual > kResidualTol || orbit.closure_residual > kResidualTol)
        return std::nullopt;
    return orbit;
}

bool same_orbit(const SpherePeriodicOrbit& a, double alpha) {
    for (double c : a.equator_crossings)
        if (std::fabs(wrap_pi(c - alpha)) <= 1e-6) return true;
    return false;
}

}  // namespace

std::optional<EquatorCrossing> equator_crossing_map(const RigidParams& p, double alpha,
                                                    const IntegratorSettings& s,
                                                    double t_max) {
    s.validate();
    if (!std::isfinite(alpha) || !(t_max > 0))
        throw InvalidInput("equator_crossing_map: bad alpha or t_max");
    double speed = equator_normal_speed(p, alpha);
    double scale = std::max({std::fabs(p.a1), std::fabs(p.a2), std::fabs(p.a3)});
    if (std::fabs(speed) <= 1e-12 * scale)
        throw CriticalStart("equator_crossing_map: alpha is a critical direction");

    auto ev = detail::run_sphere(p, equator_point(alpha), 0.0, t_max, s, true,
                                 detail::NullSink{});
    if (!ev) return std::nullopt;
    return EquatorCrossing{ev->alpha, ev->time};
}

OrbitSearchResult find_symmetric_periodic_orbit(const RigidParams& p,
                                                const IntegratorSettings& s) {
    s.validate();
    if (p.degenerate())
        throw DegenerateFamily("find_symmetric_periodic_orbit: Riccati case");
    if (center_condition(p).tag != CenterTag::NotCenter)
        throw CenterFamily("find_symmetric_periodic_orbit: centers have a whole annulus");

    // arc endpoints: the critical directions and their antipodes
    std::vector<double> angles;
    for (const InfinityPoint& ip : classify_infinity(p)) {
        double a = ip.equator_angle();
        for (double cand : {a, a + std::numbers::pi}) {
            double w = std::fmod(cand, kTwoPi);
            if (w < 0) w += kTwoPi;
            angles.push_back(w);
        }
    }
    std::sort(angles.begin(), angles.end());

    OrbitSearchResult result;
    bool heteroclinic = false;
    for (int m : {1, 3}) {
        for (std::size_t i = 0; i < angles.size(); ++i) {
            double lo = angles[i];
            double hi = i + 1 < angles.size() ? angles[i + 1] : angles[0] + kTwoPi;
            double len = hi - lo;
            if (len <= 1e-9) continue;
            ArcScan scan = scan_arc(p, lo, len, m, s);
            heteroclinic = heteroclinic || scan.heteroclinic_gap;
            for (const Bracket& b : scan.brackets) {
                auto root = bisect_bracket(p, b, m, s);
                if (!root) continue;
                bool dup = false;
                for (const auto& orb : result.orbits) dup = dup || same_orbit(orb, *root);
                if (dup) continue;
                auto orbit = validate_candidate(p, *root, m, s);
                if (orbit) result.orbits.push_back(std::move(*orbit));
            }
        }
        if (!result.orbits.empty()) break;  // 2-crossing orbits settle the search
    }

    if (!result.orbits.empty())
        result.status = OrbitSearchStatus::Found;
    else if (heteroclinic)
        result.status = OrbitSearchStatus::HeteroclinicSuspected;
    else
        result.status = OrbitSearchStatus::NotFound;
    return result;
}

}  // namespace rigid
