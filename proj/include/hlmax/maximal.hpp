#pragma once

// Exact evaluation of the centered maximal operator for piecewise-linear
// functions, profile construction (g, delta, s, g'), structural checks,
// weak-type ratios, and the analytic kernel for pure power functions.

#include "hlmax/numeric.hpp"
#include "hlmax/piecewise_linear.hpp"

#include <string>
#include <vector>

namespace hlmax {

struct WindowAverage {
    double x = 0.0;
    double t = 0.0;
    double value = 0.0;
};

// Window average (1/2t) * integral of f over [x-t, x+t]; at t = 0 the
// two-sided average of the one-sided limits. Requires t >= 0.
WindowAverage xi(const PiecewiseLinearFn& f, double x, double t);

struct MaximalPoint {
    double g = 0.0;     // sup over t >= 0 of the window average
    double delta = 0.0; // LARGEST maximizing radius (ties resolved upward)
};

// Exact maximizer: the radius axis is split at the event radii |b - x| over
// breakpoints b. On each cell the window integral is the exact quadratic
// I(t_k + u) = I_k + B u + C u^2/2 with B = f((x+t_k)+) + f((x-t_k)-) and
// C = m_right - m_left (incremental form: stable even when breakpoints and
// centers differ by many orders of magnitude). Candidates: all cell
// endpoints, the interior stationary radius when it lies strictly inside a
// cell, and t = 0 with the one-sided average value. Candidates whose values
// are within tie_rel (relative) of the maximum tie; the largest radius wins.
// The default tie is exact equality: a positive tolerance can promote an
// event radius lying measurably away from a locally quadratic maximum, which
// perturbs the maximizer identities by O(sqrt(tie)) rather than rounding.
MaximalPoint maximal_at(const PiecewiseLinearFn& f, double x, double tie_rel = 0.0);

struct GridSpec {
    int n_per_side = 600;
    double inner = 0.0; // <= 0: auto, 1e-3 * support radius
    double outer = 0.0; // <= 0: auto, 8 * support radius
};

struct MaximalProfile {
    std::vector<double> x;      // symmetric geometric grid, ascending, 0 excluded
    std::vector<double> g;      // maximal function values
    std::vector<double> delta;  // largest maximizing radii
    std::vector<double> s;      // signed radius: +delta for x > 0, -delta for x < 0
    std::vector<double> gprime; // exact (f(x+delta) - f(x-delta)) / (2 delta)
    GridSpec spec_used;         // resolved grid (inner/outer filled in)
    double tie_tol = 0.0;       // exact-value ties only (largest radius wins)
    std::string source;         // identity of the sampled function
};

// Per-point maximal_at over a symmetric geometric grid; gprime from the
// exact identity at the maximizer (one-sided limits taken into the window),
// never from finite differences.
MaximalProfile maximal_profile(const PiecewiseLinearFn& f, GridSpec spec,
                               Exec exec = Exec::serial, int threads = 0);

struct StructuralCheckReport {
    // max over the grid of |g - (f(x+delta) + f(x-delta))/2|
    double avg_identity_residual = 0.0;
    // max over the grid of |gprime - centered difference of g| (discretization
    // diagnostic; the exact formula is the trusted value)
    double slope_identity_residual = 0.0;
    // min over same-side neighbors of discrete s' - 1
    double s_slope_margin = 0.0;
    // peak-shape verdict for the sampled maximal function
    PeakShapeReport mf_peakshape;
    // extras used by the gates:
    double delta_margin_min = 0.0;    // min of delta - |x|
    double xps_increasing_min = 0.0;  // min increment of x + s(x)
    double xms_decreasing_min = 0.0;  // min decrement of x - s(x)
};

StructuralCheckReport structural_checks(const PiecewiseLinearFn& f, const MaximalProfile& prof);

// lambda * |{Mf > lambda}| / ||f||_1 per lambda. Requires unimodal f (the
// level set is then an interval); endpoints by monotone bisection seeded
// from the profile and refined with maximal_at. lambda <= 0 rejected;
// lambda >= sup Mf gives 0.
std::vector<double> weak_type_ratios(const PiecewiseLinearFn& f, const MaximalProfile& prof,
                                     const std::vector<double>& lambdas);

// ---- analytic kernel for pure powers f(u) = |u|^{-1/p} ----

// Window average of the pure power at center x != 0, radius t >= 0 (closed
// forms on both sides of t = |x|, continuous at the splice).
double power_xi(double p, double x, double t);

struct PowerSup {
    double sup = 0.0;    // sup over t of the window average
    double t_star = 0.0; // its maximizer
};

// Golden-section maximization over the outer branch (the inner branch is
// increasing, so the supremum sits at t > |x|).
PowerSup power_sup(double p, double x);

} // namespace hlmax
