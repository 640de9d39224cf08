#pragma once

// Compactly supported, nonnegative piecewise-linear functions: the concrete
// test class for the maximal-operator library. A repeated abscissa (allowed
// only at the declared peak) encodes a one-sided jump. All window integrals
// are exact via a prefix antiderivative.

#include <cstdint>
#include <string>
#include <vector>

namespace hlmax {

// One-sided evaluation convention at discontinuities.
enum class Side { minus, plus };

struct SegEval {
    double value = 0.0; // one-sided value of f at the query point
    double slope = 0.0; // slope of the piece on that side (0 outside support)
};

class PiecewiseLinearFn {
  public:
    // Validated construction; see make_plf.
    PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> values, int peak_index);

    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& values() const { return vs_; }
    int peak_index() const { return peak_index_; }
    bool has_jump() const { return jump_lo_ >= 0; }
    // Indices of the repeated abscissa pair when a jump is present, else -1.
    int jump_lo() const { return jump_lo_; }
    int jump_hi() const { return jump_hi_; }

    double support_lo() const { return xs_.front(); }
    double support_hi() const { return xs_.back(); }
    double support_radius() const;
    double peak_location() const { return xs_[static_cast<std::size_t>(peak_index_)]; }
    double total_mass() const { return pre_.back(); }
    double max_value() const;

    // One-sided evaluation (0 outside the support). The side flag only
    // matters at the peak jump; everywhere else both limits agree.
    double eval(double x, Side side = Side::plus) const;
    // Two-sided average (f(x+) + f(x-)) / 2.
    double mean_at(double x) const;

    // The linear piece immediately to the right / left of y, with its slope.
    // Outside the support both fields are 0. Node values are returned exactly.
    SegEval piece_right_of(double y) const;
    SegEval piece_left_of(double y) const;

    // Antiderivative P(u) = integral of f over (-inf, u]; exact per piece.
    double antiderivative(double u) const;
    // Exact integral over [a, b]; requires a <= b.
    double integral(double a, double b) const;

  private:
    std::vector<double> xs_, vs_;
    std::vector<double> slope_; // per piece i: (vs[i+1]-vs[i])/(xs[i+1]-xs[i]), 0 for zero width
    std::vector<double> pre_;   // prefix integrals: pre_[i] = integral up to xs_[i]
    int peak_index_ = 0;
    int jump_lo_ = -1, jump_hi_ = -1;
};

// Validating factory. Rejects: size mismatch or < 3 points, non-finite input,
// unsorted breakpoints, more than one repeated abscissa or one not at the
// declared peak, negative values, nonzero endpoint values.
PiecewiseLinearFn make_plf(const std::vector<double>& breakpoints,
                           const std::vector<double>& values,
                           int peak_index);

struct PeakShapeReport {
    bool is_peak_shaped = false;
    double peak_location = 0.0;
    // Most negative slope increment found on either side (0 if none).
    double max_convexity_violation = 0.0;
    bool positivity_ok = false;
};

// Discrete convexity check on each side of the peak separately (slopes
// nondecreasing left to right), plus nonnegativity.
PeakShapeReport is_peak_shaped(const PiecewiseLinearFn& f, double tol_convexity);

// Same verdict for a sampled curve (xs strictly increasing, no abscissa 0;
// the two sides are split at 0). Used for maximal-function profiles, which
// are positive at the ends and hence not representable as PiecewiseLinearFn.
PeakShapeReport peak_shape_of_samples(const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      double tol_convexity);

struct NormValue {
    double p = 1.0;
    double value = 0.0; // integral of |f|^p (exact per segment)
};

// Exact integral of |f|^p per segment: w*(v1^{p+1} - v0^{p+1})/((p+1)(v1-v0))
// for v0 != v1, else w*v0^p. Stable near v0 == v1. Requires p >= 1.
NormValue lp_norm_p(const PiecewiseLinearFn& f, double p);
// The L^p norm itself: (integral |f|^p)^{1/p}. The power integral and this
// accessor are kept separate; homogeneity holds for the root, degree p for
// the power.
double lp_norm(const PiecewiseLinearFn& f, double p);

// ---- builders ----

// Unit tent 1 - |x| on [-1, 1].
PiecewiseLinearFn tent();

// Indicator of [-half_width, half_width] with linear ramps of width `ramp`.
// Not peak-shaped (the down-jump off the peak breaks one-sided convexity);
// used for weak-type and near-indicator checks.
PiecewiseLinearFn ramp_indicator(double half_width = 1.0, double ramp = 1e-4);

// Symmetric interpolant of min(cap, |x|^{-1/p}) on a geometric abscissa grid
// from the tangency point x_c = cap^{-p} out to X = cap^{p^2} (where the value
// falls to cap^{-p}), capped near 0 and closed at the far end by tangent
// segments so that one-sided convexity is preserved exactly.
PiecewiseLinearFn truncated_power(double p, double cap, int n_points);

struct RandomPeakParams {
    int min_side_points = 11;  // breakpoints per side, excluding the peak
    int max_side_points = 17;
    double support_min = 0.6;  // per-side support length range
    double support_max = 2.5;
    double height_min = 0.8;   // side value-scale range
    double height_max = 3.0;
    // Probability of a jump at the peak. Default 0: a continuous peak keeps
    // the strict structural inequalities (discrete s' > 1) testable; the
    // side facing the lower one-sided limit of a jump pins its optimal
    // radius at |x| and the margin collapses to 0.
    double jump_probability = 0.0;
};

// Deterministic in seed. Each side samples a convex decreasing value curve
// (mixture of a linear ramp and a power cascade) on jittered geometric
// breakpoint distances with an exact zero endpoint, so discrete convexity
// holds with tolerance 0 by construction. The innermost breakpoint sits at
// ~4e-4 of the side length, placing a kink inside every small window --
// this is what makes the strict inequalities of the structural suite hold.
PiecewiseLinearFn random_peak_shaped(std::uint64_t seed,
                                     const RandomPeakParams& params = RandomPeakParams{});

} // namespace hlmax
