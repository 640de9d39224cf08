#pragma once
// Variational certification layer: the integrand F, the windowed functional I,
// the exact Euler-Lagrange solution s0 = -beta g/g', and the inequality chain
//   I(s) = ||f||_p^p  >=  I(s0) = r(alpha) ||g||_p^p
// evaluated on explicit windows with the boundary terms of the truncated
// integrals carried as signed corrections, never hidden.

#include "hlmax/constants.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/piecewise_linear.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hlmax {

struct VariationalConfig {
    double p = 2.0;
    double alpha = 0.0; // <= 0 requests alpha0_of_p(p)
    // Window [-outer,-inner] U [inner,outer]; non-positive entries resolve to
    // inner = 1e-7 R, outer = 12 R with R the support radius. The tiny inner
    // cutoff matters: the window-edge maps x -> x +/- s(x) leave an uncovered
    // hole of half-width ~ (s'(0) - 1) * inner around the peak, and s'(0) is
    // large for flat-peaked functions.
    GridSpec grid{2000, 0.0, 0.0};
    double budget = 0.005; // relative quadrature budget for the identities
};

// F(x,y,z) = alpha (g + g' y)^p (z+1) + (1-alpha) (g - g' y)^p (z-1),
// with g = gx, g' = gpx. Admissible strip: |y| <= g/|g'| (closed). Bases
// below -1e-9 g are rejected as a domain error; bases in [-1e-9 g, 0) are
// rounding images of an exact boundary zero and enter as 0.
double F_eval(double p, double alpha, double gx, double gpx, double y, double z);
// Partial derivatives in the second (y) and third (z) slots.
double F_d2(double p, double alpha, double gx, double gpx, double y, double z);
double F_d3(double p, double alpha, double gx, double gpx, double y);

struct S0Result {
    std::vector<double> s0;             // -beta g/g' per grid point
    std::vector<std::size_t> excluded;  // indices where g' == 0 (never clamped)
};
S0Result s0_of(const MaximalProfile& prof, double p, double alpha);

// Discrete derivative of y on the grid x, taken separately on the negative
// and positive halves (centered in each side's interior, one-sided at the
// four side edges). Sizes must match and split evenly at the sign change.
std::vector<double> side_derivative(const std::vector<double>& x, const std::vector<double>& y);

// Trapezoid quadrature of F(x, phi(x), phi'(x)) over both window components,
// summed pairwise per side for order determinism. Throws std::domain_error
// naming the grid index if (phi, phi') leaves the admissible strip.
double functional_I(const MaximalProfile& prof, const std::vector<double>& phi,
                    const std::vector<double>& phi_prime, double p, double alpha);

struct TransportReport {
    double lhs_plus = 0.0;            // integral of (g + g' s)^p (s' + 1)
    double lhs_minus = 0.0;           // integral of (g - g' s)^p (s' - 1)
    double rhs = 0.0;                 // ||f||_p^p
    double pointwise_plus_max = 0.0;  // max |f(x + s) - (g + g' s)|
    double pointwise_minus_max = 0.0; // max |f(x - s) - (g - g' s)|
};
// Change-of-variable identities transporting ||f||_p^p through the window
// edge maps x -> x + s(x) and x -> x - s(x), plus their pointwise forms.
TransportReport check_transport_identities(const PiecewiseLinearFn& f, const MaximalProfile& prof,
                                           double p);

struct ElResult {
    std::vector<double> residual; // p g'' phi [a (g+g'phi)^{p-1} - (1-a)(g-g'phi)^{p-1}]
    double max_abs = 0.0;
    double scale = 0.0; // same expression with the difference made additive
};
// Euler-Lagrange residual of the reduced equation; at phi = s0 the bracket
// cancels algebraically, so max_abs is rounding-only regardless of g''.
ElResult el_residual(const MaximalProfile& prof, const std::vector<double>& phi, double p,
                     double alpha);

struct ConvexityResult {
    std::vector<double> gap; // [F(s,s') - F(s0,s0')] - [d2F (s-s0) + d3F (s'-s0')]
    double min_gap = 0.0;
    double scale = 0.0;       // max term magnitude entering the subtraction
    double d23_bracket = 0.0; // |alpha (1-b)^{p-1} - (1-alpha)(1+b)^{p-1}|
};
ConvexityResult check_pointwise_convexity(const MaximalProfile& prof,
                                          const std::vector<double>& s,
                                          const std::vector<double>& s_prime,
                                          const std::vector<double>& s0,
                                          const std::vector<double>& s0_prime, double p,
                                          double alpha);

struct VariationalReport {
    VariationalConfig cfg; // fully resolved (alpha and window filled in)
    MaximalProfile prof;
    std::vector<double> s0, s_prime, s0_prime;
    std::vector<double> F_at_s, F_at_s0, gap, el;

    double I_s = 0.0;
    double I_s0 = 0.0;
    double f_norm_p = 0.0;  // exact ||f||_p^p
    double g_norm_p = 0.0;  // windowed quadrature of g^p
    double r_alpha = 0.0;
    double r_g_norm = 0.0;  // r(alpha) * g_norm_p

    // Signed window corrections: the truncated integrals satisfy
    //   I(s0) = r ||g||_p^p(window) + corr_id
    //   I(s) - I(s0) >= corr_chain   (up to quadrature error)
    // where corr_id sums gamma2 beta g^{p+1}/g' and corr_chain sums
    // gamma2 g^p (s - s0) over the four window edges with orientation signs.
    double corr_id = 0.0;
    double corr_chain = 0.0;
    double boundary_term_a = 0.0; // |gamma2 beta g^{p+1}/g'| at the inner edge
    double boundary_term_d = 0.0; // same magnitude at the outer edge

    double el_residual_max = 0.0;
    double el_scale = 0.0;
    double pointwise_gap_min = 0.0;
    double gap_scale = 0.0;
    double d23_bracket = 0.0;

    bool ok_identity_s = false;  // |I_s - f_norm_p| <= budget f_norm_p
    bool ok_identity_s0 = false; // |I_s0 - (r_g_norm + corr_id)| <= budget |r_g_norm|
    bool ok_chain = false;       // I_s - I_s0 - corr_chain >= -budget (|I_s|+|I_s0|)
    bool ok_el = false;          // el_residual_max <= 1e-9 el_scale
    bool ok_gap = false;         // pointwise_gap_min >= -1e-10 gap_scale
    bool ok_bracket = false;     // d23_bracket <= 1e-15
    bool ok = false;
    std::string failure; // first failed check, empty when ok
};

// Full certification for one function: builds the profile, evaluates both
// identities with their boundary corrections, the Euler-Lagrange residual at
// s0, and the pointwise convexity gap.
VariationalReport certify_chain(const PiecewiseLinearFn& f, const VariationalConfig& cfg,
                                Exec exec = Exec::serial, int threads = 0);

} // namespace hlmax
