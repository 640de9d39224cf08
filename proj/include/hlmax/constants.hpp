#pragma once
// Sharp L^p constants for the centered Hardy-Littlewood maximal operator on
// peak-shaped functions, and the one-parameter variational family that attains
// them. Every derived quantity is computed by two independent routes where a
// second route exists; routes disagreeing beyond tolerance is a hard error,
// never silently reconciled.

#include "hlmax/numeric.hpp"

#include <string>
#include <vector>

namespace hlmax {

// h(t) = ((t+1)^((p-1)/p) + (t-1)^((p-1)/p)) / (2 ((p-1)/p) t), defined for t > 1.
// c_p = sup_{t>1} h(t).
double h_value(double p, double t);

// The unique root tau in (1, p) of
//   G(t) = p ln((p+t)/(p-t)) - ln((t+1)/(t-1)),
// which is the stationary point of h. Requires p > 1.
double tau_of_p(double p);

// c_p by two routes: h(tau_of_p(p)) and a direct one-dimensional maximization
// of h. Disagreement beyond 1e-10 relative is a logic error.
double c_p(double p);

// beta(alpha) = (1 - rho)/(1 + rho) with rho = ((1-alpha)/alpha)^(1/(p-1)),
// for alpha in (1/2, 1).
double beta_of_alpha(double p, double alpha);

// alpha0 = 1 / (1 + ((p - tau)/(p + tau))^(p-1)).
double alpha0_of_p(double p);

struct RValue {
    double r;      // gamma1 + p * beta * gamma2
    double gamma1; // alpha (1-beta)^p - (1-alpha) (1+beta)^p
    double gamma2; // alpha (1-beta)^p + (1-alpha) (1+beta)^p
};

// r(alpha) by the gamma route and by the closed form
//   2^p (p-1) (1-alpha) (1-rho) / (1+rho)^p;
// the two must agree to 1e-12 relative.
RValue r_of_alpha(double p, double alpha);

struct ConstantsRecord {
    double p = 0.0;
    double tau = 0.0;
    double c_p = 0.0;
    double alpha0 = 0.0;
    double beta0 = 0.0;
    double r_at_alpha0 = 0.0;
    double cross_check_gap = 0.0; // | r(alpha0) - c_p^{-p} |
};

struct AlphaSweep {
    double p = 0.0;
    std::vector<double> alphas;
    std::vector<double> r_values;
    double argmax_alpha = 0.0;
    double max_r = 0.0;
};

struct CertifyResult {
    ConstantsRecord record;
    AlphaSweep sweep;
    bool ok = false;
    std::string failure; // empty when ok
};

// Computes the full constants chain for one p and certifies:
//   |r(alpha0) - c_p^{-p}| <= tol_gap,
//   r(alpha_j) <= r(alpha0) + 1e-12 on a uniform interior alpha grid,
//   the grid argmax lies within one grid step of alpha0.
CertifyResult certify_constants(double p, double tol_gap = 1e-9,
                                std::size_t alpha_grid_size = 10000,
                                Exec exec = Exec::serial, int threads = 0);

} // namespace hlmax
