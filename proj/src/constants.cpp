#include "hlmax/constants.hpp"
#include "hlmax/roots.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hlmax {

double h_value(double p, double t) {
    if (!(p > 1.0)) throw std::invalid_argument("h_value: requires p > 1");
    if (!(t > 1.0)) throw std::invalid_argument("h_value: requires t > 1");
    const double e = (p - 1.0) / p;
    return (std::pow(t + 1.0, e) + std::pow(t - 1.0, e)) / (2.0 * e * t);
}

double tau_of_p(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("tau_of_p: requires p > 1");
    // G(t) = p ln((p+t)/(p-t)) - ln((t+1)/(t-1)) is strictly increasing on
    // (1, p), -inf at t -> 1+ and +inf at t -> p-; its root lies in (1, 1.2).
    auto G = [p](double t) {
        return p * std::log((p + t) / (p - t)) - std::log((t + 1.0) / (t - 1.0));
    };
    const double span = p - 1.0;
    double a = 1.0 + span * 1e-14;
    double b = p - span * 1e-12;
    if (p > 1.2) b = std::min(b, 1.2000000000000002); // root is always below 1.2
    if (G(a) >= 0.0) a = 1.0 + span * 1e-300;         // pathological rounding guard
    return bisect_root(G, a, b);
}

double c_p(double p) {
    const double tau = tau_of_p(p);
    const double route_a = h_value(p, tau); // stationary-point route
    // Direct maximization route over an interval certain to contain tau.
    auto h = [p](double t) { return h_value(p, t); };
    const double hi = std::min(p - (p - 1.0) * 1e-9, 1.5);
    const auto [t_star, route_b] = golden_max(h, 1.0 + 1e-12, hi, 1e-14);
    (void)t_star;
    if (std::fabs(route_a - route_b) > 1e-10 * route_a)
        throw std::logic_error("c_p: stationary and direct routes disagree");
    return route_a;
}

double beta_of_alpha(double p, double alpha) {
    if (!(p > 1.0)) throw std::invalid_argument("beta_of_alpha: requires p > 1");
    if (!(alpha > 0.5 && alpha < 1.0))
        throw std::invalid_argument("beta_of_alpha: requires alpha in (1/2, 1)");
    const double rho = std::pow((1.0 - alpha) / alpha, 1.0 / (p - 1.0));
    return (1.0 - rho) / (1.0 + rho);
}

double alpha0_of_p(double p) {
    const double tau = tau_of_p(p);
    return 1.0 / (1.0 + std::pow((p - tau) / (p + tau), p - 1.0));
}

RValue r_of_alpha(double p, double alpha) {
    const double beta = beta_of_alpha(p, alpha);
    const double om = std::pow(1.0 - beta, p);
    const double op = std::pow(1.0 + beta, p);
    RValue v;
    v.gamma1 = alpha * om - (1.0 - alpha) * op;
    v.gamma2 = alpha * om + (1.0 - alpha) * op;
    v.r = v.gamma1 + p * beta * v.gamma2;
    // Closed form: 2^p (p-1) (1-alpha) (1-rho) / (1+rho)^p.
    const double rho = std::pow((1.0 - alpha) / alpha, 1.0 / (p - 1.0));
    const double closed =
        std::pow(2.0, p) * (p - 1.0) * (1.0 - alpha) * (1.0 - rho) / std::pow(1.0 + rho, p);
    // Near alpha = 1/2 the gamma route cancels catastrophically (r -> 0 while
    // alpha*om and (1-alpha)*op stay O(1)), so its absolute rounding floor is
    // eps * gamma2 * (1 + p beta); compare against that, not the cancelled
    // result.
    const double scale = v.gamma2 * (1.0 + p * beta) + std::fabs(closed);
    if (std::fabs(v.r - closed) > 1e-12 * scale)
        throw std::logic_error("r_of_alpha: gamma route and closed form disagree");
    return v;
}

CertifyResult certify_constants(double p, double tol_gap, std::size_t alpha_grid_size,
                                Exec exec, int threads) {
    CertifyResult out;
    if (!(p > 1.0)) throw std::invalid_argument("certify_constants: requires p > 1");
    if (alpha_grid_size < 3)
        throw std::invalid_argument("certify_constants: alpha grid too small");

    ConstantsRecord& rec = out.record;
    rec.p = p;
    rec.tau = tau_of_p(p);
    rec.c_p = c_p(p);
    rec.alpha0 = alpha0_of_p(p);
    rec.beta0 = beta_of_alpha(p, rec.alpha0);
    rec.r_at_alpha0 = r_of_alpha(p, rec.alpha0).r;
    rec.cross_check_gap = std::fabs(rec.r_at_alpha0 - std::pow(rec.c_p, -p));

    AlphaSweep& sw = out.sweep;
    sw.p = p;
    const std::size_t n = alpha_grid_size;
    sw.alphas.resize(n);
    sw.r_values.resize(n);
    // Uniform interior grid of (1/2, 1): alpha_j = 1/2 + (j+1)/(n+1) * 1/2.
    for (std::size_t j = 0; j < n; ++j)
        sw.alphas[j] = 0.5 + 0.5 * static_cast<double>(j + 1) / static_cast<double>(n + 1);

    // Exceptions cannot leave an OpenMP region; capture and rethrow after.
    std::exception_ptr fill_error = nullptr;
    auto fill = [&](std::size_t j) {
        try {
            sw.r_values[j] = r_of_alpha(p, sw.alphas[j]).r;
        } catch (...) {
            sw.r_values[j] = 0.0;
#ifdef _OPENMP
#pragma omp critical(hlmax_constants_fill_error)
#endif
            if (!fill_error) fill_error = std::current_exception();
        }
    };
#ifdef _OPENMP
    if (exec == Exec::parallel) {
        const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long j = 0; j < static_cast<long long>(n); ++j)
            fill(static_cast<std::size_t>(j));
    } else
#else
    (void)exec;
    (void)threads;
#endif
    {
        for (std::size_t j = 0; j < n; ++j) fill(j);
    }
    if (fill_error) std::rethrow_exception(fill_error);

    std::size_t jmax = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (sw.r_values[j] > sw.r_values[jmax]) jmax = j;
    sw.argmax_alpha = sw.alphas[jmax];
    sw.max_r = sw.r_values[jmax];

    const double step = sw.alphas[1] - sw.alphas[0];
    out.ok = true;
    if (rec.cross_check_gap > tol_gap) {
        out.ok = false;
        out.failure = "cross-check gap |r(alpha0) - c_p^{-p}| exceeds tolerance";
    } else if (sw.max_r > rec.r_at_alpha0 + 1e-12) {
        out.ok = false;
        out.failure = "alpha sweep found r above r(alpha0)";
    } else if (std::fabs(sw.argmax_alpha - rec.alpha0) > step * (1.0 + 1e-9)) {
        out.ok = false;
        out.failure = "sweep argmax not within one grid step of alpha0";
    }
    return out;
}

} // namespace hlmax
