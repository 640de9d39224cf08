#include "hlmax/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hlmax {

namespace {

// Raise a window-edge base to a power. Bases are g +- g' y; on admissible
// inputs they are >= 0 exactly, but boundary points (where f vanishes at a
// window edge) land at 0 up to rounding, so a thin negative band maps to 0.
double edge_pow(double base, double gx, double e) {
    if (base < -1e-9 * gx)
        throw std::domain_error("F_eval: y outside the admissible strip |y| <= g/|g'|");
    return std::pow(std::max(base, 0.0), e);
}

std::size_t side_split(const std::vector<double>& x) {
    std::size_t split = 0;
    while (split < x.size() && x[split] < 0.0) ++split;
    if (split < 2 || split + 2 > x.size())
        throw std::invalid_argument("expected a two-sided grid with >= 2 points per side");
    return split;
}

double trapezoid_side(const std::vector<double>& x, const std::vector<double>& v, std::size_t lo,
                      std::size_t hi) {
    std::vector<double> terms;
    terms.reserve(hi - lo - 1);
    for (std::size_t i = lo; i + 1 < hi; ++i)
        terms.push_back(0.5 * (v[i] + v[i + 1]) * (x[i + 1] - x[i]));
    return pairwise_sum(terms);
}

double trapezoid_two_sided(const std::vector<double>& x, const std::vector<double>& v) {
    const std::size_t split = side_split(x);
    return trapezoid_side(x, v, 0, split) + trapezoid_side(x, v, split, x.size());
}

} // namespace

double F_eval(double p, double alpha, double gx, double gpx, double y, double z) {
    const double bp = gx + gpx * y;
    const double bm = gx - gpx * y;
    return alpha * edge_pow(bp, gx, p) * (z + 1.0) + (1.0 - alpha) * edge_pow(bm, gx, p) * (z - 1.0);
}

double F_d2(double p, double alpha, double gx, double gpx, double y, double z) {
    const double bp = gx + gpx * y;
    const double bm = gx - gpx * y;
    return p * gpx *
           (alpha * edge_pow(bp, gx, p - 1.0) * (z + 1.0) -
            (1.0 - alpha) * edge_pow(bm, gx, p - 1.0) * (z - 1.0));
}

double F_d3(double p, double alpha, double gx, double gpx, double y) {
    const double bp = gx + gpx * y;
    const double bm = gx - gpx * y;
    return alpha * edge_pow(bp, gx, p) + (1.0 - alpha) * edge_pow(bm, gx, p);
}

S0Result s0_of(const MaximalProfile& prof, double p, double alpha) {
    const double beta = beta_of_alpha(p, alpha);
    S0Result out;
    out.s0.resize(prof.x.size(), 0.0);
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        if (prof.gprime[i] == 0.0) {
            out.excluded.push_back(i);
            continue;
        }
        out.s0[i] = -beta * prof.g[i] / prof.gprime[i];
    }
    return out;
}

std::vector<double> side_derivative(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("side_derivative: size mismatch");
    const std::size_t split = side_split(x);
    std::vector<double> d(x.size(), 0.0);
    auto run = [&](std::size_t lo, std::size_t hi) {
        d[lo] = (y[lo + 1] - y[lo]) / (x[lo + 1] - x[lo]);
        for (std::size_t i = lo + 1; i + 1 < hi; ++i)
            d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
        d[hi - 1] = (y[hi - 1] - y[hi - 2]) / (x[hi - 1] - x[hi - 2]);
    };
    run(0, split);
    run(split, x.size());
    return d;
}

double functional_I(const MaximalProfile& prof, const std::vector<double>& phi,
                    const std::vector<double>& phi_prime, double p, double alpha) {
    const std::size_t N = prof.x.size();
    if (phi.size() != N || phi_prime.size() != N)
        throw std::invalid_argument("functional_I: size mismatch");
    std::vector<double> v(N);
    for (std::size_t i = 0; i < N; ++i) {
        try {
            v[i] = F_eval(p, alpha, prof.g[i], prof.gprime[i], phi[i], phi_prime[i]);
        } catch (const std::domain_error&) {
            throw std::domain_error("functional_I: admissible strip left at grid index " +
                                    std::to_string(i) + " (x = " + fmt17(prof.x[i]) + ")");
        }
    }
    return trapezoid_two_sided(prof.x, v);
}

TransportReport check_transport_identities(const PiecewiseLinearFn& f, const MaximalProfile& prof,
                                           double p) {
    const std::size_t N = prof.x.size();
    const std::vector<double> sp = side_derivative(prof.x, prof.s);
    std::vector<double> vp(N), vm(N);
    TransportReport rep;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = prof.x[i], s = prof.s[i];
        const double bp = prof.g[i] + prof.gprime[i] * s;
        const double bm = prof.g[i] - prof.gprime[i] * s;
        vp[i] = std::pow(std::max(bp, 0.0), p) * (sp[i] + 1.0);
        vm[i] = std::pow(std::max(bm, 0.0), p) * (sp[i] - 1.0);
        // One-sided limits INTO the window: x + s is the right window edge for
        // x > 0 and the left edge for x < 0 (and conversely for x - s).
        const double fp = f.eval(x + s, x > 0.0 ? Side::minus : Side::plus);
        const double fm = f.eval(x - s, x > 0.0 ? Side::plus : Side::minus);
        rep.pointwise_plus_max = std::max(rep.pointwise_plus_max, std::fabs(fp - bp));
        rep.pointwise_minus_max = std::max(rep.pointwise_minus_max, std::fabs(fm - bm));
    }
    rep.lhs_plus = trapezoid_two_sided(prof.x, vp);
    rep.lhs_minus = trapezoid_two_sided(prof.x, vm);
    rep.rhs = lp_norm_p(f, p).value;
    return rep;
}

ElResult el_residual(const MaximalProfile& prof, const std::vector<double>& phi, double p,
                     double alpha) {
    const std::size_t N = prof.x.size();
    if (phi.size() != N) throw std::invalid_argument("el_residual: size mismatch");
    const std::vector<double> g2 = side_derivative(prof.x, prof.gprime);
    ElResult out;
    out.residual.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double g = prof.g[i], gp = prof.gprime[i];
        const double tp = edge_pow(g + gp * phi[i], g, p - 1.0);
        const double tm = edge_pow(g - gp * phi[i], g, p - 1.0);
        const double lead = p * g2[i] * phi[i];
        out.residual[i] = lead * (alpha * tp - (1.0 - alpha) * tm);
        out.scale = std::max(out.scale, std::fabs(lead) * (alpha * tp + (1.0 - alpha) * tm));
        out.max_abs = std::max(out.max_abs, std::fabs(out.residual[i]));
    }
    return out;
}

ConvexityResult check_pointwise_convexity(const MaximalProfile& prof,
                                          const std::vector<double>& s,
                                          const std::vector<double>& s_prime,
                                          const std::vector<double>& s0,
                                          const std::vector<double>& s0_prime, double p,
                                          double alpha) {
    const std::size_t N = prof.x.size();
    ConvexityResult out;
    out.gap.resize(N);
    out.min_gap = 1e300;
    for (std::size_t i = 0; i < N; ++i) {
        const double g = prof.g[i], gp = prof.gprime[i];
        const double Fs = F_eval(p, alpha, g, gp, s[i], s_prime[i]);
        const double Fs0 = F_eval(p, alpha, g, gp, s0[i], s0_prime[i]);
        const double d2 = F_d2(p, alpha, g, gp, s0[i], s0_prime[i]);
        const double d3 = F_d3(p, alpha, g, gp, s0[i]);
        const double lin2 = d2 * (s[i] - s0[i]);
        const double lin3 = d3 * (s_prime[i] - s0_prime[i]);
        out.gap[i] = (Fs - Fs0) - (lin2 + lin3);
        out.min_gap = std::min(out.min_gap, out.gap[i]);
        out.scale = std::max(out.scale,
                             std::fabs(Fs) + std::fabs(Fs0) + std::fabs(lin2) + std::fabs(lin3));
    }
    const double beta = beta_of_alpha(p, alpha);
    out.d23_bracket = std::fabs(alpha * std::pow(1.0 - beta, p - 1.0) -
                                (1.0 - alpha) * std::pow(1.0 + beta, p - 1.0));
    return out;
}

VariationalReport certify_chain(const PiecewiseLinearFn& f, const VariationalConfig& cfg_in,
                                Exec exec, int threads) {
    VariationalConfig cfg = cfg_in;
    if (!(cfg.p > 1.0)) throw std::invalid_argument("certify_chain: requires p > 1");
    if (cfg.alpha <= 0.0) cfg.alpha = alpha0_of_p(cfg.p);
    if (!(cfg.alpha > 0.5 && cfg.alpha < 1.0))
        throw std::invalid_argument("certify_chain: requires alpha in (1/2, 1)");
    const double R = f.support_radius();
    // The window-edge maps x -> x +/- s(x) leave an uncovered hole of
    // half-width ~ (s'(0) - 1) * inner around the peak, and s'(0) can be
    // large for flat-peaked functions; a tiny inner cutoff keeps the lost
    // mass far below the identity budget.
    if (!(cfg.grid.inner > 0.0)) cfg.grid.inner = 1e-7 * R;
    if (!(cfg.grid.outer > 0.0)) cfg.grid.outer = 12.0 * R;

    VariationalReport rep;
    rep.cfg = cfg;
    rep.prof = maximal_profile(f, cfg.grid, exec, threads);
    const std::vector<double>& x = rep.prof.x;
    const std::size_t N = x.size();
    const std::size_t split = side_split(x);

    S0Result s0r = s0_of(rep.prof, cfg.p, cfg.alpha);
    if (!s0r.excluded.empty()) {
        rep.failure = "s0 undefined (g' = 0) at " + std::to_string(s0r.excluded.size()) +
                      " grid points";
        return rep;
    }
    rep.s0 = std::move(s0r.s0);
    rep.s_prime = side_derivative(x, rep.prof.s);
    rep.s0_prime = side_derivative(x, rep.s0);

    rep.f_norm_p = lp_norm_p(f, cfg.p).value;
    std::vector<double> g_pow(N);
    for (std::size_t i = 0; i < N; ++i) g_pow[i] = std::pow(rep.prof.g[i], cfg.p);
    rep.g_norm_p = trapezoid_two_sided(x, g_pow);
    const RValue rv = r_of_alpha(cfg.p, cfg.alpha);
    rep.r_alpha = rv.r;
    rep.r_g_norm = rv.r * rep.g_norm_p;

    rep.F_at_s.resize(N);
    rep.F_at_s0.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double g = rep.prof.g[i], gp = rep.prof.gprime[i];
        rep.F_at_s[i] = F_eval(cfg.p, cfg.alpha, g, gp, rep.prof.s[i], rep.s_prime[i]);
        rep.F_at_s0[i] = F_eval(cfg.p, cfg.alpha, g, gp, rep.s0[i], rep.s0_prime[i]);
    }
    rep.I_s = trapezoid_two_sided(x, rep.F_at_s);
    rep.I_s0 = trapezoid_two_sided(x, rep.F_at_s0);

    // Signed corrections from the four window edges. With ascending indices,
    // the left component is [0, split) and the right component [split, N).
    const double beta = beta_of_alpha(cfg.p, cfg.alpha);
    auto bt = [&](std::size_t i) {
        return rv.gamma2 * beta * std::pow(rep.prof.g[i], cfg.p + 1.0) / rep.prof.gprime[i];
    };
    auto cc = [&](std::size_t i) { return rv.gamma2 * g_pow[i] * (rep.prof.s[i] - rep.s0[i]); };
    rep.corr_id = (bt(split) - bt(N - 1)) + (bt(0) - bt(split - 1));
    rep.corr_chain = (cc(N - 1) - cc(split)) + (cc(split - 1) - cc(0));
    rep.boundary_term_a = std::max(std::fabs(bt(split)), std::fabs(bt(split - 1)));
    rep.boundary_term_d = std::max(std::fabs(bt(N - 1)), std::fabs(bt(0)));

    ElResult el = el_residual(rep.prof, rep.s0, cfg.p, cfg.alpha);
    rep.el = std::move(el.residual);
    rep.el_residual_max = el.max_abs;
    rep.el_scale = el.scale;

    ConvexityResult cvx = check_pointwise_convexity(rep.prof, rep.prof.s, rep.s_prime, rep.s0,
                                                    rep.s0_prime, cfg.p, cfg.alpha);
    rep.gap = std::move(cvx.gap);
    rep.pointwise_gap_min = cvx.min_gap;
    rep.gap_scale = cvx.scale;
    rep.d23_bracket = cvx.d23_bracket;

    rep.ok_identity_s = std::fabs(rep.I_s - rep.f_norm_p) <= cfg.budget * rep.f_norm_p;
    rep.ok_identity_s0 =
        std::fabs(rep.I_s0 - (rep.r_g_norm + rep.corr_id)) <= cfg.budget * std::fabs(rep.r_g_norm);
    rep.ok_chain =
        rep.I_s - rep.I_s0 - rep.corr_chain >= -cfg.budget * (std::fabs(rep.I_s) + std::fabs(rep.I_s0));
    rep.ok_el = rep.el_residual_max <= 1e-9 * rep.el_scale;
    rep.ok_gap = rep.pointwise_gap_min >= -1e-10 * rep.gap_scale;
    rep.ok_bracket = rep.d23_bracket <= 1e-15;
    rep.ok = rep.ok_identity_s && rep.ok_identity_s0 && rep.ok_chain && rep.ok_el && rep.ok_gap &&
             rep.ok_bracket;
    if (!rep.ok) {
        if (!rep.ok_identity_s) rep.failure = "I(s) does not match ||f||_p^p within budget";
        else if (!rep.ok_identity_s0) rep.failure = "I(s0) does not match r ||g||_p^p + corrections";
        else if (!rep.ok_chain) rep.failure = "chain I(s) >= I(s0) + corrections violated";
        else if (!rep.ok_el) rep.failure = "Euler-Lagrange residual at s0 above rounding budget";
        else if (!rep.ok_gap) rep.failure = "pointwise convexity gap negative beyond rounding";
        else rep.failure = "mixed-partial bracket at s0 above rounding budget";
    }
    return rep;
}

} // namespace hlmax
