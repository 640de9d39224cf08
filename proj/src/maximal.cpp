#include "hlmax/maximal.hpp"
#include "hlmax/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hlmax {

WindowAverage xi(const PiecewiseLinearFn& f, double x, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("xi: requires t >= 0");
    if (t == 0.0) return {x, t, f.mean_at(x)};
    return {x, t, f.integral(x - t, x + t) / (2.0 * t)};
}

MaximalPoint maximal_at(const PiecewiseLinearFn& f, double x, double tie_rel) {
    const auto& xs = f.breakpoints();

    // Event radii: |b - x| over distinct breakpoint abscissas, ascending.
    std::vector<double> ev;
    ev.reserve(xs.size());
    double prev_b = xs.front() - 1.0;
    for (double b : xs) {
        if (b == prev_b) continue; // repeated abscissa (jump) hits at the same radius
        prev_b = b;
        const double t = std::fabs(b - x);
        if (t > 0.0) ev.push_back(t);
    }
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());

    std::vector<std::pair<double, double>> cand; // (radius, value)
    cand.reserve(2 * ev.size() + 2);
    cand.emplace_back(0.0, f.mean_at(x));

    double t_cur = 0.0;
    double I_cur = 0.0;     // exact integral over [x - t_cur, x + t_cur]
    double start_val = cand.front().second; // xi at t_cur
    for (double t_next : ev) {
        const double w = t_next - t_cur;
        // One-sided integrand samples at the cell edges (limits taken from
        // inside the cell, so jump discontinuities resolve correctly).
        const double v_start =
            f.piece_right_of(x + t_cur).value + f.piece_left_of(x - t_cur).value;
        const double v_end =
            f.piece_left_of(x + t_next).value + f.piece_right_of(x - t_next).value;
        // Cell model coefficients from the midpoint pieces. Event radii are
        // rounded, so x + t_cur can land an ulp across the breakpoint that
        // generated the event and hand the neighbouring piece's slope to this
        // cell; the midpoint cannot.
        const double t_mid = t_cur + 0.5 * w;
        const SegEval R = f.piece_right_of(x + t_mid);
        const SegEval L = f.piece_left_of(x - t_mid);
        const double C = R.slope - L.slope; // d2I/du2 (constant on the cell)
        const double B = R.value + L.value - 0.5 * w * C; // dI/du at cell start
        // Flat cell: xi is constant when C = 0 and I_cur = B t_cur (f linear
        // across the whole window). The sup is then attained on a radius
        // plateau, and the largest maximizing radius is the cell end. Carry
        // the start value exactly instead of recomputing it, so that it ties
        // exactly under the exact-value tie rule below; re-deriving it as
        // I/(2t) can land an ulp low and silently drop the plateau end.
        const bool flat = C == 0.0 && std::fabs(I_cur - B * t_cur) <=
                                          1e-12 * (std::fabs(I_cur) + std::fabs(B) * t_cur);
        if (C != 0.0) {
            // The model must reproduce the sampled edge integrand; it fails
            // only when rounding collapsed several breakpoints into one cell
            // (far-field windows), where a stationary candidate would be
            // meaningless and the endpoint candidates already suffice.
            const double scale = std::fabs(v_start) + std::fabs(v_end) +
                                 std::fabs(B) + std::fabs(B + C * w);
            const bool consistent = std::fabs(B - v_start) <= 1e-9 * scale &&
                                    std::fabs(B + C * w - v_end) <= 1e-9 * scale;
            if (consistent) {
                // Stationary radius of (I_cur + B u + C u^2/2)/(2(t_cur+u)):
                // t*^2 = t_cur^2 + 2 (I_cur - B t_cur)/C. Only strictly
                // interior candidates count; boundary hits are already cell
                // endpoints.
                const double disc = t_cur * t_cur + 2.0 * (I_cur - B * t_cur) / C;
                if (disc > 0.0) {
                    const double ts = std::sqrt(disc);
                    if (ts > t_cur && ts < t_next) {
                        const double u = ts - t_cur;
                        cand.emplace_back(ts, (I_cur + u * (B + 0.5 * C * u)) / (2.0 * ts));
                    }
                }
            }
        }
        // Accumulate the cell as a trapezoid of the sampled edge values. This
        // equals B w + C w^2/2 in exact arithmetic but stays stable when
        // rounded event radii land a steep-slope segment in a cell whose
        // width is pure rounding (far-field x), where the C w^2 form injects
        // slope-times-rounding^2 garbage.
        I_cur += 0.5 * w * (v_start + v_end);
        t_cur = t_next;
        start_val = flat ? start_val : I_cur / (2.0 * t_next);
        cand.emplace_back(t_next, start_val);
    }
    // Beyond the last event the window holds all the mass and the average
    // decays like 1/t: no further candidates.

    double vmax = cand.front().second;
    for (const auto& c : cand) vmax = std::max(vmax, c.second);
    const double tie = tie_rel * std::max(vmax, 0.0);
    double best_t = 0.0;
    for (const auto& c : cand)
        if (c.second >= vmax - tie) best_t = std::max(best_t, c.first);
    return {vmax, best_t};
}

namespace {

GridSpec resolve_grid(const PiecewiseLinearFn& f, GridSpec spec) {
    const double R = f.support_radius();
    if (!(spec.inner > 0.0)) spec.inner = 1e-3 * R;
    if (!(spec.outer > 0.0)) spec.outer = 8.0 * R;
    if (spec.n_per_side < 2) throw std::invalid_argument("maximal_profile: n_per_side >= 2");
    if (!(spec.inner < spec.outer)) throw std::invalid_argument("maximal_profile: need inner < outer");
    return spec;
}

} // namespace

MaximalProfile maximal_profile(const PiecewiseLinearFn& f, GridSpec spec, Exec exec, int threads) {
    spec = resolve_grid(f, spec);
    MaximalProfile prof;
    prof.spec_used = spec;
    prof.x = symmetric_geometric_grid(spec.inner, spec.outer, spec.n_per_side);
    const std::size_t N = prof.x.size();
    prof.g.assign(N, 0.0);
    prof.delta.assign(N, 0.0);
    prof.s.assign(N, 0.0);
    prof.gprime.assign(N, 0.0);

    auto fill_point = [&](std::size_t i) {
        const double x = prof.x[i];
        const MaximalPoint mp = maximal_at(f, x, prof.tie_tol);
        prof.g[i] = mp.g;
        prof.delta[i] = mp.delta;
        prof.s[i] = x > 0.0 ? mp.delta : -mp.delta;
        if (mp.delta > 0.0) {
            // One-sided limits INTO the window at its edges.
            const double fr = f.eval(x + mp.delta, Side::minus);
            const double fl = f.eval(x - mp.delta, Side::plus);
            prof.gprime[i] = (fr - fl) / (2.0 * mp.delta);
        }
    };

#ifdef _OPENMP
    if (exec == Exec::parallel) {
        const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nt)
        for (long long i = 0; i < static_cast<long long>(N); ++i)
            fill_point(static_cast<std::size_t>(i));
        return prof;
    }
#else
    (void)exec;
    (void)threads;
#endif
    for (std::size_t i = 0; i < N; ++i) fill_point(i);
    return prof;
}

StructuralCheckReport structural_checks(const PiecewiseLinearFn& f, const MaximalProfile& prof) {
    StructuralCheckReport rep;
    const std::size_t N = prof.x.size();
    if (N < 4) throw std::invalid_argument("structural_checks: profile too small");

    double avg_res = 0.0, delta_margin = 1e300;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = prof.x[i], d = prof.delta[i];
        const double fr = f.eval(x + d, Side::minus);
        const double fl = f.eval(x - d, Side::plus);
        avg_res = std::max(avg_res, std::fabs(prof.g[i] - 0.5 * (fr + fl)));
        delta_margin = std::min(delta_margin, d - std::fabs(x));
    }
    rep.avg_identity_residual = avg_res;
    rep.delta_margin_min = delta_margin;

    // Centered differences of g vs the exact gprime (same-side neighbors).
    double slope_res = 0.0;
    auto same_side = [&](std::size_t i, std::size_t j) {
        return (prof.x[i] > 0.0) == (prof.x[j] > 0.0);
    };
    for (std::size_t i = 1; i + 1 < N; ++i) {
        if (!same_side(i - 1, i + 1)) continue;
        const double num = prof.g[i + 1] - prof.g[i - 1];
        const double den = prof.x[i + 1] - prof.x[i - 1];
        slope_res = std::max(slope_res, std::fabs(prof.gprime[i] - num / den));
    }
    rep.slope_identity_residual = slope_res;

    double s_margin = 1e300, xps_min = 1e300, xms_min = 1e300;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        const double dx = prof.x[i + 1] - prof.x[i];
        if (same_side(i, i + 1))
            s_margin = std::min(s_margin, (prof.s[i + 1] - prof.s[i]) / dx - 1.0);
        xps_min = std::min(xps_min, (prof.x[i + 1] + prof.s[i + 1]) - (prof.x[i] + prof.s[i]));
        xms_min = std::min(xms_min, (prof.x[i] - prof.s[i]) - (prof.x[i + 1] - prof.s[i + 1]));
    }
    rep.s_slope_margin = s_margin;
    rep.xps_increasing_min = xps_min;
    rep.xms_decreasing_min = xms_min;

    // Peak-shape of the sampled maximal function. Discrete second differences
    // of exact values carry rounding amplified by 1/dx^2, so the tolerance
    // scales with the largest sampled slope magnitude.
    double max_slope = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i)
        max_slope = std::max(max_slope,
                             std::fabs((prof.g[i + 1] - prof.g[i]) / (prof.x[i + 1] - prof.x[i])));
    rep.mf_peakshape = peak_shape_of_samples(prof.x, prof.g, 1e-9 * std::max(max_slope, 1e-300));
    return rep;
}

std::vector<double> weak_type_ratios(const PiecewiseLinearFn& f, const MaximalProfile& prof,
                                     const std::vector<double>& lambdas) {
    const double mass = f.total_mass();
    if (!(mass > 0.0)) throw std::invalid_argument("weak_type_ratios: zero function");
    const double gmax = f.max_value(); // sup Mf on the unimodal class
    const double c = f.peak_location();

    auto mf = [&f](double x) { return maximal_at(f, x).g; };

    // Outermost profile point with g > lambda seeds the bracket; the analytic
    // bound Mf(x) <= mass / (2 (x - support_hi)) caps the outer endpoint.
    auto boundary_right = [&](double lam) {
        double lo = c, hi = f.support_hi() + mass / (2.0 * lam) * (1.0 + 1e-9) + 1.0;
        for (std::size_t i = prof.x.size(); i-- > 0;)
            if (prof.x[i] > c && prof.g[i] > lam) { lo = prof.x[i]; break; }
        if (!(mf(lo) > lam)) return c; // level set degenerate on this side
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (std::fabs(hi) + 1.0); ++it) {
            const double m = 0.5 * (lo + hi);
            (mf(m) > lam ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };
    auto boundary_left = [&](double lam) {
        double lo = c, hi = f.support_lo() - mass / (2.0 * lam) * (1.0 + 1e-9) - 1.0;
        for (std::size_t i = 0; i < prof.x.size(); ++i)
            if (prof.x[i] < c && prof.g[i] > lam) { lo = prof.x[i]; break; }
        if (!(mf(lo) > lam)) return c;
        for (int it = 0; it < 200 && lo - hi > 1e-13 * (std::fabs(hi) + 1.0); ++it) {
            const double m = 0.5 * (lo + hi);
            (mf(m) > lam ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };

    std::vector<double> ratios;
    ratios.reserve(lambdas.size());
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw std::invalid_argument("weak_type_ratios: lambda must be positive");
        if (lam >= gmax) {
            ratios.push_back(0.0);
            continue;
        }
        const double b = boundary_right(lam);
        const double a = boundary_left(lam);
        ratios.push_back(lam * (b - a) / mass);
    }
    return ratios;
}

double power_xi(double p, double x, double t) {
    if (!(p > 1.0)) throw std::invalid_argument("power_xi: requires p > 1");
    x = std::fabs(x);
    if (!(x > 0.0)) throw std::invalid_argument("power_xi: requires x != 0");
    if (!(t >= 0.0)) throw std::invalid_argument("power_xi: requires t >= 0");
    const double e = (p - 1.0) / p;
    const double scale = std::pow(x, -1.0 / p);
    if (t == 0.0) return scale;
    const double w = t / x;
    if (w >= 1.0) return scale * (std::pow(w + 1.0, e) + std::pow(w - 1.0, e)) / (2.0 * e * w);
    return scale * (std::pow(1.0 + w, e) - std::pow(1.0 - w, e)) / (2.0 * e * w);
}

PowerSup power_sup(double p, double x) {
    x = std::fabs(x);
    if (!(p > 1.0) || !(x > 0.0)) throw std::invalid_argument("power_sup: requires p > 1, x != 0");
    // The outer branch is unimodal with an interior maximum below t = 2.5|x|
    // for every p > 1; the inner branch increases toward the splice.
    auto val = [&](double t) { return power_xi(p, x, t); };
    auto [t_star, sup] = golden_max(val, x * (1.0 + 1e-9), 2.5 * x, 1e-13 * x);
    return {sup, t_star};
}

} // namespace hlmax
