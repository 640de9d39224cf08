#include "hlmax/piecewise_linear.hpp"
#include "hlmax/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hlmax {

namespace {

[[noreturn]] void reject(const std::string& what) {
    throw std::invalid_argument("piecewise_linear: " + what);
}

// Deterministic uniform draws from raw mt19937_64 bits; std::uniform_*
// distributions are implementation-defined and would break seed
// reproducibility across standard libraries.
double u01(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

} // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> breakpoints,
                                     std::vector<double> values,
                                     int peak_index)
    : xs_(std::move(breakpoints)), vs_(std::move(values)), peak_index_(peak_index) {
    const std::size_t n = xs_.size();
    if (n < 3) reject("need at least 3 breakpoints");
    if (vs_.size() != n) reject("breakpoints and values must have equal length");
    if (peak_index_ < 0 || static_cast<std::size_t>(peak_index_) >= n)
        reject("peak_index out of range");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(vs_[i])) reject("non-finite input");
        if (!(vs_[i] >= 0.0)) reject("negative value");
    }
    if (vs_.front() != 0.0 || vs_.back() != 0.0)
        reject("values at the first and last breakpoint must be 0");
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (xs_[i + 1] < xs_[i]) reject("breakpoints must be sorted increasing");
        if (xs_[i + 1] == xs_[i]) {
            if (jump_lo_ >= 0) reject("more than one repeated abscissa");
            jump_lo_ = static_cast<int>(i);
            jump_hi_ = static_cast<int>(i + 1);
        }
    }
    if (jump_lo_ >= 0 && peak_index_ != jump_lo_ && peak_index_ != jump_hi_)
        reject("a repeated abscissa is permitted only at the peak");

    slope_.assign(n - 1, 0.0);
    pre_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = xs_[i + 1] - xs_[i];
        if (w > 0.0) slope_[i] = (vs_[i + 1] - vs_[i]) / w;
        pre_[i + 1] = pre_[i] + w * 0.5 * (vs_[i] + vs_[i + 1]);
    }
}

double PiecewiseLinearFn::support_radius() const {
    return std::max(std::fabs(xs_.front()), std::fabs(xs_.back()));
}

double PiecewiseLinearFn::max_value() const {
    double m = 0.0;
    for (double v : vs_) m = std::max(m, v);
    return m;
}

SegEval PiecewiseLinearFn::piece_right_of(double y) const {
    // Piece [xs_i, xs_{i+1}) with xs_i <= y < xs_{i+1}; at a node this picks
    // the piece starting there (right limit), which is the hi side of a jump.
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
    if (it == xs_.begin()) return {};                       // left of the support
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (i + 1 >= xs_.size()) return {};                     // right of the support
    const double m = slope_[i];
    if (xs_[i] == y) return {vs_[i], m};                    // exact node value
    return {vs_[i] + m * (y - xs_[i]), m};
}

SegEval PiecewiseLinearFn::piece_left_of(double y) const {
    // Piece (xs_j, xs_{j+1}] with xs_j < y <= xs_{j+1}; at a node this picks
    // the piece ending there (left limit), which is the lo side of a jump.
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), y);
    if (it != xs_.end() && *it == y) {
        const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
        if (k == 0) return {};                              // left support endpoint: f = 0 there
        return {vs_[k], slope_[k - 1]};                     // exact node value, left piece slope
    }
    if (it == xs_.begin() || it == xs_.end()) return {};    // outside the support
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return {vs_[j] + slope_[j] * (y - xs_[j]), slope_[j]};
}

double PiecewiseLinearFn::eval(double x, Side side) const {
    return side == Side::plus ? piece_right_of(x).value : piece_left_of(x).value;
}

double PiecewiseLinearFn::mean_at(double x) const {
    return 0.5 * (piece_right_of(x).value + piece_left_of(x).value);
}

double PiecewiseLinearFn::antiderivative(double u) const {
    if (u <= xs_.front()) return 0.0;
    if (u >= xs_.back()) return pre_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    const double d = u - xs_[i];
    return pre_[i] + d * (vs_[i] + 0.5 * slope_[i] * d);
}

double PiecewiseLinearFn::integral(double a, double b) const {
    if (!(a <= b)) reject("integral requires a <= b");
    return antiderivative(b) - antiderivative(a);
}

PiecewiseLinearFn make_plf(const std::vector<double>& breakpoints,
                           const std::vector<double>& values,
                           int peak_index) {
    return PiecewiseLinearFn(breakpoints, values, peak_index);
}

namespace {

// Most negative slope increment over pieces [lo, hi) taken consecutively.
double worst_slope_decrease(const std::vector<double>& xs, const std::vector<double>& vs,
                            std::size_t lo, std::size_t hi) {
    double worst = 0.0;
    double prev_slope = 0.0;
    bool have_prev = false;
    for (std::size_t i = lo; i < hi; ++i) {
        const double w = xs[i + 1] - xs[i];
        if (w <= 0.0) continue;
        const double m = (vs[i + 1] - vs[i]) / w;
        if (have_prev) worst = std::min(worst, m - prev_slope);
        prev_slope = m;
        have_prev = true;
    }
    return worst;
}

} // namespace

PeakShapeReport is_peak_shaped(const PiecewiseLinearFn& f, double tol_convexity) {
    PeakShapeReport rep;
    rep.peak_location = f.peak_location();
    rep.positivity_ok = true;
    for (double v : f.values())
        if (!(v >= 0.0)) rep.positivity_ok = false;

    const auto& xs = f.breakpoints();
    const auto& vs = f.values();
    const std::size_t left_end = static_cast<std::size_t>(f.has_jump() ? f.jump_lo() : f.peak_index());
    const std::size_t right_begin = static_cast<std::size_t>(f.has_jump() ? f.jump_hi() : f.peak_index());
    const double wl = worst_slope_decrease(xs, vs, 0, left_end);
    const double wr = worst_slope_decrease(xs, vs, right_begin, xs.size() - 1);
    rep.max_convexity_violation = std::min(wl, wr);
    rep.is_peak_shaped = rep.positivity_ok && rep.max_convexity_violation >= -tol_convexity;
    return rep;
}

PeakShapeReport peak_shape_of_samples(const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      double tol_convexity) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw std::invalid_argument("peak_shape_of_samples: need matching sequences, >= 4 points");
    PeakShapeReport rep;
    rep.peak_location = 0.0;
    rep.positivity_ok = true;
    for (double y : ys)
        if (!(y >= 0.0)) rep.positivity_ok = false;
    // Split the sides at 0 (profile grids exclude 0 by construction).
    std::size_t split = 0;
    while (split < xs.size() && xs[split] < 0.0) ++split;
    const double wl = worst_slope_decrease(xs, ys, 0, split > 0 ? split - 1 : 0);
    const double wr = split < xs.size() ? worst_slope_decrease(xs, ys, split, xs.size() - 1) : 0.0;
    rep.max_convexity_violation = std::min(wl, wr);
    rep.is_peak_shaped = rep.positivity_ok && rep.max_convexity_violation >= -tol_convexity;
    return rep;
}

NormValue lp_norm_p(const PiecewiseLinearFn& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_p: requires p >= 1");
    const auto& xs = f.breakpoints();
    const auto& vs = f.values();
    std::vector<double> terms;
    terms.reserve(xs.size());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double w = xs[i + 1] - xs[i];
        if (w <= 0.0) continue;
        const double hi = std::max(vs[i], vs[i + 1]);
        const double lo = std::min(vs[i], vs[i + 1]);
        if (hi == 0.0) continue;
        double q; // (1 - rho^{p+1}) / ((p+1)(1 - rho)), rho in [0, 1]
        const double rho = lo / hi;
        if (rho == 1.0) {
            q = 1.0;
        } else if (rho > 0.75) {
            const double l = std::log(rho); // small negative: expm1 keeps the ratio stable
            q = std::expm1((p + 1.0) * l) / ((p + 1.0) * std::expm1(l));
        } else {
            q = (1.0 - std::pow(rho, p + 1.0)) / ((p + 1.0) * (1.0 - rho));
        }
        terms.push_back(w * std::pow(hi, p) * q);
    }
    return NormValue{p, pairwise_sum(terms)};
}

double lp_norm(const PiecewiseLinearFn& f, double p) {
    return std::pow(lp_norm_p(f, p).value, 1.0 / p);
}

PiecewiseLinearFn tent() {
    return make_plf({-1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}, 1);
}

PiecewiseLinearFn ramp_indicator(double half_width, double ramp) {
    if (!(half_width > 0.0) || !(ramp > 0.0))
        throw std::invalid_argument("ramp_indicator: need positive half_width and ramp");
    return make_plf({-half_width - ramp, -half_width, half_width, half_width + ramp},
                    {0.0, 1.0, 1.0, 0.0}, 1);
}

PiecewiseLinearFn truncated_power(double p, double cap, int n_points) {
    if (!(p > 1.0)) throw std::invalid_argument("truncated_power: requires p > 1");
    if (!(cap > 1.0)) throw std::invalid_argument("truncated_power: requires cap > 1");
    if (n_points < 16) throw std::invalid_argument("truncated_power: requires n_points >= 16");

    const double xc = std::pow(cap, -p);     // tangency: |x_c|^{-1/p} == cap
    const double X = std::pow(cap, p * p);   // value falls to cap^{-p} here
    const std::vector<double> nodes = geometric_points(xc, X, n_points);

    std::vector<double> right_x = nodes;
    std::vector<double> right_v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) right_v[i] = std::pow(nodes[i], -1.0 / p);
    // The tangent at X reaches 0 at X*(1+p); the tangent at x_c reaches
    // cap*(1+1/p) at 0. Tangent closings keep the side slopes monotone.
    right_x.push_back(X * (1.0 + p));
    right_v.push_back(0.0);
    const double peak_value = cap * (1.0 + 1.0 / p);

    std::vector<double> xs, vs;
    xs.reserve(2 * right_x.size() + 1);
    vs.reserve(xs.capacity());
    for (std::size_t i = right_x.size(); i-- > 0;) {
        xs.push_back(-right_x[i]);
        vs.push_back(right_v[i]);
    }
    const int peak_index = static_cast<int>(xs.size());
    xs.push_back(0.0);
    vs.push_back(peak_value);
    for (std::size_t i = 0; i < right_x.size(); ++i) {
        xs.push_back(right_x[i]);
        vs.push_back(right_v[i]);
    }
    return make_plf(xs, vs, peak_index);
}

PiecewiseLinearFn random_peak_shaped(std::uint64_t seed, const RandomPeakParams& prm) {
    if (prm.min_side_points < 3 || prm.max_side_points < prm.min_side_points)
        reject("random_peak_shaped: need 3 <= min_side_points <= max_side_points");
    if (!(prm.support_min > 0.0) || !(prm.support_max >= prm.support_min))
        reject("random_peak_shaped: invalid support range");
    if (!(prm.height_min > 0.0) || !(prm.height_max >= prm.height_min))
        reject("random_peak_shaped: invalid height range");
    if (!(prm.jump_probability >= 0.0) || !(prm.jump_probability <= 1.0))
        reject("random_peak_shaped: jump_probability must be in [0, 1]");

    std::mt19937_64 gen(seed);
    auto draw = [&gen] { return u01(gen()); };

    constexpr double kFloor = 4e-4; // innermost breakpoint, relative to side length

    struct SideData {
        std::vector<double> x; // distances from the peak, ascending
        std::vector<double> v; // values, v.back() == 0 exactly
        double peak_candidate; // convexity-compatible peak value for this side
    };

    auto build_side = [&]() {
        SideData sd;
        const double len = prm.support_min + draw() * (prm.support_max - prm.support_min);
        const int span = prm.max_side_points - prm.min_side_points + 1;
        int n = prm.min_side_points + static_cast<int>(draw() * span);
        n = std::min(n, prm.max_side_points);
        // Jittered geometric distances d_k = kFloor^{e_k}: e_0 = 1 (innermost),
        // e_{n-1} = 0 (support end); interior exponents get +-0.4 of a step of
        // jitter, preserving strict ordering.
        std::vector<double> e(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k)] = double(n - 1 - k) / double(n - 1);
        for (int k = 1; k + 1 < n; ++k)
            e[static_cast<std::size_t>(k)] += (draw() - 0.5) * 0.8 / double(n - 1);
        const double gamma = 0.55 + 0.40 * draw();
        const double mix = 0.15 + 0.55 * draw();
        const double v0 = prm.height_min + draw() * (prm.height_max - prm.height_min);
        const double kappa = 1.3 + 1.7 * draw();

        const double pw_den = std::pow(kFloor, -gamma) - 1.0;
        sd.x.resize(e.size());
        sd.v.resize(e.size());
        for (std::size_t k = 0; k < e.size(); ++k) {
            const double d = std::pow(kFloor, e[k]);
            sd.x[k] = len * d;
            // Convex decreasing mixture with an exact zero at d = 1; sampling a
            // convex curve keeps discrete convexity for any node placement.
            const double lin = (1.0 - d) / (1.0 - kFloor);
            const double pw = (std::pow(d, -gamma) - 1.0) / pw_den;
            sd.v[k] = v0 * (mix * lin + (1.0 - mix) * pw);
        }
        // Peak candidate above the inner chord extension: keeps the innermost
        // segment slope compatible with convexity, with margin kappa >= 1.3.
        const double inner_slope_mag = (sd.v[0] - sd.v[1]) / (sd.x[1] - sd.x[0]);
        sd.peak_candidate = sd.v[0] + kappa * inner_slope_mag * sd.x[0];
        return sd;
    };

    const SideData right = build_side();
    const SideData left = build_side();
    const bool jump = draw() < prm.jump_probability;

    std::vector<double> xs, vs;
    xs.reserve(left.x.size() + right.x.size() + 2);
    vs.reserve(xs.capacity());
    for (std::size_t i = left.x.size(); i-- > 0;) {
        xs.push_back(-left.x[i]);
        vs.push_back(left.v[i]);
    }
    int peak_index;
    if (jump) {
        // Two peak values, one per side; the declared peak is the larger one.
        peak_index = static_cast<int>(xs.size()) + (left.peak_candidate >= right.peak_candidate ? 0 : 1);
        xs.push_back(0.0);
        vs.push_back(left.peak_candidate);
        xs.push_back(0.0);
        vs.push_back(right.peak_candidate);
    } else {
        peak_index = static_cast<int>(xs.size());
        xs.push_back(0.0);
        vs.push_back(std::max(left.peak_candidate, right.peak_candidate));
    }
    for (std::size_t i = 0; i < right.x.size(); ++i) {
        xs.push_back(right.x[i]);
        vs.push_back(right.v[i]);
    }
    return make_plf(xs, vs, peak_index);
}

} // namespace hlmax
