#pragma once

// Bracketed root finding and unimodal maximization for smooth scalar
// functions of one variable.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace hlmax {

// Bisection for a continuous function with f(a) and f(b) of opposite sign.
// Runs to (near) full double precision or max_iter, whichever first.
template <typename F>
double bisect_root(F&& f, double a, double b, double xtol = 0.0, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
    for (int i = 0; i < max_iter; ++i) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break; // interval at rounding resolution
        double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) { a = m; fa = fm; }
        else                          { b = m; }
        if ((b - a) <= xtol) break;
    }
    return 0.5 * (a + b);
}

// Golden-section search for the maximum of a unimodal function on [a, b].
// Returns (argmax, max). Argument tolerance xtol is absolute.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, double xtol = 1e-13, int max_iter = 300) {
    if (!(b > a)) throw std::invalid_argument("golden_max: need a < b");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;   // 1/phi
    const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;  // 1/phi^2
    double h = b - a;
    double c = a + invphi2 * h;
    double d = a + invphi * h;
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && h > xtol; ++i) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            h = b - a;
            c = a + invphi2 * h;
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            h = b - a;
            d = a + invphi * h;
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

} // namespace hlmax
