#pragma once

// Small numeric utilities shared across the library: reproducible 17-digit
// formatting, deterministic summation, and geometric grid construction.

#include <cstdio>
#include <cstddef>
#include <cmath>
#include <string>
#include <vector>
#include <stdexcept>

namespace hlmax {

// Fixed 17-significant-digit decimal formatting. Guarantees bit-exact
// round-trips through text and byte-identical output across runs and
// thread counts, which library shortest-round-trip writers do not pin down.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

inline double rel_err(double got, double want) {
    double scale = std::fabs(want);
    if (scale < 1e-300) return std::fabs(got - want);
    return std::fabs(got - want) / scale;
}

// Pairwise (tree) summation over a fixed-order array. The reduction order
// depends only on the array contents and length, never on thread count, so
// parallel producers + this reducer give byte-identical results.
inline double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = data[0];
        for (std::size_t i = 1; i < n; ++i) s += data[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

// Geometric ladder a, a*q, ..., b with exactly n points (n >= 2).
inline std::vector<double> geometric_points(double a, double b, int n) {
    if (!(a > 0.0) || !(b > a) || n < 2)
        throw std::invalid_argument("geometric_points: need 0 < a < b and n >= 2");
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double q = std::pow(b / a, 1.0 / (n - 1));
    for (int k = 0; k < n; ++k) xs[static_cast<std::size_t>(k)] = a * std::pow(q, k);
    xs.front() = a;
    xs.back() = b;
    return xs;
}

// Symmetric grid {-b..-a} U {a..b}, geometric on each side, ascending,
// excluding 0. Left half mirrors the right half exactly (negation is exact),
// so even/odd symmetries of sampled data are preserved bitwise.
inline std::vector<double> symmetric_geometric_grid(double inner, double outer, int n_per_side) {
    std::vector<double> right = geometric_points(inner, outer, n_per_side);
    std::vector<double> grid;
    grid.reserve(right.size() * 2);
    for (auto it = right.rbegin(); it != right.rend(); ++it) grid.push_back(-*it);
    for (double x : right) grid.push_back(x);
    return grid;
}

// Execution policy for data-parallel kernels. `parallel` uses OpenMP when
// compiled in; results are identical to `serial` by construction (per-point
// pure work, fixed-order reductions).
enum class Exec { serial, parallel };

} // namespace hlmax
