// Benchmark: serial vs OpenMP-parallel maximal-profile construction, with a
// bitwise equality check between the two execution policies.

#include "hlmax/maximal.hpp"
#include "hlmax/numeric.hpp"
#include "hlmax/piecewise_linear.hpp"

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

int main() {
    using namespace hlmax;
    struct Case {
        std::string name;
        PiecewiseLinearFn f;
    };
    const std::vector<Case> cases = {
        {"tent", tent()},
        {"random_seed_7", random_peak_shaped(7)},
        {"truncated_power_p2_cap100", truncated_power(2.0, 100.0, 96)},
    };

    bool all_equal = true;
    std::printf("%-28s %12s %12s %9s %10s\n", "case", "serial[ms]", "parallel[ms]", "speedup",
                "identical");
    for (const auto& cse : cases) {
        const GridSpec grid{1500, 0.0, 0.0};
        auto t0 = std::chrono::steady_clock::now();
        const MaximalProfile ps = maximal_profile(cse.f, grid, Exec::serial);
        const double ser = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        const MaximalProfile pp = maximal_profile(cse.f, grid, Exec::parallel);
        const double par = ms_since(t0);
        const bool same = bitwise_equal(ps.g, pp.g) && bitwise_equal(ps.delta, pp.delta) &&
                          bitwise_equal(ps.s, pp.s) && bitwise_equal(ps.gprime, pp.gprime);
        all_equal = all_equal && same;
        std::printf("%-28s %12.2f %12.2f %8.2fx %10s\n", cse.name.c_str(), ser, par,
                    par > 0.0 ? ser / par : 0.0, same ? "yes" : "NO");
    }
    return all_equal ? 0 : 1;
}
