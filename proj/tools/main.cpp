// hlmax: verification CLI for the centered Hardy-Littlewood maximal operator
// on peak-shaped piecewise-linear functions.
//
// Subcommands: constants | maxfn | sharpness | variational | weaktype
// Exit codes:  0 all certifications pass
//              1 a mathematical assertion failed
//              2 usage or input error

#include "hlmax/constants.hpp"
#include "hlmax/maximal.hpp"
#include "hlmax/piecewise_linear.hpp"
#include "hlmax/plf_json.hpp"
#include "hlmax/variational.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hlmax;

constexpr int kExitPass = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitUsage = 2;

struct Common {
    std::string p_list = "2";
    double alpha = 0.0; // 0 = auto (alpha0)
    double tol = 0.0;   // 0 = subcommand default
    std::string grid;   // "n[,inner,outer]"
    std::uint64_t seed = 1;
    std::string fn_path;
    std::string out_path;
    std::string format; // csv | json
    int threads = 0;    // 0 = machine default, 1 = serial
};

Exec exec_of(const Common& c) { return c.threads == 1 ? Exec::serial : Exec::parallel; }

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        }
        if (pos != item.size())
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

GridSpec parse_grid(const std::string& text, GridSpec defaults) {
    if (text.empty()) return defaults;
    const std::vector<double> v = parse_double_list(text, "--grid");
    if (v.size() != 1 && v.size() != 3)
        throw std::invalid_argument("--grid: expected 'n' or 'n,inner,outer'");
    GridSpec g = defaults;
    if (!(v[0] >= 2.0) || v[0] != std::floor(v[0]))
        throw std::invalid_argument("--grid: n must be an integer >= 2");
    g.n_per_side = static_cast<int>(v[0]);
    if (v.size() == 3) {
        g.inner = v[1];
        g.outer = v[2];
        if (!(g.inner > 0.0) || !(g.outer > g.inner))
            throw std::invalid_argument("--grid: need 0 < inner < outer");
    }
    return g;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    os << text;
}

std::string format_of(const Common& c, const char* dflt) {
    const std::string f = c.format.empty() ? dflt : c.format;
    if (f != "csv" && f != "json") throw std::invalid_argument("--format: must be csv or json");
    return f;
}

PiecewiseLinearFn input_function(const Common& c) {
    if (c.fn_path.empty()) return tent();
    return load_plf(c.fn_path);
}

bool is_unimodal(const PiecewiseLinearFn& f) {
    const auto& v = f.values();
    const std::size_t k = f.peak_index();
    for (std::size_t i = 0; i + 1 <= k && i + 1 < v.size(); ++i)
        if (v[i + 1] < v[i]) return false;
    for (std::size_t i = k; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i]) return false;
    return true;
}

// ---------------------------------------------------------------- constants

int run_constants(const Common& c) {
    const std::vector<double> ps = parse_double_list(c.p_list, "--p");
    for (double p : ps)
        if (!(p > 1.0)) throw std::invalid_argument("constants: requires p > 1");
    const double tol = c.tol > 0.0 ? c.tol : 1e-9;
    std::size_t sweep_n = 10000;
    if (!c.grid.empty()) {
        const GridSpec g = parse_grid(c.grid, GridSpec{10000, 0.0, 0.0});
        sweep_n = static_cast<std::size_t>(g.n_per_side);
    }

    std::vector<CertifyResult> results;
    results.reserve(ps.size());
    for (double p : ps)
        results.push_back(certify_constants(p, tol, sweep_n, exec_of(c), c.threads));

    std::string text;
    if (format_of(c, "csv") == "csv") {
        text = "p,tau,c_p,alpha0,beta0,r_alpha0,gap\n";
        for (const auto& res : results) {
            const ConstantsRecord& r = res.record;
            text += fmt17(r.p) + "," + fmt17(r.tau) + "," + fmt17(r.c_p) + "," + fmt17(r.alpha0) +
                    "," + fmt17(r.beta0) + "," + fmt17(r.r_at_alpha0) + "," +
                    fmt17(r.cross_check_gap) + "\n";
        }
    } else {
        text = "[\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const ConstantsRecord& r = results[i].record;
            text += "  {\"p\":" + fmt17(r.p) + ",\"tau\":" + fmt17(r.tau) +
                    ",\"c_p\":" + fmt17(r.c_p) + ",\"alpha0\":" + fmt17(r.alpha0) +
                    ",\"beta0\":" + fmt17(r.beta0) + ",\"r_alpha0\":" + fmt17(r.r_at_alpha0) +
                    ",\"gap\":" + fmt17(r.cross_check_gap) +
                    ",\"ok\":" + (results[i].ok ? "true" : "false") + "}";
            text += (i + 1 < results.size()) ? ",\n" : "\n";
        }
        text += "]\n";
    }
    write_output(c.out_path, text);

    int status = kExitPass;
    for (const auto& res : results) {
        if (res.ok) {
            std::cerr << "constants: p=" << fmt17(res.record.p) << " certified (gap "
                      << fmt17(res.record.cross_check_gap) << ", sweep max r "
                      << fmt17(res.sweep.max_r) << ")\n";
        } else {
            std::cerr << "constants: p=" << fmt17(res.record.p) << " FAILED: " << res.failure
                      << "\n";
            status = kExitMathFail;
        }
    }
    return status;
}

// ------------------------------------------------------------------- maxfn

int run_maxfn(const Common& c, bool require_peak) {
    const PiecewiseLinearFn f = input_function(c);
    const double peak_tol = c.tol > 0.0 ? c.tol : 1e-12;
    const PeakShapeReport shape = is_peak_shaped(f, peak_tol);
    if (!shape.is_peak_shaped && require_peak) {
        std::cerr << "maxfn: input is not peak-shaped (max convexity violation "
                  << fmt17(shape.max_convexity_violation) << "); rejected by --require-peak\n";
        return kExitUsage;
    }

    const GridSpec grid = parse_grid(c.grid, GridSpec{600, 0.0, 0.0});
    const MaximalProfile prof = maximal_profile(f, grid, exec_of(c), c.threads);

    std::string text;
    const StructuralCheckReport rep = structural_checks(f, prof);
    if (format_of(c, "csv") == "csv") {
        text = "x,g,delta,s,gprime\n";
        for (std::size_t i = 0; i < prof.x.size(); ++i)
            text += fmt17(prof.x[i]) + "," + fmt17(prof.g[i]) + "," + fmt17(prof.delta[i]) + "," +
                    fmt17(prof.s[i]) + "," + fmt17(prof.gprime[i]) + "\n";
    } else {
        text = "{\n  \"profile\":[\n";
        for (std::size_t i = 0; i < prof.x.size(); ++i)
            text += "    {\"x\":" + fmt17(prof.x[i]) + ",\"g\":" + fmt17(prof.g[i]) +
                    ",\"delta\":" + fmt17(prof.delta[i]) + ",\"s\":" + fmt17(prof.s[i]) +
                    ",\"gprime\":" + fmt17(prof.gprime[i]) +
                    (i + 1 < prof.x.size() ? "},\n" : "}\n");
        text += "  ],\n";
        text += "  \"checks\":{\"avg_identity_residual\":" + fmt17(rep.avg_identity_residual) +
                ",\"slope_identity_residual\":" + fmt17(rep.slope_identity_residual) +
                ",\"s_slope_margin\":" + fmt17(rep.s_slope_margin) +
                ",\"delta_margin_min\":" + fmt17(rep.delta_margin_min) +
                ",\"mf_peakshape\":" + (rep.mf_peakshape.is_peak_shaped ? "true" : "false") +
                "}\n}\n";
    }
    write_output(c.out_path, text);

    double gmax = 0.0;
    for (double g : prof.g) gmax = std::max(gmax, g);
    std::cerr << "maxfn: avg_identity_residual=" << fmt17(rep.avg_identity_residual)
              << " s_slope_margin=" << fmt17(rep.s_slope_margin)
              << " delta_margin_min=" << fmt17(rep.delta_margin_min)
              << " mf_peakshape=" << (rep.mf_peakshape.is_peak_shaped ? "pass" : "fail") << "\n";

    if (!shape.is_peak_shaped) {
        std::cerr << "maxfn: input is NOT peak-shaped; profile emitted as exploratory output, "
                     "NOT certified (structural checks skipped)\n";
        return kExitPass;
    }

    bool ok = true;
    auto fail = [&](const std::string& why) {
        std::cerr << "maxfn: FAILED: " << why << "\n";
        ok = false;
    };
    if (!(rep.avg_identity_residual <= 1e-9 * gmax)) fail("window-average identity residual too large");
    if (!(rep.delta_margin_min >= -1e-12 * prof.spec_used.outer)) fail("delta < |x| at a grid point");
    // The optimal-radius slope exceeds 1; equality holds on exact-corner
    // families (e.g. the tent near its peak), so the hard gate is >= 0 up to
    // rounding. A jump at the peak breaks the identity gates by design.
    if (!f.has_jump()) {
        if (!(rep.s_slope_margin >= -1e-9)) fail("discrete slope of s drops below 1");
        if (!(rep.xps_increasing_min >= -1e-12 * prof.spec_used.outer)) fail("x + s(x) not increasing");
        if (!(rep.xms_decreasing_min >= -1e-12 * prof.spec_used.outer)) fail("x - s(x) not decreasing");
    }
    if (!rep.mf_peakshape.is_peak_shaped) fail("sampled maximal function is not peak-shaped");
    return ok ? kExitPass : kExitMathFail;
}

// --------------------------------------------------------------- sharpness

int run_sharpness(const Common& c, const std::string& caps_list, double band) {
    const std::vector<double> ps = parse_double_list(c.p_list, "--p");
    if (ps.size() != 1) throw std::invalid_argument("sharpness: exactly one p required");
    const double p = ps[0];
    if (!(p > 1.0)) throw std::invalid_argument("sharpness: requires p > 1");
    if (!(band > 0.0 && band < 1.0)) throw std::invalid_argument("sharpness: band in (0,1)");
    const std::vector<double> caps = parse_double_list(caps_list, "--caps");
    if (caps.size() < 3) throw std::invalid_argument("sharpness: family size must be >= 3");
    for (double cap : caps)
        if (!(cap > 1.0)) throw std::invalid_argument("sharpness: caps must exceed 1");

    const double cp = c_p(p);
    std::vector<double> ratios;
    ratios.reserve(caps.size());
    for (double cap : caps) {
        const int n_points =
            std::max(64, static_cast<int>(16.0 * (p * p + p) * std::log10(cap)));
        const PiecewiseLinearFn f = truncated_power(p, cap, n_points);
        const double xc = std::pow(cap, -p);
        GridSpec grid;
        grid.n_per_side = 2600;
        grid.inner = xc / 30.0;
        grid.outer = f.support_hi() * 30.0;
        const MaximalProfile prof = maximal_profile(f, grid, exec_of(c), c.threads);
        // Windowed quadrature of g^p underestimates ||Mf||_p, which keeps the
        // upper-bound assertion safe.
        std::vector<double> terms;
        terms.reserve(prof.x.size());
        for (std::size_t i = 0; i + 1 < prof.x.size(); ++i) {
            if ((prof.x[i] > 0.0) != (prof.x[i + 1] > 0.0)) continue;
            terms.push_back(0.5 * (std::pow(prof.g[i], p) + std::pow(prof.g[i + 1], p)) *
                            (prof.x[i + 1] - prof.x[i]));
        }
        const double mf_norm = std::pow(pairwise_sum(terms), 1.0 / p);
        ratios.push_back(mf_norm / lp_norm(f, p));
    }

    std::string text;
    if (format_of(c, "csv") == "csv") {
        text = "cap,ratio\n";
        for (std::size_t i = 0; i < caps.size(); ++i)
            text += fmt17(caps[i]) + "," + fmt17(ratios[i]) + "\n";
    } else {
        text = "{\"p\":" + fmt17(p) + ",\"c_p\":" + fmt17(cp) + ",\"rows\":[";
        for (std::size_t i = 0; i < caps.size(); ++i)
            text += std::string(i ? "," : "") + "{\"cap\":" + fmt17(caps[i]) +
                    ",\"ratio\":" + fmt17(ratios[i]) + "}";
        text += "]}\n";
    }
    write_output(c.out_path, text);

    bool ok = true;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        std::cerr << "sharpness: cap=" << fmt17(caps[i]) << " ratio=" << fmt17(ratios[i]) << " ("
                  << fmt17(ratios[i] / cp) << " of c_p)\n";
        if (!(ratios[i] <= cp * (1.0 + 1e-6))) {
            std::cerr << "sharpness: FAILED: ratio exceeds c_p\n";
            ok = false;
        }
        if (i > 0 && !(ratios[i] >= ratios[i - 1] * (1.0 - 1e-9))) {
            std::cerr << "sharpness: FAILED: ratio sequence not nondecreasing\n";
            ok = false;
        }
    }
    if (!(ratios.back() >= (1.0 - band) * cp)) {
        std::cerr << "sharpness: FAILED: final ratio below (1 - band) c_p\n";
        ok = false;
    }
    return ok ? kExitPass : kExitMathFail;
}

// ------------------------------------------------------------- variational

struct TransportGate {
    TransportReport rep;
    bool ok = false;
};

TransportGate run_transport_gate(const PiecewiseLinearFn& f, const VariationalReport& r) {
    TransportGate tg;
    tg.rep = check_transport_identities(f, r.prof, r.cfg.p);
    const double budget = r.cfg.budget * tg.rep.rhs;
    const double pw_tol = 1e-9 * f.max_value();
    tg.ok = std::fabs(tg.rep.lhs_plus - tg.rep.rhs) <= budget &&
            std::fabs(tg.rep.lhs_minus - tg.rep.rhs) <= budget &&
            tg.rep.pointwise_plus_max <= pw_tol && tg.rep.pointwise_minus_max <= pw_tol;
    return tg;
}

std::string variational_report_json(const VariationalReport& r, const TransportGate& tg) {
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    std::string t = "{\n";
    t += "  \"config\":{\"p\":" + fmt17(r.cfg.p) + ",\"alpha\":" + fmt17(r.cfg.alpha) +
         ",\"n_per_side\":" + std::to_string(r.cfg.grid.n_per_side) +
         ",\"inner\":" + fmt17(r.cfg.grid.inner) + ",\"outer\":" + fmt17(r.cfg.grid.outer) +
         ",\"budget\":" + fmt17(r.cfg.budget) + "},\n";
    t += "  \"I_s\":" + fmt17(r.I_s) + ",\n  \"I_s0\":" + fmt17(r.I_s0) + ",\n";
    t += "  \"f_norm_p\":" + fmt17(r.f_norm_p) + ",\n  \"g_norm_p\":" + fmt17(r.g_norm_p) + ",\n";
    t += "  \"r_alpha\":" + fmt17(r.r_alpha) + ",\n  \"r_g_norm\":" + fmt17(r.r_g_norm) + ",\n";
    t += "  \"corr_id\":" + fmt17(r.corr_id) + ",\n  \"corr_chain\":" + fmt17(r.corr_chain) + ",\n";
    t += "  \"boundary_term_a\":" + fmt17(r.boundary_term_a) +
         ",\n  \"boundary_term_d\":" + fmt17(r.boundary_term_d) + ",\n";
    t += "  \"el_residual_max\":" + fmt17(r.el_residual_max) +
         ",\n  \"el_scale\":" + fmt17(r.el_scale) + ",\n";
    t += "  \"pointwise_gap_min\":" + fmt17(r.pointwise_gap_min) +
         ",\n  \"gap_scale\":" + fmt17(r.gap_scale) + ",\n";
    t += "  \"d23_bracket\":" + fmt17(r.d23_bracket) + ",\n";
    t += "  \"transport_plus\":" + fmt17(tg.rep.lhs_plus) +
         ",\n  \"transport_minus\":" + fmt17(tg.rep.lhs_minus) +
         ",\n  \"transport_rhs\":" + fmt17(tg.rep.rhs) + ",\n";
    t += "  \"transport_pointwise_plus_max\":" + fmt17(tg.rep.pointwise_plus_max) +
         ",\n  \"transport_pointwise_minus_max\":" + fmt17(tg.rep.pointwise_minus_max) + ",\n";
    t += "  \"ok_identity_s\":" + b(r.ok_identity_s) + ",\n  \"ok_identity_s0\":" +
         b(r.ok_identity_s0) + ",\n  \"ok_chain\":" + b(r.ok_chain) + ",\n";
    t += "  \"ok_el\":" + b(r.ok_el) + ",\n  \"ok_gap\":" + b(r.ok_gap) +
         ",\n  \"ok_bracket\":" + b(r.ok_bracket) + ",\n  \"ok_transport\":" + b(tg.ok) + ",\n";
    t += "  \"ok\":" + b(r.ok && tg.ok) + "\n}\n";
    return t;
}

void variational_summary(const VariationalReport& r, const std::string& label) {
    std::cerr << "variational" << label << ": I(s)=" << fmt17(r.I_s)
              << " ||f||_p^p=" << fmt17(r.f_norm_p) << " I(s0)=" << fmt17(r.I_s0)
              << " r||g||_p^p+corr=" << fmt17(r.r_g_norm + r.corr_id)
              << " chain_margin=" << fmt17(r.I_s - r.I_s0 - r.corr_chain)
              << " el=" << fmt17(r.el_residual_max) << " gap_min=" << fmt17(r.pointwise_gap_min)
              << (r.ok ? " ok" : (" FAILED: " + r.failure)) << "\n";
}

int run_variational(const Common& c, int sweep) {
    const std::vector<double> ps = parse_double_list(c.p_list, "--p");
    if (ps.size() != 1) throw std::invalid_argument("variational: exactly one p required");
    VariationalConfig cfg;
    cfg.p = ps[0];
    if (!(cfg.p > 1.0)) throw std::invalid_argument("variational: requires p > 1");
    if (c.alpha != 0.0) {
        if (!(c.alpha > 0.5 && c.alpha < 1.0))
            throw std::invalid_argument("variational: alpha must lie in (1/2, 1)");
        cfg.alpha = c.alpha;
    }
    cfg.grid = parse_grid(c.grid, GridSpec{2000, 0.0, 0.0});
    if (c.tol > 0.0) cfg.budget = c.tol;

    if (sweep > 0) {
        std::string text = "seed,p,alpha,I_s,f_norm_p,I_s0,r_g_norm_corr,chain_margin,"
                           "el_residual_max,pointwise_gap_min,ok\n";
        bool all_ok = true;
        for (int k = 0; k < sweep; ++k) {
            const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
            const PiecewiseLinearFn f = random_peak_shaped(seed);
            const VariationalReport r = certify_chain(f, cfg, exec_of(c), c.threads);
            variational_summary(r, "[seed " + std::to_string(seed) + "]");
            text += std::to_string(seed) + "," + fmt17(r.cfg.p) + "," + fmt17(r.cfg.alpha) + "," +
                    fmt17(r.I_s) + "," + fmt17(r.f_norm_p) + "," + fmt17(r.I_s0) + "," +
                    fmt17(r.r_g_norm + r.corr_id) + "," + fmt17(r.I_s - r.I_s0 - r.corr_chain) +
                    "," + fmt17(r.el_residual_max) + "," + fmt17(r.pointwise_gap_min) + "," +
                    (r.ok ? "1" : "0") + "\n";
            all_ok = all_ok && r.ok;
        }
        write_output(c.out_path, text);
        return all_ok ? kExitPass : kExitMathFail;
    }

    const PiecewiseLinearFn f = input_function(c);
    const PeakShapeReport shape = is_peak_shaped(f, 1e-12);
    if (!shape.is_peak_shaped)
        throw std::invalid_argument("variational: input function is not peak-shaped");
    const VariationalReport r = certify_chain(f, cfg, exec_of(c), c.threads);
    const TransportGate tg = run_transport_gate(f, r);
    variational_summary(r, "");
    std::cerr << "transport: lhs+=" << fmt17(tg.rep.lhs_plus)
              << " lhs-=" << fmt17(tg.rep.lhs_minus) << " rhs=" << fmt17(tg.rep.rhs)
              << " pointwise_max=" << fmt17(std::max(tg.rep.pointwise_plus_max,
                                                     tg.rep.pointwise_minus_max))
              << (tg.ok ? " ok" : " FAILED") << "\n";

    std::string text;
    if (format_of(c, "json") == "json") {
        text = variational_report_json(r, tg);
    } else {
        text = "x,s,s0,F_at_s,F_at_s0,gap,el_residual\n";
        for (std::size_t i = 0; i < r.prof.x.size(); ++i)
            text += fmt17(r.prof.x[i]) + "," + fmt17(r.prof.s[i]) + "," + fmt17(r.s0[i]) + "," +
                    fmt17(r.F_at_s[i]) + "," + fmt17(r.F_at_s0[i]) + "," + fmt17(r.gap[i]) + "," +
                    fmt17(r.el[i]) + "\n";
    }
    write_output(c.out_path, text);
    return (r.ok && tg.ok) ? kExitPass : kExitMathFail;
}

// ---------------------------------------------------------------- weaktype

int run_weaktype(const Common& c, const std::string& lambda_list) {
    const PiecewiseLinearFn f = input_function(c);
    if (!is_unimodal(f))
        throw std::invalid_argument("weaktype: input function must be unimodal");

    const GridSpec grid = parse_grid(c.grid, GridSpec{600, 0.0, 0.0});
    const MaximalProfile prof = maximal_profile(f, grid, exec_of(c), c.threads);

    std::vector<double> lambdas;
    if (!lambda_list.empty()) {
        lambdas = parse_double_list(lambda_list, "--lambdas");
        for (double lam : lambdas)
            if (!(lam > 0.0)) throw std::invalid_argument("weaktype: lambda must be positive");
    } else {
        const double gmax = f.max_value();
        const std::vector<double> pts = geometric_points(1e-3 * gmax, 0.999 * gmax, 13);
        lambdas = pts;
    }

    const std::vector<double> ratios = weak_type_ratios(f, prof, lambdas);

    std::string text;
    if (format_of(c, "csv") == "csv") {
        text = "lambda,ratio\n";
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            text += fmt17(lambdas[i]) + "," + fmt17(ratios[i]) + "\n";
    } else {
        text = "{\"rows\":[";
        for (std::size_t i = 0; i < lambdas.size(); ++i)
            text += std::string(i ? "," : "") + "{\"lambda\":" + fmt17(lambdas[i]) +
                    ",\"ratio\":" + fmt17(ratios[i]) + "}";
        double sup = 0.0;
        for (double r : ratios) sup = std::max(sup, r);
        text += "],\"sup_ratio\":" + fmt17(sup) + "}\n";
    }
    write_output(c.out_path, text);

    double sup = 0.0;
    for (double r : ratios) sup = std::max(sup, r);
    std::cerr << "weaktype: sup ratio=" << fmt17(sup) << " over " << lambdas.size()
              << " levels\n";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] <= 1.0 + 1e-6)) {
            std::cerr << "weaktype: FAILED: ratio " << fmt17(ratios[i]) << " at lambda "
                      << fmt17(lambdas[i]) << " exceeds 1\n";
            return kExitMathFail;
        }
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Centered maximal-operator verification toolkit"};
    app.require_subcommand(1);

    Common c;
    bool require_peak = false;
    int sweep = 0;
    std::string caps_list = "10,100,1000,10000";
    std::string lambda_list;
    double band = 0.02;

    auto add_common = [&](CLI::App* sub, bool with_fn) {
        sub->add_option("--tol", c.tol, "tolerance override (subcommand-specific meaning)");
        sub->add_option("--grid", c.grid, "grid as 'n' or 'n,inner,outer'");
        sub->add_option("--out", c.out_path, "output path (default: stdout)");
        sub->add_option("--format", c.format, "output format: csv|json");
        sub->add_option("--threads", c.threads, "thread cap (0 = machine default, 1 = serial)");
        if (with_fn) sub->add_option("--fn", c.fn_path, "input function JSON path");
    };

    CLI::App* cmd_constants = app.add_subcommand("constants", "certify tau, c_p, alpha0, r(alpha0)");
    cmd_constants->add_option("--p", c.p_list, "comma-separated exponent list (each > 1)");
    add_common(cmd_constants, false);

    CLI::App* cmd_maxfn = app.add_subcommand("maxfn", "maximal profile g, delta, s, g' of a function");
    add_common(cmd_maxfn, true);
    cmd_maxfn->get_option("--fn")->required();
    cmd_maxfn->add_flag("--require-peak", require_peak, "reject non-peak-shaped input");

    CLI::App* cmd_sharp = app.add_subcommand("sharpness", "norm-ratio family approaching c_p");
    cmd_sharp->add_option("--p", c.p_list, "single exponent > 1");
    cmd_sharp->add_option("--caps", caps_list, "comma-separated truncation caps (>= 3 values)");
    cmd_sharp->add_option("--band", band, "relative band for the final ratio (default 0.02)");
    add_common(cmd_sharp, false);

    CLI::App* cmd_vari = app.add_subcommand("variational", "certify the I(s) >= I(s0) chain");
    cmd_vari->add_option("--p", c.p_list, "single exponent > 1");
    cmd_vari->add_option("--alpha", c.alpha, "weight in (1/2,1); omit for alpha0(p)");
    cmd_vari->add_option("--sweep", sweep, "run N random peak-shaped functions instead of --fn");
    cmd_vari->add_option("--seed", c.seed, "base seed for --sweep");
    add_common(cmd_vari, true);

    CLI::App* cmd_weak = app.add_subcommand("weaktype", "weak-type (1,1) level-set ratios");
    cmd_weak->add_option("--lambdas", lambda_list, "comma-separated positive levels");
    add_common(cmd_weak, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (app.got_subcommand(cmd_constants)) return run_constants(c);
        if (app.got_subcommand(cmd_maxfn)) return run_maxfn(c, require_peak);
        if (app.got_subcommand(cmd_sharp)) return run_sharpness(c, caps_list, band);
        if (app.got_subcommand(cmd_vari)) return run_variational(c, sweep);
        if (app.got_subcommand(cmd_weak)) return run_weaktype(c, lambda_list);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitMathFail;
    }
    return kExitUsage;
}
