#pragma once

// JSON encoding of piecewise-linear functions:
//   {"breakpoints":[...], "values":[...], "peak_index":k}
// Emission uses 17-significant-digit decimals so round trips are bit exact
// and repeated runs are byte identical.

#include "hlmax/numeric.hpp"
#include "hlmax/piecewise_linear.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hlmax {

inline std::string to_json_string(const PiecewiseLinearFn& f) {
    std::ostringstream os;
    auto emit_array = [&os](const std::vector<double>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << fmt17(v[i]);
        }
        os << ']';
    };
    os << "{\"breakpoints\":";
    emit_array(f.breakpoints());
    os << ",\"values\":";
    emit_array(f.values());
    os << ",\"peak_index\":" << f.peak_index() << "}";
    return os.str();
}

inline PiecewiseLinearFn from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values") || !j.contains("peak_index"))
        throw std::invalid_argument("function JSON: need object with breakpoints, values, peak_index");
    const auto& jb = j.at("breakpoints");
    const auto& jv = j.at("values");
    const auto& jk = j.at("peak_index");
    if (!jb.is_array() || !jv.is_array() || !jk.is_number_integer())
        throw std::invalid_argument("function JSON: breakpoints/values must be arrays, peak_index an integer");
    std::vector<double> xs, vs;
    xs.reserve(jb.size());
    vs.reserve(jv.size());
    for (const auto& e : jb) {
        if (!e.is_number()) throw std::invalid_argument("function JSON: non-numeric breakpoint");
        xs.push_back(e.get<double>());
    }
    for (const auto& e : jv) {
        if (!e.is_number()) throw std::invalid_argument("function JSON: non-numeric value");
        vs.push_back(e.get<double>());
    }
    return make_plf(xs, vs, jk.get<int>());
}

inline PiecewiseLinearFn from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("function JSON: parse error: ") + e.what());
    }
    return from_json(j);
}

inline PiecewiseLinearFn load_plf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open function file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

} // namespace hlmax
