#pragma once

#include "eop/diffop.hpp"
#include "eop/ratfunc.hpp"

#include <json.hpp>

#include <string>

namespace eop {

inline constexpr int kSchemaVersion = 1;

inline nlohmann::json to_json(const Rational& r) { return r.str(); }

inline nlohmann::json to_json(const Poly& p) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : p.coeffs()) a.push_back(c.str());
    return a;
}

inline nlohmann::json to_json(const RatFunc& r) { return {{"num", to_json(r.num())}, {"den", to_json(r.den())}}; }

inline nlohmann::json to_json(const FactoredPoly& f) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : f.roots) roots.push_back(r.str());
    return {{"constant", f.constant.str()}, {"roots", roots}};
}

/// printf-style rendering with 17 significant digits.
std::string format_double(double v);

}  // namespace eop
