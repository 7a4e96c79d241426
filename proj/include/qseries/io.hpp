// SPDX-License-Identifier: Apache-2.0
//
// JSON form of a series, used for golden files and CLI output:
//   {"scale": D, "min_exp": e0, "trunc_order": T, "coeffs": ["n/d", ...]}
// Coefficients are exact fractions; min_exp is 0 and coeffs empty for the
// zero series.

#ifndef QSERIES_IO_HPP_
#define QSERIES_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"

#include "qseries/series.hpp"

namespace qseries {

inline std::string fraction_string(Rational c) {
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rational parse_fraction(const std::string& text) {
  try {
    Rational c(text);
    if (c.get_den() == 0) throw parse_error("zero denominator in '" + text + "'");
    c.canonicalize();
    return c;
  } catch (const std::invalid_argument&) {
    throw parse_error("invalid fraction '" + text + "'");
  }
}

inline nlohmann::json to_json(const Series& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(fraction_string(c));
  return {{"scale", s.scale()},
          {"min_exp", s.min_exp()},
          {"trunc_order", s.trunc_order()},
          {"coeffs", std::move(coeffs)}};
}

inline Series series_from_json(const nlohmann::json& j) {
  try {
    std::vector<Rational> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_fraction(c.get<std::string>()));
    return Series::from_coeffs(j.at("min_exp").get<Exponent>(), std::move(coeffs),
                               j.at("trunc_order").get<Exponent>(), j.at("scale").get<Exponent>());
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("malformed series JSON: ") + e.what());
  }
}

}  // namespace qseries

#endif  // QSERIES_IO_HPP_
