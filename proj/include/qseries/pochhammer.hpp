// SPDX-License-Identifier: Apache-2.0
//
// q-Pochhammer symbols (a; q^step)_n and (a; q^step)_inf as truncated series.

#ifndef QSERIES_POCHHAMMER_HPP_
#define QSERIES_POCHHAMMER_HPP_

#include <string>
#include <vector>

#include "qseries/series.hpp"

namespace qseries {

namespace detail {

// c *= (1 - sign q^e) in place, c dense from q^0, e >= 0.
inline void mul_one_minus(std::vector<mpz_class>& c, int sign, Exponent e) {
  if (e == 0) {
    if (sign > 0) {
      for (auto& x : c) x = 0;
    } else {
      for (auto& x : c) x *= 2;
    }
    return;
  }
  auto n = static_cast<Exponent>(c.size());
  for (Exponent i = n - 1; i >= e; --i) {
    auto& dst = c[static_cast<std::size_t>(i)];
    const auto& src = c[static_cast<std::size_t>(i - e)];
    if (sign > 0) {
      dst -= src;
    } else {
      dst += src;
    }
  }
}

// c /= (1 - sign q^e) in place, e > 0.
inline void div_one_minus(std::vector<mpz_class>& c, int sign, Exponent e) {
  auto n = static_cast<Exponent>(c.size());
  for (Exponent i = e; i < n; ++i) {
    auto& dst = c[static_cast<std::size_t>(i)];
    const auto& src = c[static_cast<std::size_t>(i - e)];
    if (sign > 0) {
      dst += src;
    } else {
      dst -= src;
    }
  }
}

inline Series from_dense_integers(const std::vector<mpz_class>& c, Exponent trunc,
                                  Exponent scale) {
  std::vector<Rational> out(c.begin(), c.end());
  return Series::from_coeffs(0, std::move(out), trunc, scale);
}

}  // namespace detail

/// (a; q^step)_n = prod_{k=0}^{n-1} (1 - a q^{k*step}), truncated at `trunc`.
/// Factors with negative exponent are allowed; they contribute a monomial.
inline Series pochhammer_finite(Monomial a, Exponent n, Exponent trunc,
                                Exponent step = 1, Exponent scale = 1) {
  if (n < 0) throw range_error("pochhammer_finite: n must be nonnegative");
  // 1 - s q^e with e < 0 equals (-s q^e)(1 - s q^{-e}).
  Monomial pre{};
  std::vector<std::pair<int, Exponent>> factors;
  factors.reserve(static_cast<std::size_t>(n));
  for (Exponent k = 0; k < n; ++k) {
    Exponent e = a.exp + k * step;
    if (e == 0 && a.sign > 0) return Series::zero(trunc, scale);
    if (e < 0) {
      pre = pre * Monomial{-a.sign, e};
      factors.emplace_back(a.sign, -e);
    } else {
      factors.emplace_back(a.sign, e);
    }
  }
  Exponent inner = trunc - pre.exp;
  if (inner < 0) return Series::zero(trunc, scale);
  std::vector<mpz_class> c(static_cast<std::size_t>(inner + 1));
  c[0] = 1;
  for (auto [s, e] : factors) {
    if (e > inner) continue;
    detail::mul_one_minus(c, s, e);
  }
  return detail::from_dense_integers(c, inner, scale).shifted(pre);
}

/// (a; q^step)_inf truncated at `trunc`. Requires a.exp > 0, or a = -q^0.
inline Series pochhammer_infinite(Monomial a, Exponent trunc, Exponent step = 1,
                                  Exponent scale = 1) {
  if (step <= 0) throw range_error("pochhammer_infinite: step must be positive");
  if (a.exp < 0) {
    throw divergent_product("(" + to_string(a) + "; q)_inf has factors of negative order");
  }
  if (a.exp == 0 && a.sign > 0) {
    throw zero_factor("(1; q)_inf contains the factor 1 - 1");
  }
  if (trunc < 0) return Series::zero(trunc, scale);
  std::vector<mpz_class> c(static_cast<std::size_t>(trunc + 1));
  c[0] = 1;
  for (Exponent e = a.exp; e <= trunc; e += step) {
    detail::mul_one_minus(c, a.sign, e);
  }
  return detail::from_dense_integers(c, trunc, scale);
}

/// prod over listed exponents e of 1/(1 - q^e), truncated at `trunc`.
inline Series inverse_product(const std::vector<Exponent>& exps, Exponent trunc,
                              Exponent scale = 1) {
  if (trunc < 0) return Series::zero(trunc, scale);
  std::vector<mpz_class> c(static_cast<std::size_t>(trunc + 1));
  c[0] = 1;
  for (Exponent e : exps) {
    if (e <= 0) throw range_error("inverse_product: exponents must be positive");
    if (e <= trunc) detail::div_one_minus(c, 1, e);
  }
  return detail::from_dense_integers(c, trunc, scale);
}

/// 1/(q; q)_n truncated at `trunc`; exact integer coefficients.
inline Series inverse_pochhammer_q(Exponent n, Exponent trunc, Exponent scale = 1) {
  std::vector<Exponent> exps;
  for (Exponent k = 1; k <= n; ++k) exps.push_back(k * scale);
  return inverse_product(exps, trunc, scale);
}

}  // namespace qseries

#endif  // QSERIES_POCHHAMMER_HPP_
