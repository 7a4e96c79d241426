// SPDX-License-Identifier: Apache-2.0
//
// Multiprecision evaluation of B_N(q) and (q)_inf at rational 0 < q < 1.
//
// Two routes:
//   ThetaProduct      the N^2-term theta formula, every j evaluated as a
//                     truncated infinite product;
//   SeriesPartialSum  exact q-expansion coefficients summed at q, with a
//                     geometric tail estimate.
// Error estimates are heuristic (tail bounds plus rounding slack), not
// interval enclosures.
//
// The published grid tabulates the density 1/B_N(q) rather than B_N(q)
// itself (B_N(q) >= 1 for 0 < q < 1); TableCell::tabulated holds that value.

#ifndef QSERIES_NUMERIC_HPP_
#define QSERIES_NUMERIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "qseries/identities.hpp"
#include "qseries/series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

using Real = boost::multiprecision::mpfr_float;

enum class Route { ThetaProduct, SeriesPartialSum };

inline const char* to_string(Route r) {
  return r == Route::ThetaProduct ? "theta-product" : "series-partial-sum";
}

struct WorkCounters {
  std::uint64_t terms = 0;
  std::uint64_t product_factors = 0;
  std::uint64_t series_order = 0;
};

struct EvalResult {
  Real value;
  Real err_est;
  Route route = Route::ThetaProduct;
  int digits = 5;
  unsigned working_digits = 0;
  WorkCounters work;
};

/// Guard digits added beyond the requested output digits.
inline constexpr int kGuardDigits = 10;

/// Sets the working precision (decimal digits) of new Real values for the
/// lifetime of the guard.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned digits10) : saved_(Real::default_precision()) {
    Real::default_precision(digits10);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

/// Rational q = num / den with 0 < q < 1.
struct RationalQ {
  mpz_class num = 1;
  mpz_class den = 2;

  static RationalQ parse(const std::string& text) {
    RationalQ out;
    auto slash = text.find('/');
    try {
      mpz_class num(slash == std::string::npos ? text : text.substr(0, slash));
      mpz_class den(slash == std::string::npos ? std::string("1") : text.substr(slash + 1));
      if (den == 0) throw range_error("q has a zero denominator: '" + text + "'");
      mpq_class v(num, den);
      v.canonicalize();
      out.num = v.get_num();
      out.den = v.get_den();
    } catch (const std::invalid_argument&) {
      throw parse_error("cannot parse q = '" + text + "'");
    }
    if (out.den <= 0 || out.num <= 0 || out.num >= out.den) {
      throw range_error("q must be a rational in (0, 1), got '" + text + "'");
    }
    return out;
  }

  std::string str() const { return num.get_str() + "/" + den.get_str(); }
  Real value() const { return Real(num.get_str()) / Real(den.get_str()); }
  double approx() const { return num.get_d() / den.get_d(); }
};

/// Round-half-away-from-zero to `digits` decimals, as a fixed-point string.
inline std::string round_fixed(const Real& x, int digits) {
  Real scale = boost::multiprecision::pow(Real(10), digits);
  Real scaled = boost::multiprecision::floor(boost::multiprecision::abs(x) * scale + Real(0.5));
  std::string s = scaled.str(0, std::ios_base::fixed);
  auto dot = s.find('.');
  if (dot != std::string::npos) s.erase(dot);
  while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
  s.insert(s.end() - digits, '.');
  if (x < 0 && scaled != 0) s.insert(s.begin(), '-');
  return s;
}

namespace detail {

// Evaluates canonical theta symbols at a fixed q with a shared cache.
class ThetaEvaluator {
 public:
  ThetaEvaluator(const Real& q, const Real& tol) : q_(q), tol_(tol) {}

  Real q_pow(Exponent e) {
    return boost::multiprecision::pow(q_, Real(static_cast<double>(e)));
  }

  // prod_{k>=0} (1 - sign q^{e0 + k step}); the tail bound
  // |log prod_{k>K}| <= q^{e}/((1 - q^step)(1 - q^e)) drives truncation.
  // Returns value and the relative-error bound of the omitted tail.
  std::pair<Real, Real> pochhammer(int sign, Exponent e0, Exponent step) {
    Real prod = 1;
    Exponent e = e0;
    Real qe = q_pow(e0);
    Real qstep = q_pow(step);
    Real denom_step = 1 - qstep;
    for (;;) {
      Real tail = qe / (denom_step * (1 - qe));
      if (e > e0 && tail < tol_) return {prod, tail};
      prod *= (sign > 0) ? Real(1 - qe) : Real(1 + qe);
      ++factors;
      e += step;
      qe *= qstep;
    }
  }

  std::pair<Real, Real> canonical_j(const JSymbol& c) {
    auto key = std::make_tuple(c.sign, c.a, c.m);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto [p1, t1] = pochhammer(c.sign, c.a, c.m);
    auto [p2, t2] = pochhammer(c.sign, c.m - c.a, c.m);
    auto [p3, t3] = pochhammer(1, c.m, c.m);
    std::pair<Real, Real> out{p1 * p2 * p3, t1 + t2 + t3};
    cache_.emplace(key, out);
    return out;
  }

  // Value and relative-error bound of a theta quotient.
  std::pair<Real, Real> quotient(const ThetaQuotient& tq) {
    NormalizedQuotient nq = normalize(tq);
    if (nq.is_zero) return {Real(0), Real(0)};
    Real v = q_pow(nq.prefactor.exp);
    if (nq.prefactor.sign < 0) v = -v;
    Real rel = 0;
    for (const auto& c : nq.numerator) {
      auto [x, t] = canonical_j(c);
      v *= x;
      rel += t;
    }
    for (const auto& c : nq.denominator) {
      auto [x, t] = canonical_j(c);
      v /= x;
      rel += t;
    }
    return {v, rel};
  }

  std::uint64_t factors = 0;

 private:
  Real q_;
  Real tol_;
  std::map<std::tuple<int, Exponent, Exponent>, std::pair<Real, Real>> cache_;
};

inline unsigned working_digits(int target_digits, Exponent n, const RationalQ& q,
                               Exponent min_valuation) {
  double extra = std::ceil(std::log10(static_cast<double>(n * n)));
  // Terms of order q^{v} with v < 0 cancel; carry enough digits to absorb them.
  if (min_valuation < 0) {
    extra += std::ceil(static_cast<double>(-min_valuation) * -std::log10(q.approx()));
  }
  return static_cast<unsigned>(target_digits + kGuardDigits + extra + 5);
}

}  // namespace detail

/// (q; q)_inf at rational q.
inline EvalResult eval_pochhammer_numeric(const RationalQ& q, int target_digits,
                                          unsigned extra_digits = 0) {
  unsigned wd = static_cast<unsigned>(target_digits + kGuardDigits + 5) + extra_digits;
  PrecisionScope scope(wd);
  Real tol = boost::multiprecision::pow(Real(10), -(target_digits + kGuardDigits));
  detail::ThetaEvaluator ev(q.value(), tol);
  auto [v, rel] = ev.pochhammer(1, 1, 1);
  EvalResult out;
  out.value = v;
  out.err_est = boost::multiprecision::abs(v) * rel +
                boost::multiprecision::pow(Real(10), -static_cast<int>(wd) + 3);
  out.route = Route::ThetaProduct;
  out.digits = target_digits;
  out.working_digits = wd;
  out.work.product_factors = ev.factors;
  out.work.terms = 1;
  return out;
}

/// B_N(q) from the N^2-term theta formula.
inline EvalResult eval_bn_theta_numeric(Exponent n, const RationalQ& q, int target_digits,
                                        unsigned extra_digits = 0) {
  auto terms = bn_theta_terms(n);
  Exponent vmin = 0;
  for (const auto& tq : terms) {
    NormalizedQuotient nq = normalize(tq);
    if (!nq.is_zero) vmin = std::min(vmin, nq.prefactor.exp);
  }
  unsigned wd = detail::working_digits(target_digits, n, q, vmin) + extra_digits;
  PrecisionScope scope(wd);
  Real eps = boost::multiprecision::pow(Real(10), -static_cast<int>(wd));
  Real tol = boost::multiprecision::pow(Real(10), -(target_digits + kGuardDigits));
  detail::ThetaEvaluator ev(q.value(), tol);

  std::vector<std::pair<Real, Real>> values;
  values.reserve(terms.size());
  for (const auto& tq : terms) values.push_back(ev.quotient(tq));
  // Ascending magnitude fixes the accumulation order.
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    return boost::multiprecision::abs(a.first) < boost::multiprecision::abs(b.first);
  });
  Real sum = 0;
  Real err = 0;
  for (const auto& [v, rel] : values) {
    sum += v;
    err += boost::multiprecision::abs(v) * (rel + 64 * eps);
  }
  auto [pre, pre_rel] = ev.quotient(bn_theta_prefactor(n));
  EvalResult out;
  out.value = sum * pre;
  out.err_est = err * boost::multiprecision::abs(pre) +
                boost::multiprecision::abs(out.value) * (pre_rel + 64 * eps);
  out.route = Route::ThetaProduct;
  out.digits = target_digits;
  out.working_digits = wd;
  out.work.terms = terms.size();
  out.work.product_factors = ev.factors;
  if (out.value <= 0) {
    throw precision_error("theta route produced a nonpositive value for N = " +
                          std::to_string(n) + ", q = " + q.str());
  }
  return out;
}

/// sum_{k <= T} c_k q^k with the tail extrapolated geometrically from the
/// last ten terms. The series must have scale 1 and no negative exponents.
inline EvalResult eval_series_partial(const Series& s, const RationalQ& q, int target_digits) {
  if (s.scale() != 1 || s.valuation() < 0) {
    throw range_error("eval_series_partial expects a power series at scale 1");
  }
  unsigned wd = static_cast<unsigned>(target_digits + kGuardDigits + 5);
  PrecisionScope scope(wd);
  const Real qv = q.value();
  const Exponent top = s.trunc_order();
  Real sum = 0;
  Real qk = 1;
  std::vector<Real> last;
  for (Exponent k = 0; k <= top; ++k) {
    Rational c = s.coeff(k);
    Real term = Real(c.get_num().get_str()) / Real(c.get_den().get_str()) * qk;
    sum += term;
    if (k > top - 10) last.push_back(boost::multiprecision::abs(term));
    qk *= qv;
  }
  Real tail = 0;
  Real tmax = 0;
  for (const auto& t : last) tmax = std::max(tmax, t);
  if (tmax > 0) {
    // Ratio from the first and last nonzero terms of the window.
    std::optional<std::size_t> first;
    std::optional<std::size_t> final;
    for (std::size_t i = 0; i < last.size(); ++i) {
      if (last[i] > 0) {
        if (!first) first = i;
        final = i;
      }
    }
    Real rho = qv;
    if (*final > *first) {
      rho = boost::multiprecision::pow(last[*final] / last[*first],
                                       Real(1) / Real(static_cast<double>(*final - *first)));
    }
    if (rho > Real(0.9)) {
      throw tail_estimate_unreliable("last-terms ratio " + rho.str(6) + " exceeds 0.9 at q = " +
                                     q.str());
    }
    tail = tmax * rho / (1 - rho);
  }
  EvalResult out;
  out.value = sum;
  out.err_est = tail + boost::multiprecision::pow(Real(10), -static_cast<int>(wd) + 3);
  out.route = Route::SeriesPartialSum;
  out.digits = target_digits;
  out.working_digits = wd;
  out.work.terms = static_cast<std::uint64_t>(top + 1);
  out.work.series_order = static_cast<std::uint64_t>(top);
  return out;
}

/// Largest N for which the series route builds B_N by the multisum; above
/// it the exact theta expansion supplies the coefficients.
inline constexpr Exponent kSeriesMultisumMaxLevel = 5;

/// Exact B_N coefficients to order `trunc` for the series route.
inline Series bn_series_for_eval(Exponent n, Exponent trunc) {
  return n <= kSeriesMultisumMaxLevel ? bn_multisum(n, trunc) : bn_theta(n, trunc);
}

/// Truncation order that makes the partial-sum tail negligible at q.
inline Exponent series_order_for(const RationalQ& q, int target_digits) {
  // Coefficients of B_N grow subexponentially; this allows roughly a 10^12
  // coefficient at the cutoff for q = 1/2.
  double bits = (target_digits + kGuardDigits + 12) * std::log2(10.0);
  double per_term = -std::log2(q.approx());
  return std::max<Exponent>(20, static_cast<Exponent>(std::ceil(bits / per_term)) + 10);
}

struct TableCell {
  Exponent level = 0;  // 0 marks the (q)_inf row
  RationalQ q;
  EvalResult primary;
  std::optional<EvalResult> secondary;
  Real tabulated;       // 1/B_N(q), or (q)_inf on the last row
  std::string rounded;  // tabulated, rounded half away from zero
};

inline const std::vector<Exponent>& table1_levels() {
  static const std::vector<Exponent> levels{2, 3, 4, 5, 6, 7, 8, 9, 10, 100};
  return levels;
}

inline const std::vector<RationalQ>& table1_qs() {
  static const std::vector<RationalQ> qs{{1, 2}, {1, 3}, {1, 5}, {1, 7}, {1, 11}};
  return qs;
}

/// B_N(q) by the theta route, cross-checked by the series route when
/// N <= max_series_level. Throws precision_error when the routes disagree by
/// 10^{-(digits+1)} or more.
inline TableCell eval_bn_cell(Exponent n, const RationalQ& q, int digits,
                              Exponent max_series_level = 10,
                              const Series* cached_series = nullptr) {
  TableCell cell;
  cell.level = n;
  cell.q = q;
  cell.primary = eval_bn_theta_numeric(n, q, digits);
  if (n <= max_series_level) {
    Exponent order = series_order_for(q, digits);
    EvalResult sec;
    if (cached_series && cached_series->trunc_order() >= order) {
      sec = eval_series_partial(cached_series->truncated(order), q, digits);
    } else {
      sec = eval_series_partial(bn_series_for_eval(n, order), q, digits);
    }
    PrecisionScope scope(cell.primary.working_digits);
    Real diff = boost::multiprecision::abs(Real(cell.primary.value) - Real(sec.value));
    Real limit = boost::multiprecision::pow(Real(10), -(digits + 1));
    if (diff >= limit) {
      throw precision_error("N = " + std::to_string(n) + ", q = " + q.str() +
                            ": theta and series routes differ by " + diff.str(3));
    }
    cell.secondary = sec;
  }
  PrecisionScope scope(cell.primary.working_digits);
  cell.tabulated = Real(1) / cell.primary.value;
  cell.rounded = round_fixed(cell.tabulated, digits);
  return cell;
}

/// The full grid: N in {2..10, 100} x q in {1/2, 1/3, 1/5, 1/7, 1/11}, then
/// the (q)_inf row.
inline std::vector<TableCell> table1(int digits = 5) {
  std::vector<TableCell> out;
  Exponent order = 0;
  for (const auto& q : table1_qs()) order = std::max(order, series_order_for(q, digits));
  for (Exponent n : table1_levels()) {
    std::optional<Series> series;
    if (n <= 10) series = bn_series_for_eval(n, order);
    for (const auto& q : table1_qs()) {
      try {
        out.push_back(eval_bn_cell(n, q, digits, 10, series ? &*series : nullptr));
      } catch (const error& e) {
        throw precision_error("cell (N = " + std::to_string(n) + ", q = " + q.str() +
                              "): " + e.what());
      }
    }
  }
  for (const auto& q : table1_qs()) {
    TableCell cell;
    cell.q = q;
    cell.primary = eval_pochhammer_numeric(q, digits);
    cell.tabulated = cell.primary.value;
    cell.rounded = round_fixed(cell.tabulated, digits);
    out.push_back(cell);
  }
  return out;
}

}  // namespace qseries

#endif  // QSERIES_NUMERIC_HPP_
