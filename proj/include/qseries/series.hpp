// SPDX-License-Identifier: Apache-2.0
//
// Truncated Laurent series in q with exact coefficients.
//
// A TruncSeries stores the coefficients of q^{e/D} for e = min_exp, ...,
// trunc_order, where D is the exponent scale. Everything above trunc_order is
// unknown: the series is only defined modulo q^{(trunc_order+1)/D}. The
// arithmetic propagates that bound pessimistically, so a result never claims
// more precision than its operands carry.

#ifndef QSERIES_SERIES_HPP_
#define QSERIES_SERIES_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qseries/errors.hpp"

namespace qseries {

using Exponent = std::int64_t;
using Rational = mpq_class;

/// A signed power of q: sign * q^{exp/D}.
struct Monomial {
  int sign = 1;
  Exponent exp = 0;

  constexpr Monomial() = default;
  constexpr Monomial(int s, Exponent e) : sign(s < 0 ? -1 : 1), exp(e) {}

  static constexpr Monomial q_pow(Exponent e) { return {1, e}; }

  constexpr Monomial operator*(const Monomial& o) const {
    return {sign * o.sign, exp + o.exp};
  }
  constexpr Monomial operator/(const Monomial& o) const {
    return {sign * o.sign, exp - o.exp};
  }
  constexpr Monomial operator-() const { return {-sign, exp}; }
  constexpr Monomial inverse() const { return {sign, -exp}; }
  constexpr Monomial pow(Exponent n) const {
    return {(n % 2 != 0) ? sign : 1, exp * n};
  }

  friend constexpr bool operator==(const Monomial&, const Monomial&) = default;
};

inline std::string to_string(const Monomial& m) {
  return std::string(m.sign < 0 ? "-" : "+") + "q^" + std::to_string(m.exp);
}

namespace detail {

template <class C>
inline bool is_zero_coeff(const C& c) {
  if constexpr (std::is_same_v<C, mpq_class> || std::is_same_v<C, mpz_class>) {
    return sgn(c) == 0;
  } else {
    return c == C(0);
  }
}

// GMP rationals built from a numerator/denominator pair are not reduced
// automatically, and arithmetic on unreduced values is undefined.
template <class C>
inline void canonicalize_coeff(C& c) {
  if constexpr (std::is_same_v<C, mpq_class>) c.canonicalize();
}

template <class C>
inline bool is_integer_coeff(const C& c) {
  if constexpr (std::is_same_v<C, mpq_class>) {
    return c.get_den() == 1;
  } else {
    return true;
  }
}

inline Exponent floor_div(Exponent a, Exponent b) {
  Exponent q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Exponent floor_mod(Exponent a, Exponent b) {
  return a - floor_div(a, b) * b;
}

}  // namespace detail

template <class Coeff = Rational>
class TruncSeries {
 public:
  using coeff_type = Coeff;

  /// Zero series known modulo q^{1/D}.
  TruncSeries() = default;

  static TruncSeries zero(Exponent trunc, Exponent scale = 1) {
    TruncSeries s;
    s.scale_ = check_scale(scale);
    s.trunc_ = trunc;
    return s;
  }

  static TruncSeries one(Exponent trunc, Exponent scale = 1) {
    return monomial(Monomial{}, trunc, scale);
  }

  static TruncSeries monomial(Monomial m, Exponent trunc, Exponent scale = 1,
                              const Coeff& c = Coeff(1)) {
    TruncSeries s = zero(trunc, scale);
    if (m.exp <= trunc && !detail::is_zero_coeff(c)) {
      s.min_exp_ = m.exp;
      s.coeffs_.push_back(m.sign < 0 ? Coeff(-c) : c);
      detail::canonicalize_coeff(s.coeffs_.back());
    }
    return s;
  }

  /// Builds a series from coefficients of q^{min_exp}, q^{min_exp+1}, ...
  /// Entries past `trunc` are dropped and leading zeros are stripped.
  static TruncSeries from_coeffs(Exponent min_exp, std::vector<Coeff> coeffs,
                                 Exponent trunc, Exponent scale = 1) {
    TruncSeries s;
    s.scale_ = check_scale(scale);
    s.trunc_ = trunc;
    s.min_exp_ = min_exp;
    s.coeffs_ = std::move(coeffs);
    for (auto& c : s.coeffs_) detail::canonicalize_coeff(c);
    s.normalize();
    return s;
  }

  Exponent scale() const { return scale_; }
  Exponent trunc_order() const { return trunc_; }
  Exponent min_exp() const { return min_exp_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const Coeff> coeffs() const { return coeffs_; }

  /// Lowest exponent that may carry a nonzero coefficient. For the zero
  /// series this is one past the truncation order.
  Exponent valuation() const { return is_zero() ? trunc_ + 1 : min_exp_; }

  /// Highest stored exponent (min_exp - 1 for the zero series).
  Exponent max_exp() const {
    return min_exp_ + static_cast<Exponent>(coeffs_.size()) - 1;
  }

  /// Coefficient of q^{e/D}. Throws for exponents beyond the truncation.
  Coeff coeff(Exponent e) const {
    if (e > trunc_) {
      throw range_error("coefficient of q^" + std::to_string(e) +
                        " requested beyond truncation order " +
                        std::to_string(trunc_));
    }
    if (is_zero() || e < min_exp_ || e > max_exp()) return Coeff(0);
    return coeffs_[static_cast<std::size_t>(e - min_exp_)];
  }

  bool is_integral() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Coeff& c) { return detail::is_integer_coeff(c); });
  }

  /// Drops everything above `t`; `t` larger than the current order is clamped.
  TruncSeries truncated(Exponent t) const {
    TruncSeries s = *this;
    s.trunc_ = std::min(t, trunc_);
    s.normalize();
    return s;
  }

  /// Multiplication by sign * q^{exp/D}.
  TruncSeries shifted(const Monomial& m) const {
    TruncSeries s = *this;
    s.min_exp_ += m.exp;
    s.trunc_ += m.exp;
    if (m.sign < 0) {
      for (auto& c : s.coeffs_) c = -c;
    }
    return s;
  }

  /// Re-expresses the series with scale k*D. Identity on the series itself.
  TruncSeries rescaled(Exponent k) const {
    if (k <= 0) throw range_error("rescale factor must be positive");
    if (k == 1) return *this;
    TruncSeries s;
    s.scale_ = scale_ * k;
    s.trunc_ = (trunc_ + 1) * k - 1;
    if (!is_zero()) {
      s.min_exp_ = min_exp_ * k;
      s.coeffs_.assign(static_cast<std::size_t>((max_exp() - min_exp_) * k + 1),
                       Coeff(0));
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        s.coeffs_[i * static_cast<std::size_t>(k)] = coeffs_[i];
      }
    }
    return s;
  }

  /// Re-expresses the series with a smaller scale D / k. Throws if any nonzero
  /// coefficient sits at an exponent not divisible by k.
  TruncSeries reduced_scale(Exponent k) const {
    if (k <= 0 || scale_ % k != 0) {
      throw range_error("scale " + std::to_string(scale_) +
                        " is not divisible by " + std::to_string(k));
    }
    if (k == 1) return *this;
    TruncSeries s;
    s.scale_ = scale_ / k;
    s.trunc_ = detail::floor_div(trunc_ + 1, k) - 1;
    std::vector<Coeff> out;
    Exponent lo = 0;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (detail::is_zero_coeff(coeffs_[i])) continue;
      Exponent e = min_exp_ + static_cast<Exponent>(i);
      if (detail::floor_mod(e, k) != 0) {
        throw range_error("exponent " + std::to_string(e) + "/" +
                          std::to_string(scale_) +
                          " does not collapse to scale " +
                          std::to_string(s.scale_));
      }
      Exponent ne = e / k;
      if (first) {
        lo = ne;
        first = false;
      }
      out.resize(static_cast<std::size_t>(ne - lo + 1), Coeff(0));
      out.back() = coeffs_[i];
    }
    s.min_exp_ = lo;
    s.coeffs_ = std::move(out);
    s.normalize();
    return s;
  }

  /// Smallest scale that represents the series exactly.
  TruncSeries with_minimal_scale() const {
    Exponent g = trunc_ + 1;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (!detail::is_zero_coeff(coeffs_[i])) {
        g = std::gcd(g, min_exp_ + static_cast<Exponent>(i));
      }
    }
    g = std::gcd(std::abs(g), scale_);
    return g <= 1 ? *this : reduced_scale(g);
  }

  TruncSeries operator-() const {
    TruncSeries s = *this;
    for (auto& c : s.coeffs_) c = -c;
    return s;
  }

  TruncSeries& operator*=(Coeff c) {
    detail::canonicalize_coeff(c);
    if (detail::is_zero_coeff(c)) {
      coeffs_.clear();
      min_exp_ = 0;
      return *this;
    }
    for (auto& x : coeffs_) x *= c;
    return *this;
  }

  friend TruncSeries operator*(TruncSeries s, const Coeff& c) { return s *= c; }
  friend TruncSeries operator*(const Coeff& c, TruncSeries s) { return s *= c; }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    return add_impl(a, b, false);
  }
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    return add_impl(a, b, true);
  }
  TruncSeries& operator+=(const TruncSeries& b) { return *this = *this + b; }
  TruncSeries& operator-=(const TruncSeries& b) { return *this = *this - b; }

  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    if (a.scale_ != b.scale_) {
      auto [x, y] = common_scale(a, b);
      return x * y;
    }
    Exponent trunc = std::min(a.trunc_ + b.valuation(), b.trunc_ + a.valuation());
    TruncSeries r = zero(trunc, a.scale_);
    if (a.is_zero() || b.is_zero()) return r;
    Exponent lo = a.min_exp_ + b.min_exp_;
    if (lo > trunc) return r;
    std::size_t len = static_cast<std::size_t>(trunc - lo + 1);
    std::size_t la = std::min(a.coeffs_.size(), len);
    std::size_t lb = std::min(b.coeffs_.size(), len);
    r.min_exp_ = lo;
    r.coeffs_ = cauchy_product(a.coeffs_, la, b.coeffs_, lb, len);
    r.normalize();
    return r;
  }
  TruncSeries& operator*=(const TruncSeries& b) { return *this = *this * b; }

  /// Multiplicative inverse modulo q^{(T - 2v + 1)/D} where v is the valuation.
  TruncSeries inverse() const {
    if (is_zero()) {
      throw zero_divisor("series is zero to order " + std::to_string(trunc_));
    }
    Exponent rel = trunc_ - min_exp_;
    std::size_t len = static_cast<std::size_t>(rel + 1);
    TruncSeries r = zero(-min_exp_ + rel, scale_);
    r.min_exp_ = -min_exp_;
    r.coeffs_ = invert_unit(coeffs_, len);
    r.normalize();
    return r;
  }

  friend TruncSeries operator/(const TruncSeries& a, const TruncSeries& b) {
    return a * b.inverse();
  }

  /// Exact equality: same scale, same truncation order, same coefficients.
  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.scale_ == b.scale_ && a.trunc_ == b.trunc_ &&
           a.coeffs_ == b.coeffs_ && (a.is_zero() || a.min_exp_ == b.min_exp_);
  }

  /// Lowest exponent at or below `upto` where the two series differ. Both
  /// series must be known to `upto` (after bringing them to a common scale).
  friend std::optional<Exponent> first_difference(const TruncSeries& a,
                                                  const TruncSeries& b,
                                                  Exponent upto) {
    auto [x, y] = common_scale(a, b);
    Exponent k = x.scale_ / a.scale_;
    Exponent t = (upto + 1) * k - 1;
    if (t > x.trunc_ || t > y.trunc_) {
      throw range_error("comparison order " + std::to_string(upto) +
                        " exceeds the known order of an operand");
    }
    Exponent lo = std::min(x.valuation(), y.valuation());
    for (Exponent e = lo; e <= t; ++e) {
      if (x.coeff(e) != y.coeff(e)) return e;
    }
    return std::nullopt;
  }

  /// True iff the series agree modulo q^{(upto+1)/D}.
  friend bool agree_to(const TruncSeries& a, const TruncSeries& b, Exponent upto) {
    return !first_difference(a, b, upto).has_value();
  }

  /// Brings both operands to the lcm of their scales.
  friend std::pair<TruncSeries, TruncSeries> common_scale(const TruncSeries& a,
                                                          const TruncSeries& b) {
    Exponent l = std::lcm(a.scale_, b.scale_);
    return {a.rescaled(l / a.scale_), b.rescaled(l / b.scale_)};
  }

 private:
  static Exponent check_scale(Exponent s) {
    if (s <= 0) throw range_error("exponent scale must be positive");
    return s;
  }

  void normalize() {
    if (!coeffs_.empty()) {
      Exponent keep = trunc_ - min_exp_ + 1;
      if (keep <= 0) {
        coeffs_.clear();
      } else if (static_cast<Exponent>(coeffs_.size()) > keep) {
        coeffs_.resize(static_cast<std::size_t>(keep));
      }
    }
    while (!coeffs_.empty() && detail::is_zero_coeff(coeffs_.back())) {
      coeffs_.pop_back();
    }
    std::size_t lead = 0;
    while (lead < coeffs_.size() && detail::is_zero_coeff(coeffs_[lead])) ++lead;
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      min_exp_ += static_cast<Exponent>(lead);
    }
    if (coeffs_.empty()) min_exp_ = 0;
  }

  static TruncSeries add_impl(const TruncSeries& a, const TruncSeries& b, bool negate) {
    if (a.scale_ != b.scale_) {
      auto [x, y] = common_scale(a, b);
      return add_impl(x, y, negate);
    }
    Exponent trunc = std::min(a.trunc_, b.trunc_);
    TruncSeries r = zero(trunc, a.scale_);
    if (a.is_zero() && b.is_zero()) return r;
    Exponent lo = std::min(a.valuation(), b.valuation());
    Exponent hi = std::min(trunc, std::max(a.is_zero() ? lo : a.max_exp(),
                                           b.is_zero() ? lo : b.max_exp()));
    if (lo > hi) return r;
    r.min_exp_ = lo;
    r.coeffs_.assign(static_cast<std::size_t>(hi - lo + 1), Coeff(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      Exponent e = a.min_exp_ + static_cast<Exponent>(i);
      if (e > hi) break;
      r.coeffs_[static_cast<std::size_t>(e - lo)] = a.coeffs_[i];
    }
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
      Exponent e = b.min_exp_ + static_cast<Exponent>(i);
      if (e > hi) break;
      auto& slot = r.coeffs_[static_cast<std::size_t>(e - lo)];
      if (negate) {
        slot -= b.coeffs_[i];
      } else {
        slot += b.coeffs_[i];
      }
    }
    r.normalize();
    return r;
  }

  static bool all_integer(const std::vector<Coeff>& v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!detail::is_integer_coeff(v[i])) return false;
    }
    return true;
  }

  static std::vector<Coeff> cauchy_product(const std::vector<Coeff>& a, std::size_t la,
                                           const std::vector<Coeff>& b, std::size_t lb,
                                           std::size_t len) {
    if constexpr (std::is_same_v<Coeff, mpq_class>) {
      // Integer operands accumulate with mpz_addmul, skipping canonicalization.
      if (all_integer(a, la) && all_integer(b, lb)) {
        std::vector<mpz_class> acc(len);
        for (std::size_t i = 0; i < la; ++i) {
          if (sgn(a[i]) == 0) continue;
          mpz_srcptr ai = mpq_numref(a[i].get_mpq_t());
          std::size_t jmax = std::min(lb, len - i);
          for (std::size_t j = 0; j < jmax; ++j) {
            mpz_addmul(acc[i + j].get_mpz_t(), ai, mpq_numref(b[j].get_mpq_t()));
          }
        }
        std::vector<Coeff> out(len);
        for (std::size_t k = 0; k < len; ++k) out[k] = mpq_class(acc[k]);
        return out;
      }
    }
    std::vector<Coeff> out(len, Coeff(0));
    Coeff tmp;
    for (std::size_t i = 0; i < la; ++i) {
      if (detail::is_zero_coeff(a[i])) continue;
      std::size_t jmax = std::min(lb, len - i);
      for (std::size_t j = 0; j < jmax; ++j) {
        if (detail::is_zero_coeff(b[j])) continue;
        tmp = a[i] * b[j];
        out[i + j] += tmp;
      }
    }
    return out;
  }

  // Inverse of u_0 + u_1 q + ... to `len` terms; u_0 is nonzero.
  static std::vector<Coeff> invert_unit(const std::vector<Coeff>& u, std::size_t len) {
    std::size_t lu = std::min(u.size(), len);
    if constexpr (std::is_same_v<Coeff, mpq_class>) {
      if (all_integer(u, lu) && (u[0] == 1 || u[0] == -1)) {
        bool neg = u[0] == -1;
        std::vector<mpz_class> b(len);
        b[0] = neg ? -1 : 1;
        mpz_class acc;
        for (std::size_t n = 1; n < len; ++n) {
          acc = 0;
          std::size_t kmax = std::min(n, lu - 1);
          for (std::size_t k = 1; k <= kmax; ++k) {
            mpz_addmul(acc.get_mpz_t(), mpq_numref(u[k].get_mpq_t()),
                       b[n - k].get_mpz_t());
          }
          b[n] = neg ? mpz_class(acc) : mpz_class(-acc);
        }
        std::vector<Coeff> out(len);
        for (std::size_t k = 0; k < len; ++k) out[k] = mpq_class(b[k]);
        return out;
      }
    }
    std::vector<Coeff> b(len, Coeff(0));
    Coeff inv0 = Coeff(1) / u[0];
    b[0] = inv0;
    Coeff acc;
    for (std::size_t n = 1; n < len; ++n) {
      acc = 0;
      std::size_t kmax = std::min(n, lu - 1);
      for (std::size_t k = 1; k <= kmax; ++k) {
        if (detail::is_zero_coeff(u[k])) continue;
        acc += u[k] * b[n - k];
      }
      b[n] = -acc * inv0;
    }
    return b;
  }

  Exponent scale_ = 1;
  Exponent min_exp_ = 0;
  std::vector<Coeff> coeffs_;
  Exponent trunc_ = 0;
};

using Series = TruncSeries<Rational>;

/// Coefficients of q^0 .. q^T as a dense vector (scale 1).
template <class C>
std::vector<C> dense_coeffs(const TruncSeries<C>& s, Exponent upto) {
  std::vector<C> out;
  out.reserve(static_cast<std::size_t>(std::max<Exponent>(upto + 1, 0)));
  for (Exponent e = 0; e <= upto; ++e) out.push_back(s.coeff(e));
  return out;
}

/// Sum of the coefficient sequence as q^{e} terms, for diagnostics.
template <class C>
std::string to_string(const TruncSeries<C>& s) {
  std::string out;
  if (s.is_zero()) {
    out = "0";
  } else {
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
      const C& c = s.coeffs()[i];
      if (detail::is_zero_coeff(c)) continue;
      if (!out.empty()) out += " + ";
      out += "(" + c.get_str() + ")q^" + std::to_string(s.min_exp() + static_cast<Exponent>(i));
      if (s.scale() != 1) out += "/" + std::to_string(s.scale());
    }
  }
  out += " + O(q^" + std::to_string(s.trunc_order() + 1);
  if (s.scale() != 1) out += "/" + std::to_string(s.scale());
  return out + ")";
}

}  // namespace qseries

#endif  // QSERIES_SERIES_HPP_
