// SPDX-License-Identifier: Apache-2.0
//
// Theta functions j(x; q^m) = (x; q^m)_inf (q^m/x; q^m)_inf (q^m; q^m)_inf
// restricted to signed-monomial arguments x = +-q^a.
//
// Every expansion goes through normalize_j, which applies the shift law
//   j(Q^n x; Q) = (-1)^n Q^{-n(n-1)/2} x^{-n} j(x; Q)
// to move the argument exponent into [0, m) and pull out a monomial.

#ifndef QSERIES_THETA_HPP_
#define QSERIES_THETA_HPP_

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "qseries/pochhammer.hpp"
#include "qseries/series.hpp"

namespace qseries {

/// j(sign * q^a; q^m).
struct JSymbol {
  int sign = 1;
  Exponent a = 0;
  Exponent m = 1;

  Monomial argument() const { return {sign, a}; }
  friend bool operator==(const JSymbol&, const JSymbol&) = default;
};

/// J_{a,m} = j(q^a; q^m).
inline JSymbol J(Exponent a, Exponent m) { return {1, a, m}; }
/// Jbar_{a,m} = j(-q^a; q^m).
inline JSymbol Jbar(Exponent a, Exponent m) { return {-1, a, m}; }
/// J_m = J_{m,3m} = (q^m; q^m)_inf.
inline JSymbol J(Exponent m) { return J(m, 3 * m); }

inline JSymbol make_jsymbol(Monomial x, Exponent m) { return {x.sign, x.exp, m}; }

struct NormalizedJ {
  Monomial prefactor;
  JSymbol canonical;
  bool is_zero = false;
};

inline NormalizedJ normalize_j(const JSymbol& sym) {
  if (sym.m < 1) throw range_error("theta modulus must be positive");
  Exponent n = detail::floor_div(sym.a, sym.m);
  Exponent a0 = sym.a - n * sym.m;
  NormalizedJ out;
  out.canonical = {sym.sign, a0, sym.m};
  out.is_zero = sym.sign > 0 && a0 == 0;
  // (-1)^n q^{-m n(n-1)/2} (s q^{a0})^{-n}
  int sign = (n % 2 != 0) ? -1 : 1;
  if (n % 2 != 0) sign *= sym.sign;
  out.prefactor = {sign, -sym.m * n * (n - 1) / 2 - n * a0};
  return out;
}

/// Product expansion of an already canonical, nonzero symbol (valuation 0).
inline Series expand_canonical_j(const JSymbol& c, Exponent trunc) {
  if (trunc < 0) return Series::zero(trunc);
  Series s = pochhammer_infinite({c.sign, c.a}, trunc, c.m);
  s *= pochhammer_infinite({c.sign, c.m - c.a}, trunc, c.m);
  s *= pochhammer_infinite({1, c.m}, trunc, c.m);
  return s;
}

inline Series expand_j(const JSymbol& sym, Exponent trunc) {
  NormalizedJ nj = normalize_j(sym);
  if (nj.is_zero) return Series::zero(trunc);
  Exponent inner = trunc - nj.prefactor.exp;
  if (inner < 0) return Series::zero(trunc);
  return expand_canonical_j(nj.canonical, inner).shifted(nj.prefactor);
}

/// Bilateral sum  sum_n (-1)^n q^{m n(n-1)/2} x^n. Test oracle only.
inline Series triple_product_oracle(const JSymbol& sym, Exponent trunc) {
  if (sym.m < 1) throw range_error("theta modulus must be positive");
  auto exponent = [&](Exponent n) { return sym.m * n * (n - 1) / 2 + sym.a * n; };
  // The exponent is convex in n with vertex near 1/2 - a/m.
  Exponent start = detail::floor_div(sym.m - 2 * sym.a, 2 * sym.m);
  std::vector<std::pair<Exponent, int>> terms;
  Exponent lo = trunc + 1;
  auto visit = [&](Exponent n) {
    Exponent e = exponent(n);
    if (e > trunc) return false;
    int c = (n % 2 != 0) ? -1 : 1;
    if (n % 2 != 0) c *= sym.sign;
    terms.emplace_back(e, c);
    lo = std::min(lo, e);
    return true;
  };
  visit(start);
  for (Exponent n = start + 1; visit(n); ++n) {
  }
  for (Exponent n = start - 1; visit(n); --n) {
  }
  if (terms.empty()) return Series::zero(trunc);
  std::vector<Rational> coeffs(static_cast<std::size_t>(trunc - lo + 1), Rational(0));
  for (auto [e, c] : terms) coeffs[static_cast<std::size_t>(e - lo)] += c;
  return Series::from_coeffs(lo, std::move(coeffs), trunc);
}

/// Product of expansions j(x_1) j(x_2) ... to order `trunc`.
inline Series j_list(const std::vector<JSymbol>& syms, Exponent trunc) {
  Monomial pre{};
  std::vector<JSymbol> canon;
  for (const auto& s : syms) {
    NormalizedJ nj = normalize_j(s);
    if (nj.is_zero) return Series::zero(trunc);
    pre = pre * nj.prefactor;
    canon.push_back(nj.canonical);
  }
  Exponent inner = trunc - pre.exp;
  if (inner < 0) return Series::zero(trunc);
  Series acc = Series::one(inner);
  for (const auto& c : canon) acc *= expand_canonical_j(c, inner);
  return acc.shifted(pre);
}

/// coefficient * prod(numerator) / prod(denominator) over theta symbols.
struct ThetaQuotient {
  Monomial coefficient;
  std::vector<JSymbol> numerator;
  std::vector<JSymbol> denominator;
};

struct NormalizedQuotient {
  bool is_zero = false;
  Monomial prefactor;
  std::vector<JSymbol> numerator;
  std::vector<JSymbol> denominator;
};

/// Normalizes every symbol and collects the monomials. Throws
/// zero_denominator if a denominator symbol vanishes identically.
inline NormalizedQuotient normalize(const ThetaQuotient& tq) {
  NormalizedQuotient out;
  out.prefactor = tq.coefficient;
  for (std::size_t i = 0; i < tq.denominator.size(); ++i) {
    NormalizedJ nj = normalize_j(tq.denominator[i]);
    if (nj.is_zero) {
      const auto& d = tq.denominator[i];
      throw zero_denominator("denominator j(" + std::string(d.sign < 0 ? "-" : "+") +
                             "q^" + std::to_string(d.a) + "; q^" + std::to_string(d.m) +
                             ") vanishes identically");
    }
    out.prefactor = out.prefactor / nj.prefactor;
    out.denominator.push_back(nj.canonical);
  }
  for (const auto& s : tq.numerator) {
    NormalizedJ nj = normalize_j(s);
    if (nj.is_zero) out.is_zero = true;
    out.prefactor = out.prefactor * nj.prefactor;
    out.numerator.push_back(nj.canonical);
  }
  return out;
}

inline Series expand(const ThetaQuotient& tq, Exponent trunc) {
  NormalizedQuotient nq = normalize(tq);
  if (nq.is_zero) return Series::zero(trunc);
  Exponent inner = trunc - nq.prefactor.exp;
  if (inner < 0) return Series::zero(trunc);
  Series num = Series::one(inner);
  for (const auto& c : nq.numerator) num *= expand_canonical_j(c, inner);
  if (!nq.denominator.empty()) {
    Series den = Series::one(inner);
    for (const auto& c : nq.denominator) den *= expand_canonical_j(c, inner);
    num *= den.inverse();
  }
  return num.shifted(nq.prefactor);
}

inline std::string to_string(const JSymbol& s) {
  return std::string("j(") + (s.sign < 0 ? "-" : "+") + " q^" + std::to_string(s.a) +
         " ; q^" + std::to_string(s.m) + ")";
}

namespace detail {

class SymbolLexer {
 public:
  explicit SymbolLexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  Exponent integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string tok(text_.substr(start, pos_ - start));
    if (tok.empty() || tok == "-" || tok == "+") fail("expected an integer");
    return std::stoll(tok);
  }
  // "q^e", "q", or "1"
  Exponent power() {
    if (accept("1")) return 0;
    expect("q");
    if (accept("^")) {
      if (accept("(")) {
        Exponent e = integer();
        expect(")");
        return e;
      }
      return integer();
    }
    return 1;
  }
  bool at_end() {
    skip_ws();
    return pos_ == text_.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("cannot parse theta symbol '" + std::string(text_) + "' at offset " +
                      std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `j(s q^a ; q^m)`, `Jbar(a,m)`, `J(a,m)` or `J(m)`.
inline JSymbol parse_jsymbol(std::string_view text) {
  detail::SymbolLexer lx(text);
  JSymbol out;
  if (lx.accept("Jbar")) {
    lx.expect("(");
    Exponent a = lx.integer();
    lx.expect(",");
    Exponent m = lx.integer();
    lx.expect(")");
    out = Jbar(a, m);
  } else if (lx.accept("J")) {
    lx.expect("(");
    Exponent first = lx.integer();
    if (lx.accept(",")) {
      Exponent m = lx.integer();
      lx.expect(")");
      out = J(first, m);
    } else {
      lx.expect(")");
      out = J(first);
    }
  } else if (lx.accept("j")) {
    lx.expect("(");
    int sign = 1;
    if (lx.accept("-")) {
      sign = -1;
    } else {
      lx.accept("+");
    }
    Exponent a = lx.power();
    lx.expect(";");
    Exponent m = lx.power();
    lx.expect(")");
    out = {sign, a, m};
  } else {
    lx.fail("expected j(...), J(...) or Jbar(...)");
  }
  if (!lx.at_end()) lx.fail("trailing characters");
  if (out.m < 1) lx.fail("modulus must be positive");
  return out;
}

}  // namespace qseries

#endif  // QSERIES_THETA_HPP_
