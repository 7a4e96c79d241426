// SPDX-License-Identifier: Apache-2.0
//
// Hecke-type double sums f_{a,b,c}, Appell-Lerch sums m(x, q^M, z), the
// combination g_{a,b,c}, and the theta block theta_{n,p} that together make up
// both sides of the f = g + theta / Jbar decomposition.
//
// All arguments are signed monomials in q. A term is called generic when no
// theta denominator normalizes to zero and no Appell-Lerch denominator is
// 1 - q^0.

#ifndef QSERIES_HECKE_HPP_
#define QSERIES_HECKE_HPP_

#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

struct HeckeParams {
  Exponent a = 1;
  Exponent b = 1;
  Exponent c = 1;
  Monomial x;
  Monomial y;
};

struct AppellArgs {
  Monomial x;
  Exponent modulus = 1;  // the sum is taken in base q^modulus
  Monomial z;
};

namespace detail {

inline constexpr Exponent kNegInf = std::numeric_limits<Exponent>::min() / 4;
inline constexpr Exponent kPosInf = std::numeric_limits<Exponent>::max() / 4;

inline Exponent binom2(Exponent n) { return n * (n - 1) / 2; }

// Integers n in [lo, hi] with f(n) <= limit, for f convex with its real
// minimum in [vfloor, vfloor + 1]. Returns nullopt when empty.
template <class F>
std::optional<std::pair<Exponent, Exponent>> convex_interval(const F& f, Exponent vfloor,
                                                             Exponent lo, Exponent hi,
                                                             Exponent limit) {
  if (lo > hi) return std::nullopt;
  Exponent best = std::clamp(vfloor, lo, hi);
  if (vfloor + 1 >= lo && vfloor + 1 <= hi && f(vfloor + 1) < f(best)) best = vfloor + 1;
  if (f(best) > limit) return std::nullopt;
  Exponent left = best;
  while (left - 1 >= lo && f(left - 1) <= limit) --left;
  Exponent right = best;
  while (right + 1 <= hi && f(right + 1) <= limit) ++right;
  return std::make_pair(left, right);
}

// Minimum of a convex f over [lo, hi] (one side may be infinite).
template <class F>
Exponent convex_min(const F& f, Exponent vfloor, Exponent lo, Exponent hi) {
  Exponent best = std::clamp(vfloor, lo, hi);
  Exponent v = f(best);
  if (vfloor + 1 >= lo && vfloor + 1 <= hi) v = std::min(v, f(vfloor + 1));
  return v;
}

// Product of factors, factor i known to have valuation >= v_i; each factor
// is requested at the order that makes the product exact to `trunc`.
struct Factor {
  Exponent valuation_bound;
  std::function<Series(Exponent)> expand;
};

inline Series product_to_order(const std::vector<Factor>& factors, Exponent trunc) {
  Exponent total = 0;
  for (const auto& f : factors) total += f.valuation_bound;
  if (total > trunc) return Series::zero(trunc);
  std::optional<Series> acc;
  for (const auto& f : factors) {
    Series next = f.expand(trunc - (total - f.valuation_bound));
    acc = acc ? *acc * next : std::move(next);
  }
  return acc ? acc->truncated(trunc) : Series::one(trunc);
}

}  // namespace detail

/// Options for hecke_f. `extra_rows` widens the summation past the proven
/// bound (used to check that the bound is sound).
struct HeckeOptions {
  Exponent scale = 1;
  Exponent extra_rows = 0;
};

/// f_{a,b,c}(x, y, q) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} x^r y^s
///                      q^{a C(r,2) + b r s + c C(s,2)}.
/// With scale D the monomial exponents are read in units of 1/D.
inline Series hecke_f(const HeckeParams& p, Exponent trunc, HeckeOptions opt = {}) {
  if (p.a <= 0 || p.c <= 0 || p.b < 0) {
    throw non_truncatable("f_{" + std::to_string(p.a) + "," + std::to_string(p.b) + "," +
                          std::to_string(p.c) +
                          "}: exponent is not bounded below on the summation quadrants");
  }
  const Exponent D = opt.scale;
  const Exponent xe = p.x.exp;
  const Exponent ye = p.y.exp;
  auto q_exp = [&](Exponent r, Exponent s) {
    return D * (p.a * detail::binom2(r) + p.b * r * s + p.c * detail::binom2(s)) + r * xe +
           s * ye;
  };
  auto col_part = [&](Exponent s) { return D * p.c * detail::binom2(s) + s * ye; };
  const Exponent col_vfloor = detail::floor_div(D * p.c - 2 * ye, 2 * D * p.c);
  auto row_part = [&](Exponent r) { return D * p.a * detail::binom2(r) + r * xe; };
  const Exponent row_vfloor = detail::floor_div(D * p.a - 2 * xe, 2 * D * p.a);

  std::vector<std::pair<Exponent, int>> terms;
  Exponent lo_exp = trunc + 1;

  // b r s >= 0 on both quadrants, so row_part(r) + min_s col_part(s) bounds
  // every exponent in row r from below.
  auto quadrant = [&](Exponent rlo, Exponent rhi, Exponent slo, Exponent shi, int sign) {
    Exponent cmin = detail::convex_min(col_part, col_vfloor, slo, shi);
    auto bound = [&](Exponent r) { return row_part(r) + cmin; };
    auto rows = detail::convex_interval(bound, row_vfloor, rlo, rhi, trunc);
    if (!rows) return;
    Exponent first = std::max(rlo, rows->first - opt.extra_rows);
    Exponent last = std::min(rhi, rows->second + opt.extra_rows);
    for (Exponent r = first; r <= last; ++r) {
      auto row = [&](Exponent s) { return q_exp(r, s); };
      Exponent vfloor = detail::floor_div(D * p.c - 2 * (D * p.b * r + ye), 2 * D * p.c);
      auto cols = detail::convex_interval(row, vfloor, slo, shi, trunc);
      if (!cols) continue;
      for (Exponent s = cols->first; s <= cols->second; ++s) {
        int c = sign;
        if ((r + s) % 2 != 0) c = -c;
        if (r % 2 != 0) c *= p.x.sign;
        if (s % 2 != 0) c *= p.y.sign;
        Exponent e = q_exp(r, s);
        terms.emplace_back(e, c);
        lo_exp = std::min(lo_exp, e);
      }
    }
  };
  quadrant(0, detail::kPosInf, 0, detail::kPosInf, 1);
  quadrant(detail::kNegInf, -1, detail::kNegInf, -1, -1);

  if (terms.empty()) return Series::zero(trunc, D);
  std::vector<Rational> coeffs(static_cast<std::size_t>(trunc - lo_exp + 1), Rational(0));
  for (auto [e, c] : terms) coeffs[static_cast<std::size_t>(e - lo_exp)] += c;
  return Series::from_coeffs(lo_exp, std::move(coeffs), trunc, D);
}

/// True iff neither z nor x z is +q^{kM} for an integer k.
inline bool appell_pole_free(const AppellArgs& args) {
  auto is_power_of_base = [&](Monomial w) {
    return w.sign > 0 && detail::floor_mod(w.exp, args.modulus) == 0;
  };
  return !is_power_of_base(args.z) && !is_power_of_base(args.x * args.z);
}

/// Lower bound for the valuation of appell_m(args, .).
inline Exponent appell_valuation_bound(const AppellArgs& args) {
  const Exponent M = args.modulus;
  auto base = [&](Exponent r) { return M * detail::binom2(r) + r * args.z.exp; };
  Exponent vfloor = detail::floor_div(M - 2 * args.z.exp, 2 * M);
  Exponent sum_bound = detail::convex_min(base, vfloor, detail::kNegInf, detail::kPosInf);
  NormalizedJ nj = normalize_j(make_jsymbol(args.z, M));
  return sum_bound - nj.prefactor.exp;
}

/// m(x, q^M, z) = 1/j(z; q^M) sum_r (-1)^r q^{M C(r,2)} z^r / (1 - q^{M(r-1)} x z).
/// Each denominator 1 - w is expanded as a geometric series in w when w has
/// positive order and in 1/w when it has negative order; w = -1 gives 1/2.
inline Series appell_m(const AppellArgs& args, Exponent trunc) {
  const Exponent M = args.modulus;
  if (M < 1) throw range_error("Appell-Lerch modulus must be positive");
  if (!appell_pole_free(args)) {
    throw pole_error("m(" + to_string(args.x) + ", q^" + std::to_string(M) + ", " +
                     to_string(args.z) + ") has a pole");
  }
  NormalizedJ jz = normalize_j(make_jsymbol(args.z, M));
  // m = q^{-P} S / jc where jz = q^P jc (up to sign).
  const Exponent sum_trunc = trunc + jz.prefactor.exp;
  const Monomial xz = args.x * args.z;

  auto base = [&](Exponent r) { return M * detail::binom2(r) + r * args.z.exp; };
  Exponent vfloor = detail::floor_div(M - 2 * args.z.exp, 2 * M);
  auto rows = detail::convex_interval(base, vfloor, detail::kNegInf, detail::kPosInf, sum_trunc);

  std::vector<std::pair<Exponent, Rational>> terms;
  Exponent lo_exp = sum_trunc + 1;
  if (rows) {
    for (Exponent r = rows->first; r <= rows->second; ++r) {
      int sign = (r % 2 != 0) ? -1 : 1;
      if (r % 2 != 0) sign *= args.z.sign;
      Exponent e0 = base(r);
      Monomial w = xz * Monomial::q_pow(M * (r - 1));
      if (w.exp == 0) {
        // w = -1 here; w = +1 was excluded by the pole check.
        if (e0 <= sum_trunc) {
          terms.emplace_back(e0, Rational(sign, 2));
          lo_exp = std::min(lo_exp, e0);
        }
      } else if (w.exp > 0) {
        int ws = 1;
        for (Exponent e = e0; e <= sum_trunc; e += w.exp) {
          terms.emplace_back(e, Rational(sign * ws));
          lo_exp = std::min(lo_exp, e);
          ws *= w.sign;
        }
      } else {
        int ws = w.sign;
        for (Exponent e = e0 - w.exp; e <= sum_trunc; e -= w.exp) {
          terms.emplace_back(e, Rational(-sign * ws));
          lo_exp = std::min(lo_exp, e);
          ws *= w.sign;
        }
      }
    }
  }
  Series sum = Series::zero(sum_trunc);
  if (!terms.empty()) {
    std::vector<Rational> coeffs(static_cast<std::size_t>(sum_trunc - lo_exp + 1), Rational(0));
    for (auto& [e, c] : terms) coeffs[static_cast<std::size_t>(e - lo_exp)] += c;
    sum = Series::from_coeffs(lo_exp, std::move(coeffs), sum_trunc);
  }
  Exponent inv_order = std::max<Exponent>(sum_trunc - sum.valuation(), 0);
  Series inv = expand_canonical_j(jz.canonical, inv_order).inverse();
  return (sum * inv).shifted(jz.prefactor.inverse()).truncated(trunc);
}

/// One summand of g_{a,b,c}.
struct GTerm {
  int block = 1;  // 1: sum over t < a, 2: sum over t < c
  Exponent t = 0;
  Monomial coefficient;
  JSymbol theta;
  bool theta_zero = false;
  AppellArgs appell;
  bool pole_free = true;
};

struct GEvaluation {
  Series value;
  std::vector<GTerm> terms;
};

/// The summands of g_{a,b,c}(x, y, q, z1, z0) without evaluating them.
inline std::vector<GTerm> hecke_g_terms(const HeckeParams& p, Monomial z1, Monomial z0) {
  const Exponent d = p.b * p.b - p.a * p.c;
  if (d <= 0) throw range_error("g_{a,b,c} requires b^2 - ac > 0");
  const Monomial mx = -p.x;
  const Monomial my = -p.y;
  std::vector<GTerm> out;
  auto add_block = [&](int block, Exponent count, Exponent a, Exponent c, Monomial u,
                       Monomial mu, Monomial mv, Monomial z) {
    // block 1: (-y)^t q^{c C(t,2)} j(q^{bt} x; q^a)
    //          m(-q^{a C(b+1,2) - c C(a+1,2) - t d} (-y)^a / (-x)^b, q^{a d}, z0)
    for (Exponent t = 0; t < count; ++t) {
      GTerm term;
      term.block = block;
      term.t = t;
      term.coefficient = mv.pow(t) * Monomial::q_pow(c * detail::binom2(t));
      term.theta = make_jsymbol(Monomial::q_pow(p.b * t) * u, a);
      term.theta_zero = normalize_j(term.theta).is_zero;
      Monomial arg = Monomial{-1, a * detail::binom2(p.b + 1) - c * detail::binom2(a + 1) - t * d} *
                     mv.pow(a) / mu.pow(p.b);
      term.appell = {arg, a * d, z};
      term.pole_free = appell_pole_free(term.appell);
      out.push_back(term);
    }
  };
  add_block(1, p.a, p.a, p.c, p.x, mx, my, z0);
  add_block(2, p.c, p.c, p.a, p.y, my, mx, z1);
  return out;
}

/// g_{a,b,c}(x, y, q, z1, z0) with per-term diagnostics. A term whose theta
/// prefactor vanishes identically contributes zero and its Appell-Lerch sum
/// is not evaluated.
inline GEvaluation hecke_g_detailed(const HeckeParams& p, Monomial z1, Monomial z0,
                                    Exponent trunc) {
  GEvaluation out{Series::zero(trunc), hecke_g_terms(p, z1, z0)};
  for (const auto& term : out.terms) {
    if (term.theta_zero) continue;
    if (!term.pole_free) {
      throw pole_error("g term (block " + std::to_string(term.block) + ", t = " +
                       std::to_string(term.t) + ") has a nonzero theta prefactor and an " +
                       "Appell-Lerch pole");
    }
    NormalizedJ nj = normalize_j(term.theta);
    Monomial mono = term.coefficient * nj.prefactor;
    std::vector<detail::Factor> factors{
        {0, [&](Exponent t) { return expand_canonical_j(nj.canonical, t); }},
        {appell_valuation_bound(term.appell),
         [&](Exponent t) { return appell_m(term.appell, t); }},
    };
    out.value += detail::product_to_order(factors, trunc - mono.exp).shifted(mono);
  }
  return out;
}

inline Series hecke_g(const HeckeParams& p, Monomial z1, Monomial z0, Exponent trunc) {
  return hecke_g_detailed(p, z1, z0, trunc).value;
}

/// The p^2 theta quotients of theta_{n,p}(x, y, q), in (r*, s*) row-major order.
inline std::vector<ThetaQuotient> theta_block_terms(Exponent n, Exponent p, Monomial x,
                                                    Monomial y) {
  if (n < 1 || p < 1 || std::gcd(n, p) != 1) {
    throw range_error("theta_{n,p} requires coprime positive n, p");
  }
  auto half = [](Exponent twice, const char* what) {
    if (twice % 2 != 0) {
      throw range_error(std::string("theta_{n,p}: half-integer exponent in ") + what);
    }
    return twice / 2;
  };
  const Monomial mx = -x;
  const Monomial my = -y;
  const Exponent shift2 = (n % 2 == 0) ? 1 : 0;  // 2 * frac((n-1)/2)
  const Exponent big = p * p * (2 * n + p);
  std::vector<ThetaQuotient> out;
  out.reserve(static_cast<std::size_t>(p * p));
  for (Exponent rs = 0; rs < p; ++rs) {
    for (Exponent ss = 0; ss < p; ++ss) {
      const Exponent r2 = 2 * rs + shift2;
      const Exponent s2 = 2 * ss + shift2;
      const Exponent R = half(r2 - (n - 1), "r - (n-1)/2");
      const Exponent S = half(s2 + (n + 1), "s + (n+1)/2");
      ThetaQuotient tq;
      tq.coefficient = Monomial::q_pow(n * detail::binom2(R) + (n + p) * R * S +
                                       n * detail::binom2(S)) *
                       mx.pow(R) * my.pow(S);
      const JSymbol cube = J(big);
      tq.numerator = {cube, cube, cube};
      tq.numerator.push_back(make_jsymbol(
          Monomial{-1, n * p * (ss - rs)} * x.pow(n) / y.pow(n), n * p * p));
      tq.numerator.push_back(make_jsymbol(
          Monomial::q_pow(p * (2 * n + p) * half(r2 + s2, "r + s") + p * (n + p)) *
              (x * y).pow(p),
          big));
      tq.denominator.push_back(make_jsymbol(
          Monomial::q_pow(half(p * (2 * n + p) * r2 + p * (n + p), "denominator r")) *
              my.pow(n + p) / mx.pow(n),
          big));
      tq.denominator.push_back(make_jsymbol(
          Monomial::q_pow(half(p * (2 * n + p) * s2 + p * (n + p), "denominator s")) *
              mx.pow(n + p) / my.pow(n),
          big));
      out.push_back(std::move(tq));
    }
  }
  return out;
}

/// theta_{n,p}(x, y, q) expanded to order `trunc`.
inline Series theta_block(Exponent n, Exponent p, Monomial x, Monomial y, Exponent trunc) {
  Series acc = Series::zero(trunc);
  for (const auto& tq : theta_block_terms(n, p, x, y)) acc += expand(tq, trunc);
  return acc;
}

struct GenericityReport {
  bool generic = true;
  std::string reason;
};

/// Whether (x, y) avoid every pole and zero denominator on both sides of the
/// f_{n,n+p,n} = g + theta / Jbar decomposition.
inline GenericityReport hm_genericity(Exponent n, Exponent p, Monomial x, Monomial y) {
  GenericityReport rep;
  try {
    for (const auto& tq : theta_block_terms(n, p, x, y)) (void)normalize(tq);
  } catch (const error& e) {
    return {false, e.what()};
  }
  HeckeParams hp{n, n + p, n, x, y};
  for (const auto& term : hecke_g_terms(hp, Monomial{-1, 0}, Monomial{-1, 0})) {
    if (!term.pole_free) {
      return {false, "Appell-Lerch pole in g term (block " + std::to_string(term.block) +
                         ", t = " + std::to_string(term.t) + ")"};
    }
  }
  return rep;
}

/// First generic pair (x, y) with exponents in [1, max_exp]. With
/// `require_live_g`, pairs where every g term vanishes are skipped so that
/// all three series contribute.
inline std::optional<std::pair<Monomial, Monomial>> find_generic_monomials(
    Exponent n, Exponent p, Exponent max_exp = 6, bool require_live_g = true) {
  HeckeParams hp{n, n + p, n, {}, {}};
  for (Exponent total = 2; total <= 2 * max_exp; ++total) {
    for (Exponent xe = 1; xe <= max_exp; ++xe) {
      Exponent ye = total - xe;
      if (ye < 1 || ye > max_exp) continue;
      for (int xs : {1, -1}) {
        for (int ys : {1, -1}) {
          Monomial x{xs, xe};
          Monomial y{ys, ye};
          if (!hm_genericity(n, p, x, y).generic) continue;
          if (require_live_g) {
            hp.x = x;
            hp.y = y;
            bool live = false;
            for (const auto& t : hecke_g_terms(hp, Monomial{-1, 0}, Monomial{-1, 0})) {
              live = live || !t.theta_zero;
            }
            if (!live) continue;
          }
          return std::make_pair(x, y);
        }
      }
    }
  }
  return std::nullopt;
}

struct HMCheck {
  bool ok = false;
  Series f;
  Series g;
  Series theta_part;
  Series discrepancy;
};

/// Compares f_{n,n+p,n}(x,y,q) with g_{n,n+p,n}(x,y,q,-1,-1) +
/// theta_{n,p}(x,y,q) / Jbar_{0,np(2n+p)} modulo q^{trunc+1}.
inline HMCheck verify_hm(Exponent n, Exponent p, Monomial x, Monomial y, Exponent trunc) {
  HMCheck out;
  HeckeParams hp{n, n + p, n, x, y};
  out.f = hecke_f(hp, trunc);
  out.g = hecke_g(hp, Monomial{-1, 0}, Monomial{-1, 0}, trunc);
  Series th = theta_block(n, p, x, y, trunc);
  Exponent inv_order = std::max<Exponent>(trunc - th.valuation(), 0);
  Series jbar = expand_j(Jbar(0, n * p * (2 * n + p)), inv_order);
  out.theta_part = (th * jbar.inverse()).truncated(trunc);
  out.discrepancy = out.f - (out.g + out.theta_part);
  out.ok = out.discrepancy.is_zero();
  return out;
}

}  // namespace qseries

#endif  // QSERIES_HECKE_HPP_
