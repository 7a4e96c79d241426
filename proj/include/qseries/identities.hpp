// SPDX-License-Identifier: Apache-2.0
//
// B_N(q) computed three independent ways:
//
//   bn_multisum  (N-1)-fold sum over nondecreasing K_2 <= ... <= K_N with
//                N | K_2 + ... + K_N, weight q^{sum K_i^2 - (sum K_i)^2 / N}
//                / prod (q)_{k_j}, k_j = K_j - K_{j-1};
//   bn_hecke     q^{-m^2/4N} f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q) / (q)_inf^2
//                for any m divisible by 2N;
//   bn_theta     N^2 theta quotients divided by (q)_inf^2 Jbar_{0,N(N+2)}.
//
// plus the level-N string functions, the mod-16 product for B_2, and the
// Andrews-Gordon identities used as a sanity anchor.

#ifndef QSERIES_IDENTITIES_HPP_
#define QSERIES_IDENTITIES_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/hecke.hpp"
#include "qseries/pochhammer.hpp"
#include "qseries/series.hpp"
#include "qseries/theta.hpp"

namespace qseries {

namespace detail {

inline void require_level(Exponent n) {
  if (n < 2) throw range_error("level N must be at least 2, got " + std::to_string(n));
}

// Dense integer series q^0..q^L, the working representation of the DFS
// enumerators below.
using Dense = std::vector<mpz_class>;

// c / (q^step; q^step)_k, in place.
inline void div_pochhammer(Dense& c, Exponent k, Exponent step) {
  for (Exponent e = 1; e <= k; ++e) {
    if (e * step >= static_cast<Exponent>(c.size())) break;
    div_one_minus(c, 1, e * step);
  }
}

inline Dense truncated_copy(const Dense& c, Exponent len) {
  return Dense(c.begin(), c.begin() + std::min<Exponent>(len, static_cast<Exponent>(c.size())));
}

// acc += q^shift * c
inline void add_shifted(Dense& acc, const Dense& c, Exponent shift) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t j = i + static_cast<std::size_t>(shift);
    if (j >= acc.size()) break;
    acc[j] += c[i];
  }
}

inline void require_integral(const Series& s, const char* what) {
  if (!s.is_integral()) throw error(std::string(what) + ": non-integral coefficient");
}

}  // namespace detail

/// One summation index of the B_N multisum.
struct MultisumIndex {
  std::vector<Exponent> K;  // K_2 .. K_N, nondecreasing
  std::vector<Exponent> k;  // k_2 .. k_N, k_j = K_j - K_{j-1}, K_1 = 0
};

/// sum K_i^2 - (sum K_i)^2 / N, or -1 when N does not divide sum K_i.
inline Exponent multisum_exponent(const std::vector<Exponent>& K, Exponent n) {
  Exponent sum = 0;
  Exponent sumsq = 0;
  for (Exponent v : K) {
    sum += v;
    sumsq += v * v;
  }
  if (sum % n != 0) return -1;
  return sumsq - sum * sum / n;
}

struct MultisumStats {
  std::uint64_t indices = 0;  // admissible indices with exponent <= T
  std::uint64_t nodes = 0;    // DFS nodes visited
};

namespace detail {

// Visits every admissible index with exponent <= trunc. The callback gets
// the index, its exponent, and the dense weight prod 1/(q)_{k_j} truncated at
// trunc - exponent.
template <class Visit>
void enumerate_multisum(Exponent n, Exponent trunc, MultisumStats& stats, Visit&& visit) {
  require_level(n);
  const Exponent slots = n - 1;
  std::vector<Exponent> K(static_cast<std::size_t>(slots));
  std::vector<Exponent> k(static_cast<std::size_t>(slots));
  // N * (exponent if all remaining K equal the last one); nondecreasing in
  // the last value and a lower bound for every completion.
  auto scaled_bound = [n](Exponent sumsq, Exponent sum, Exponent rest, Exponent last) {
    Exponent s = sum + rest * last;
    return n * (sumsq + rest * last * last) - s * s;
  };
  std::function<void(Exponent, Exponent, Exponent, const Dense&)> rec =
      [&](Exponent depth, Exponent sum, Exponent sumsq, const Dense& weight) {
        Exponent prev = depth == 0 ? 0 : K[static_cast<std::size_t>(depth - 1)];
        Exponent rest = slots - depth - 1;
        for (Exponent v = prev;; ++v) {
          Exponent nsum = sum + v;
          Exponent nsq = sumsq + v * v;
          Exponent bound = scaled_bound(nsq, nsum, rest, v);
          if (bound > n * trunc) break;
          ++stats.nodes;
          K[static_cast<std::size_t>(depth)] = v;
          k[static_cast<std::size_t>(depth)] = v - prev;
          Exponent budget = trunc - detail::floor_div(bound, n);
          Dense w = truncated_copy(weight, budget + 1);
          div_pochhammer(w, v - prev, 1);
          if (rest == 0) {
            if (nsum % n != 0) continue;
            Exponent e = nsq - nsum * nsum / n;
            if (e > trunc) continue;
            ++stats.indices;
            visit(K, k, e, truncated_copy(w, trunc - e + 1));
          } else {
            rec(depth + 1, nsum, nsq, w);
          }
        }
      };
  Dense one(static_cast<std::size_t>(trunc + 1));
  if (trunc < 0) return;
  one[0] = 1;
  rec(0, 0, 0, one);
}

}  // namespace detail

/// Every admissible multisum index with exponent <= trunc.
inline std::vector<MultisumIndex> multisum_indices(Exponent n, Exponent trunc) {
  std::vector<MultisumIndex> out;
  MultisumStats stats;
  detail::enumerate_multisum(n, trunc, stats,
                             [&](const auto& K, const auto& k, Exponent, const auto&) {
                               out.push_back({K, k});
                             });
  return out;
}

inline Series bn_multisum(Exponent n, Exponent trunc, MultisumStats* stats = nullptr) {
  MultisumStats local;
  detail::Dense acc(static_cast<std::size_t>(std::max<Exponent>(trunc + 1, 0)));
  detail::enumerate_multisum(n, trunc, local,
                             [&](const auto&, const auto&, Exponent e, const detail::Dense& w) {
                               detail::add_shifted(acc, w, e);
                             });
  if (stats) *stats = local;
  return detail::from_dense_integers(acc, trunc, 1);
}

/// The N^2 quotients of the theta formula, (r, s) row-major.
inline std::vector<ThetaQuotient> bn_theta_terms(Exponent n) {
  detail::require_level(n);
  const Exponent big = n * n * (n + 2);
  const int parity = (n % 2 == 0) ? 1 : -1;
  std::vector<ThetaQuotient> out;
  for (Exponent r = 0; r < n; ++r) {
    for (Exponent s = 0; s < n; ++s) {
      ThetaQuotient tq;
      int sign = ((r + s + 1) % 2 == 0) ? 1 : -1;
      tq.coefficient = Monomial{sign, detail::binom2(r) + detail::binom2(s + 1) +
                                          r * (s + 1) * (n + 1) + r + s + 1};
      tq.numerator = {J(big), J(big), J(big), Jbar(n * (s - r), n * n),
                      J(n * (n + 2) * (r + s) + n * (n + 3), big)};
      tq.denominator = {{parity, n * (n + 2) * r + n * (n + 3) / 2, big},
                        {parity, n * (n + 2) * s + n * (n + 3) / 2, big}};
      out.push_back(std::move(tq));
    }
  }
  return out;
}

/// 1 / ((q)_inf^2 Jbar_{0,N(N+2)}).
inline ThetaQuotient bn_theta_prefactor(Exponent n) {
  return {Monomial{}, {}, {J(1), J(1), Jbar(0, n * (n + 2))}};
}

inline Series bn_theta(Exponent n, Exponent trunc) {
  Series sum = Series::zero(trunc);
  for (const auto& tq : bn_theta_terms(n)) sum += expand(tq, trunc);
  Exponent pre_order = std::max<Exponent>(trunc - sum.valuation(), 0);
  Series out = (sum * expand(bn_theta_prefactor(n), pre_order)).truncated(trunc);
  detail::require_integral(out, "bn_theta");
  return out;
}

/// q^{-m^2/4N} f_{1,N+1,1}(q^{1+m/2}, q^{1-m/2}, q) / (q)_inf^2, 2N | m.
/// For m != 0 the computation runs at exponent scale 4N and the result is
/// required to collapse back to integer exponents.
inline Series bn_hecke(Exponent n, Exponent m, Exponent trunc) {
  detail::require_level(n);
  if (m % (2 * n) != 0) {
    throw divisibility_error("bn_hecke: m = " + std::to_string(m) + " is not divisible by 2N = " +
                             std::to_string(2 * n));
  }
  const Exponent D = (m == 0) ? 1 : 4 * n;
  const Exponent target = (trunc + 1) * D - 1;
  const Exponent shift = -m * m * D / (4 * n);  // q^{-m^2/4N} in units of 1/D
  const Exponent f_order = target - shift;
  HeckeParams hp{1, n + 1, 1, Monomial::q_pow(D + m * D / 2), Monomial::q_pow(D - m * D / 2)};
  Series f = hecke_f(hp, f_order, {D, 0});
  Exponent inv_order = std::max<Exponent>(f_order - f.valuation(), 0);
  Series poch = pochhammer_infinite(Monomial::q_pow(D), inv_order, D, D);
  Series out = (f * (poch * poch).inverse()).shifted(Monomial::q_pow(shift));
  out = out.truncated(target).reduced_scale(D).truncated(trunc);
  detail::require_integral(out, "bn_hecke");
  return out;
}

/// Parameters of the level-N string function C^N_{m,l}.
struct StringParams {
  Exponent level = 2;
  Exponent m = 0;
  Exponent l = 0;
};

/// N * (C^{-1})_{ij} = N min(i,j) - ij for the A_{N-1} Cartan matrix,
/// indices 1..N-1.
inline Exponent cartan_inverse_scaled(Exponent n, Exponent i, Exponent j) {
  return n * std::min(i, j) - i * j;
}

/// C^N_{m,l}(q) at exponent scale 4N, known modulo q^{trunc+1}.
inline Series string_function(const StringParams& sp, Exponent trunc) {
  const Exponent n = sp.level;
  detail::require_level(n);
  const Exponent D = 4 * n;
  const Exponent target = (trunc + 1) * D - 1;
  const Exponent dim = n - 1;
  const Exponent pre = sp.m * sp.m - sp.l * sp.l;  // units of 1/D
  const bool has_linear = sp.l >= 1 && sp.l <= n - 1;

  // E(n) = n C^{-1} n^T - (C^{-1} n)_l >= |n|^2/4 - c|n| with
  // c = (N/4) sqrt(N-1): the eigenvalues of C^{-1} are at least 1/4 and its
  // entries at most N/4.
  const double c = has_linear ? (static_cast<double>(n) / 4.0) * std::sqrt(double(dim)) : 0.0;
  const double budget = static_cast<double>(target - pre) / static_cast<double>(D);
  if (budget + c * c < 0) return Series::zero(target, D);
  const double radius = 2.0 * c + 2.0 * std::sqrt(c * c + std::max(budget, 0.0)) + 1.0;
  const Exponent r2 = static_cast<Exponent>(radius * radius) + 1;

  std::vector<Exponent> vec(static_cast<std::size_t>(dim));
  // Negative exponents can occur only through the linear term; offset them.
  Exponent offset = 0;
  std::vector<std::pair<Exponent, std::vector<Exponent>>> leaves;
  std::function<void(Exponent, Exponent)> rec = [&](Exponent idx, Exponent normsq) {
    if (idx == dim) {
      Exponent weighted = 0;
      for (Exponent j = 1; j <= dim; ++j) weighted += j * vec[static_cast<std::size_t>(j - 1)];
      if (detail::floor_mod(sp.m + sp.l - 2 * weighted, 2 * n) != 0) return;
      Exponent quad = 0;
      for (Exponent i = 1; i <= dim; ++i) {
        for (Exponent j = 1; j <= dim; ++j) {
          quad += vec[static_cast<std::size_t>(i - 1)] * vec[static_cast<std::size_t>(j - 1)] *
                  cartan_inverse_scaled(n, i, j);
        }
      }
      if (has_linear) {
        for (Exponent j = 1; j <= dim; ++j) {
          quad -= vec[static_cast<std::size_t>(j - 1)] * cartan_inverse_scaled(n, sp.l, j);
        }
      }
      Exponent e = pre + 4 * quad;  // units of 1/(4N)
      if (e > target) return;
      offset = std::max(offset, -e);
      leaves.emplace_back(e, vec);
      return;
    }
    for (Exponent v = 0; normsq + v * v <= r2; ++v) {
      vec[static_cast<std::size_t>(idx)] = v;
      rec(idx + 1, normsq + v * v);
    }
  };
  rec(0, 0);

  const Exponent lo = -offset;
  detail::Dense sum(static_cast<std::size_t>(target - lo + 1));
  for (auto& [e, v] : leaves) {
    detail::Dense w(static_cast<std::size_t>(target - e + 1));
    w[0] = 1;
    for (Exponent x : v) detail::div_pochhammer(w, x, D);
    detail::add_shifted(sum, w, e - lo);
  }
  std::vector<Rational> coeffs(sum.begin(), sum.end());
  Series s = Series::from_coeffs(lo, std::move(coeffs), target, D);
  Exponent inv_order = std::max<Exponent>(target - s.valuation(), 0);
  Series poch = pochhammer_infinite(Monomial::q_pow(D), inv_order, D, D);
  return (s * poch.inverse()).truncated(target);
}

/// Residues s mod 16 in the product for B_2: s = +-2, +-3, +-4, +-5.
inline bool slater_residue(Exponent s) {
  Exponent r = detail::floor_mod(s, 16);
  return r == 2 || r == 3 || r == 4 || r == 5 || r == 11 || r == 12 || r == 13 || r == 14;
}

/// prod_{s = +-2,+-3,+-4,+-5 mod 16} 1 / (1 - q^s).
inline Series slater_product(Exponent trunc) {
  std::vector<Exponent> exps;
  for (Exponent s = 1; s <= trunc; ++s) {
    if (slater_residue(s)) exps.push_back(s);
  }
  return inverse_product(exps, trunc);
}

struct IdentitySides {
  Series lhs;
  Series rhs;
};

/// Both sides of the Andrews-Gordon identity for (k, i):
///   sum q^{N_1^2 + ... + N_{k-1}^2 + N_i + ... + N_{k-1}} / ((q)_{n_1} ... (q)_{n_{k-1}})
///   = prod_{s != 0, +-i mod 2k+1} 1/(1 - q^s),  N_j = n_j + ... + n_{k-1}.
inline IdentitySides andrews_gordon(Exponent k, Exponent i, Exponent trunc) {
  if (k < 2 || i < 1 || i > k) {
    throw range_error("andrews_gordon requires k >= 2 and 1 <= i <= k, got k = " +
                      std::to_string(k) + ", i = " + std::to_string(i));
  }
  IdentitySides out;
  const Exponent modulus = 2 * k + 1;
  std::vector<Exponent> exps;
  for (Exponent s = 1; s <= trunc; ++s) {
    Exponent r = s % modulus;
    if (r != 0 && r != i && r != modulus - i) exps.push_back(s);
  }
  out.rhs = inverse_product(exps, trunc);

  detail::Dense acc(static_cast<std::size_t>(std::max<Exponent>(trunc + 1, 0)));
  // Choose N_{k-1} <= N_{k-2} <= ... <= N_1; the exponent only grows.
  std::function<void(Exponent, Exponent, Exponent, const detail::Dense&)> rec =
      [&](Exponent j, Exponent prev, Exponent exponent, const detail::Dense& weight) {
        for (Exponent v = prev;; ++v) {
          Exponent e = exponent + v * v + (j >= i ? v : 0);
          if (e > trunc) break;
          detail::Dense w = detail::truncated_copy(weight, trunc - e + 1);
          detail::div_pochhammer(w, v - prev, 1);
          if (j == 1) {
            detail::add_shifted(acc, w, e);
          } else {
            rec(j - 1, v, e, w);
          }
        }
      };
  if (trunc >= 0) {
    detail::Dense one(static_cast<std::size_t>(trunc + 1));
    one[0] = 1;
    rec(k - 1, 0, 0, one);
  }
  out.lhs = detail::from_dense_integers(acc, trunc, 1);
  return out;
}

}  // namespace qseries

#endif  // QSERIES_IDENTITIES_HPP_
