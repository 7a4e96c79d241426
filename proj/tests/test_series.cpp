// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qseries/pochhammer.hpp"
#include "qseries/series.hpp"

using namespace qseries;

namespace {

Series poly(std::vector<long> c, Exponent trunc, Exponent min_exp = 0, Exponent scale = 1) {
  std::vector<Rational> q;
  for (long v : c) q.emplace_back(v);
  return Series::from_coeffs(min_exp, std::move(q), trunc, scale);
}

Series random_series(std::mt19937_64& rng, Exponent trunc) {
  std::uniform_int_distribution<int> val(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> lo(-3, 3);
  Exponent min_exp = lo(rng);
  std::vector<Rational> c;
  for (Exponent e = min_exp; e <= trunc; ++e) c.emplace_back(val(rng), den(rng));
  return Series::from_coeffs(min_exp, std::move(c), trunc);
}

}  // namespace

TEST_CASE("additive identities", "[series]") {
  Series s = poly({1, -2, 3, 0, 5}, 10);
  CHECK(Series::zero(10) + s == s);
  CHECK(poly({1, -1}, 10) + Series::monomial(Monomial::q_pow(1), 10) == Series::one(10));
  Series e = pochhammer_infinite(Monomial::q_pow(1), 30);
  CHECK((e + (-e)).is_zero());
  CHECK((e - e).is_zero());
}

TEST_CASE("multiplicative identities", "[series]") {
  const Exponent t = 25;
  Series s = poly({1, -2, 3, 0, 5}, t);
  CHECK(s * Series::one(t) == s);

  std::vector<long> ones(t + 1, 1);
  CHECK(poly({1, -1}, t) * poly(ones, t) == Series::one(t));

  Series e = pochhammer_infinite(Monomial::q_pow(1), t);
  Series inv = inverse_pochhammer_q(t, t);
  CHECK(e * inv == Series::one(t));
  CHECK(e * e.inverse() == Series::one(t));
}

TEST_CASE("inverse", "[series]") {
  CHECK(Series::one(12).inverse() == Series::one(12));
  std::vector<long> ones(13, 1);
  CHECK(poly({1, -1}, 12).inverse() == poly(ones, 12));

  Series p = pochhammer_infinite(Monomial::q_pow(1), 10).inverse();
  auto counts = oracle::count_partitions(10, [](Exponent) { return true; });
  CHECK(oracle::dense(p) == oracle::from_counts(counts));
  CHECK(p.coeff(4) == 5);

  CHECK_THROWS_AS(Series::zero(5).inverse(), zero_divisor);
}

TEST_CASE("inverse of a Laurent series loses relative precision only", "[series]") {
  // q^-2 (1 - q) known to q^5: inverse is q^2 (1 + q + ...) known to q^9.
  Series s = poly({1, -1}, 5, -2);
  Series inv = s.inverse();
  CHECK(inv.min_exp() == 2);
  CHECK(inv.trunc_order() == 9);
  for (Exponent e = 2; e <= 9; ++e) CHECK(inv.coeff(e) == 1);
  CHECK(agree_to(s * inv, Series::one(2), 2));
}

TEST_CASE("truncation propagates pessimistically", "[series]") {
  Series a = poly({1, 1}, 10);
  Series b = poly({1, 1}, 4);
  CHECK((a + b).trunc_order() == 4);
  CHECK((a * b).trunc_order() == 4);
  // Valuation of one factor buys precision in the product.
  Series c = poly({1}, 10, 3);
  CHECK((b * c).trunc_order() == 7);
  CHECK_THROWS_AS(b.coeff(5), range_error);
}

TEST_CASE("ring axioms on random series", "[series][property]") {
  std::mt19937_64 rng(20240517);
  for (int iter = 0; iter < 40; ++iter) {
    Series a = random_series(rng, 12);
    Series b = random_series(rng, 12);
    Series c = random_series(rng, 12);
    Exponent t = 4;  // safely below every product's known order
    CHECK(agree_to(a + b, b + a, t));
    CHECK(agree_to(a * b, b * a, t));
    CHECK(agree_to((a * b) * c, a * (b * c), t));
    CHECK(agree_to(a * (b + c), a * b + a * c, t));
    CHECK(agree_to((a + b) + c, a + (b + c), t));
    if (!a.is_zero()) CHECK(agree_to(a * a.inverse(), Series::one(t), t));
  }
}

TEST_CASE("product matches schoolbook oracle", "[series][property]") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> val(-9, 9);
  const Exponent t = 30;
  for (int iter = 0; iter < 20; ++iter) {
    oracle::Poly pa(t + 1), pb(t + 1);
    std::vector<long> ca, cb;
    for (Exponent i = 0; i <= t; ++i) {
      ca.push_back(val(rng));
      cb.push_back(val(rng));
      pa[i] = ca.back();
      pb[i] = cb.back();
    }
    CHECK(oracle::dense(poly(ca, t) * poly(cb, t)) == oracle::mul(pa, pb, t));
  }
}

TEST_CASE("rescaling round trip", "[series][property]") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 20; ++iter) {
    Series a = random_series(rng, 15);
    for (Exponent k : {2, 3, 7}) {
      Series r = a.rescaled(k);
      CHECK(r.scale() == k);
      CHECK(r.trunc_order() == (a.trunc_order() + 1) * k - 1);
      CHECK(r.reduced_scale(k) == a);
      CHECK(r.with_minimal_scale() == a);
    }
  }
  Series half = Series::monomial(Monomial::q_pow(1), 9, 2);
  CHECK_THROWS_AS(half.reduced_scale(2), range_error);
}

TEST_CASE("mixed scales meet at the lcm", "[series]") {
  Series a = Series::monomial(Monomial::q_pow(1), 11, 2);  // q^{1/2}
  Series b = Series::monomial(Monomial::q_pow(1), 17, 3);  // q^{1/3}
  Series p = a * b;
  CHECK(p.scale() == 6);
  CHECK(p.coeff(5) == 1);
}

TEST_CASE("shift by a signed monomial", "[series]") {
  Series a = poly({1, 2, 3}, 8);
  Series s = a.shifted(Monomial{-1, 3});
  CHECK(s.min_exp() == 3);
  CHECK(s.trunc_order() == 11);
  CHECK(s.coeff(4) == -2);
}

TEST_CASE("first difference reports the lowest exponent", "[series]") {
  Series a = poly({1, 2, 3, 4}, 10);
  Series b = poly({1, 2, 5, 4}, 10);
  CHECK(first_difference(a, b, 10) == Exponent{2});
  CHECK_FALSE(first_difference(a, a, 10).has_value());
  CHECK_THROWS_AS(first_difference(a, b, 11), range_error);
}
