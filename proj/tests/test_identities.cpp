// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qseries/identities.hpp"
#include "qseries/pochhammer.hpp"

using namespace qseries;

namespace {

bool difference_at_least_two(const std::vector<Exponent>& parts) {
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i - 1] - parts[i] < 2) return false;
  }
  return true;
}

// Partitions of each n <= t into distinct parts with gaps >= 2 and smallest
// part >= min_part, by enumeration.
std::vector<std::uint64_t> gap_partitions(Exponent t, Exponent min_part) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(t + 1), 0);
  std::vector<Exponent> parts;
  std::function<void(Exponent, Exponent)> rec = [&](Exponent total, Exponent max_part) {
    if (difference_at_least_two(parts)) ++out[static_cast<std::size_t>(total)];
    for (Exponent p = std::min(max_part, t - total); p >= min_part; --p) {
      parts.push_back(p);
      if (difference_at_least_two(parts)) rec(total + p, p - 2);
      parts.pop_back();
    }
  };
  rec(0, t);
  return out;
}

}  // namespace

TEST_CASE("multisum index exponents", "[multisum]") {
  for (Exponent n = 2; n <= 5; ++n) {
    auto idx = multisum_indices(n, 20);
    REQUIRE_FALSE(idx.empty());
    for (const auto& ix : idx) {
      REQUIRE(ix.K.size() == static_cast<std::size_t>(n - 1));
      Exponent prev = 0;
      for (std::size_t j = 0; j < ix.K.size(); ++j) {
        CHECK(ix.k[j] == ix.K[j] - prev);
        CHECK(ix.k[j] >= 0);
        prev = ix.K[j];
      }
      Exponent e = multisum_exponent(ix.K, n);
      CHECK(e >= 0);
      CHECK(e <= 20);
    }
  }
  CHECK(multisum_exponent({1}, 2) == -1);
  CHECK(multisum_exponent({1, 1}, 2) == 0);
  CHECK(multisum_exponent({1, 3}, 2) == 2);
}

TEST_CASE("multisum enumeration is complete", "[multisum][property]") {
  // Every index in a generous box with exponent <= T must be enumerated.
  for (Exponent n = 2; n <= 4; ++n) {
    const Exponent t = 12;
    std::size_t expected = 0;
    std::vector<Exponent> K(static_cast<std::size_t>(n - 1));
    std::function<void(std::size_t, Exponent)> rec = [&](std::size_t i, Exponent lo) {
      if (i == K.size()) {
        Exponent e = multisum_exponent(K, n);
        if (e >= 0 && e <= t) ++expected;
        return;
      }
      for (Exponent v = lo; v <= 30; ++v) {
        K[i] = v;
        rec(i + 1, v);
      }
    };
    rec(0, 0);
    CHECK(multisum_indices(n, t).size() == expected);
  }
}

TEST_CASE("B_N multisum against the brute-force box", "[multisum]") {
  CHECK(oracle::dense(bn_multisum(2, 20)) == oracle::multisum_box(2, 20, 14));
  CHECK(oracle::dense(bn_multisum(3, 16)) == oracle::multisum_box(3, 16, 10));
  CHECK(oracle::dense(bn_multisum(4, 12)) == oracle::multisum_box(4, 12, 8));
}

TEST_CASE("B_2 leading coefficients", "[multisum]") {
  Series b2 = bn_multisum(2, 8);
  std::vector<long> expected{1, 0, 1, 1, 2, 2, 3, 3, 5};
  for (Exponent e = 0; e <= 8; ++e) CHECK(b2.coeff(e) == expected[static_cast<std::size_t>(e)]);
}

TEST_CASE("B_N constant term is 1", "[multisum]") {
  for (Exponent n = 2; n <= 10; ++n) {
    Series b = bn_multisum(n, 6);
    CHECK(b.coeff(0) == 1);
    CHECK(b.is_integral());
  }
}

TEST_CASE("B_N routes agree", "[identities]") {
  for (Exponent n = 2; n <= 5; ++n) {
    Series ms = bn_multisum(n, 40);
    CHECK(bn_theta(n, 40) == ms);
    CHECK(bn_hecke(n, 0, 40) == ms);
    CHECK(bn_hecke(n, 2 * n, 40) == ms);
  }
  CHECK(bn_hecke(2, 8, 30) == bn_multisum(2, 30));
}

TEST_CASE("level and divisibility errors", "[identities]") {
  CHECK_THROWS_AS(bn_multisum(1, 10), range_error);
  CHECK_THROWS_AS(bn_theta(1, 10), range_error);
  CHECK_THROWS_AS(bn_hecke(3, 3, 10), divisibility_error);
  CHECK_THROWS_AS(bn_hecke(2, 2, 10), divisibility_error);
}

TEST_CASE("theta formula structure", "[identities]") {
  for (Exponent n = 2; n <= 6; ++n) CHECK(bn_theta_terms(n).size() == static_cast<std::size_t>(n * n));
}

TEST_CASE("Slater product", "[identities]") {
  std::vector<Exponent> residues;
  for (Exponent s = 0; s < 16; ++s) {
    if (slater_residue(s)) residues.push_back(s);
  }
  CHECK(residues == std::vector<Exponent>{2, 3, 4, 5, 11, 12, 13, 14});
  Series p = slater_product(40);
  CHECK(p.coeff(0) == 1);
  auto counts = oracle::count_partitions(40, [](Exponent s) { return slater_residue(s); });
  CHECK(oracle::dense(p) == oracle::from_counts(counts));
  CHECK(oracle::dense(bn_multisum(2, 40)) == oracle::from_counts(counts));
}

TEST_CASE("string function bridge to B_N", "[identities]") {
  for (Exponent n = 2; n <= 4; ++n) {
    for (Exponent m : {Exponent{0}, 2 * n}) {
      const Exponent t = 30;
      const Exponent D = 4 * n;
      Series c = string_function({n, m, 0}, t + m * m / (4 * n));
      CHECK(c.scale() == D);
      Series poch = pochhammer_infinite(Monomial::q_pow(D), c.trunc_order(), D, D);
      Series lhs = (c * poch).shifted(Monomial::q_pow(-m * m)).reduced_scale(D).truncated(t);
      CHECK(lhs == bn_multisum(n, t));
    }
  }
}

TEST_CASE("string functions with l != 0", "[identities]") {
  for (Exponent n = 2; n <= 4; ++n) {
    for (Exponent l = 1; l < n; ++l) {
      Exponent m = l;
      Series c = string_function({n, m, l}, 12);
      Series wider = string_function({n, m, l}, 17);
      CHECK(agree_to(c, wider, 12));
      CHECK(c.is_integral());
      CHECK_FALSE(c.is_zero());
    }
  }
  // Wrong parity leaves nothing to sum.
  CHECK(string_function({2, 1, 0}, 10).is_zero());
}

TEST_CASE("Rogers-Ramanujan", "[andrews-gordon]") {
  const Exponent t = 40;
  auto rr1 = andrews_gordon(2, 2, t);
  auto rr2 = andrews_gordon(2, 1, t);
  CHECK(rr1.lhs == rr1.rhs);
  CHECK(rr2.lhs == rr2.rhs);
  CHECK(oracle::dense(rr1.lhs) == oracle::from_counts(gap_partitions(t, 1)));
  CHECK(oracle::dense(rr2.lhs) == oracle::from_counts(gap_partitions(t, 2)));
  auto mod5 = [](Exponent r) { return [r](Exponent p) { return p % 5 == r || p % 5 == 5 - r; }; };
  CHECK(oracle::dense(rr1.rhs) == oracle::from_counts(oracle::count_partitions(t, mod5(1))));
  CHECK(oracle::dense(rr2.rhs) == oracle::from_counts(oracle::count_partitions(t, mod5(2))));
}

TEST_CASE("Andrews-Gordon", "[andrews-gordon]") {
  for (Exponent k = 2; k <= 4; ++k) {
    for (Exponent i = 1; i <= k; ++i) {
      auto sides = andrews_gordon(k, i, 100);
      CHECK(sides.lhs == sides.rhs);
      CHECK(sides.lhs.coeff(0) == 1);
    }
  }
  CHECK_THROWS_AS(andrews_gordon(1, 1, 10), range_error);
  CHECK_THROWS_AS(andrews_gordon(3, 4, 10), range_error);
  CHECK_THROWS_AS(andrews_gordon(3, 0, 10), range_error);
}
