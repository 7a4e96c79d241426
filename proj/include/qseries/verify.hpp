// SPDX-License-Identifier: Apache-2.0
//
// Verification suites and the multisum-versus-theta benchmark behind the
// command-line front end. Each check compares two independently computed
// series and records the first exponent where they differ.

#ifndef QSERIES_VERIFY_HPP_
#define QSERIES_VERIFY_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "qseries/hecke.hpp"
#include "qseries/identities.hpp"
#include "qseries/io.hpp"
#include "qseries/series.hpp"

namespace qseries {

struct VerifyReport {
  std::string id;
  nlohmann::json params = nlohmann::json::object();
  Exponent order = 0;
  bool pass = false;
  std::optional<Exponent> first_difference;
  std::string lhs_coeff;
  std::string rhs_coeff;
  std::string message;
  double wall_ms = 0.0;
};

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json j{{"id", r.id},         {"params", r.params}, {"order", r.order},
                   {"status", r.pass ? "pass" : "fail"}, {"wall_ms", r.wall_ms}};
  if (r.first_difference) {
    j["first_difference"] = {
        {"exponent", *r.first_difference}, {"lhs", r.lhs_coeff}, {"rhs", r.rhs_coeff}};
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

/// True iff every coefficient is a nonnegative integer.
inline bool nonnegative_integral(const Series& s) {
  return std::all_of(s.coeffs().begin(), s.coeffs().end(),
                     [](const Rational& c) { return c.get_den() == 1 && sgn(c) >= 0; });
}

using SeriesFn = std::function<Series()>;
using ExtraCheck = std::function<std::string(const Series& lhs, const Series& rhs)>;

/// Runs both sides, compares them to `order`, and applies `extra` (which
/// returns a failure message or an empty string). Library errors become
/// failing reports.
inline VerifyReport compare_check(std::string id, nlohmann::json params, Exponent order,
                                  const SeriesFn& lhs, const SeriesFn& rhs,
                                  const ExtraCheck& extra = {}) {
  VerifyReport r;
  r.id = std::move(id);
  r.params = std::move(params);
  r.order = order;
  auto t0 = std::chrono::steady_clock::now();
  try {
    Series a = lhs();
    Series b = rhs();
    r.first_difference = first_difference(a, b, order);
    if (r.first_difference) {
      r.lhs_coeff = fraction_string(a.coeff(*r.first_difference));
      r.rhs_coeff = fraction_string(b.coeff(*r.first_difference));
      r.message = "series differ";
    } else if (extra) {
      r.message = extra(a, b);
    }
    r.pass = !r.first_difference && r.message.empty();
  } catch (const std::exception& e) {
    r.pass = false;
    r.message = e.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  return r;
}

enum class Suite { theorem1, slater, heckeroute, string, hm, andrews_gordon, all };

inline Suite parse_suite(const std::string& name) {
  if (name == "theorem1") return Suite::theorem1;
  if (name == "slater") return Suite::slater;
  if (name == "heckeroute") return Suite::heckeroute;
  if (name == "string") return Suite::string;
  if (name == "hm") return Suite::hm;
  if (name == "andrews-gordon") return Suite::andrews_gordon;
  if (name == "all") return Suite::all;
  throw range_error("unknown suite '" + name + "'");
}

struct SuiteOptions {
  Exponent n_lo = 2;
  Exponent n_hi = 6;
  Exponent k_lo = 2;
  Exponent k_hi = 3;
  std::optional<Exponent> order;  // overrides the per-suite defaults
};

inline constexpr Exponent kDefaultVerifyOrder = 60;
inline constexpr Exponent kDefaultSlaterOrder = 200;

using VerifyTask = std::function<VerifyReport()>;

/// g_{1,N+1,1}(q, q, q, -1, -1): every term must be short-circuited by a
/// vanishing theta prefactor, every Appell-Lerch argument must be pole-free,
/// and the value must be zero.
inline VerifyReport g_vanishing_check(Exponent n, Exponent order) {
  HeckeParams hp{1, n + 1, 1, Monomial::q_pow(1), Monomial::q_pow(1)};
  std::string why;
  return compare_check(
      "g-vanishing", {{"N", n}}, order,
      [&] {
        GEvaluation g = hecke_g_detailed(hp, Monomial{-1, 0}, Monomial{-1, 0}, order);
        for (const auto& t : g.terms) {
          if (!t.theta_zero) why = "a g term has a nonzero theta prefactor";
          if (!t.pole_free) why = "an Appell-Lerch argument has a pole";
        }
        return g.value;
      },
      [&] { return Series::zero(order); }, [&](const Series&, const Series&) { return why; });
}

inline VerifyReport hm_check(Exponent n, Exponent p, Monomial x, Monomial y, Exponent order) {
  nlohmann::json params{{"n", n}, {"p", p}, {"x", to_string(x)}, {"y", to_string(y)}};
  std::optional<HMCheck> res;
  auto run = [&]() -> const HMCheck& {
    if (!res) res = verify_hm(n, p, x, y, order);
    return *res;
  };
  return compare_check(
      "hm-decomposition", params, order, [&] { return run().f; },
      [&] { return run().g + run().theta_part; });
}

inline std::vector<VerifyTask> suite_tasks(Suite suite, const SuiteOptions& opt) {
  std::vector<VerifyTask> tasks;
  const Exponent t = opt.order.value_or(kDefaultVerifyOrder);
  auto want = [&](Suite s) { return suite == Suite::all || suite == s; };
  auto bn_ok = [](const Series& a, const Series& b) -> std::string {
    if (!nonnegative_integral(a) || !nonnegative_integral(b)) {
      return "B_N has a coefficient that is not a nonnegative integer";
    }
    if (a.coeff(0) != 1) return "B_N constant term is not 1";
    return {};
  };
  if (want(Suite::theorem1)) {
    for (Exponent n = opt.n_lo; n <= opt.n_hi; ++n) {
      tasks.push_back([=] {
        return compare_check("theorem1", {{"N", n}}, t, [=] { return bn_multisum(n, t); },
                             [=] { return bn_theta(n, t); }, bn_ok);
      });
    }
  }
  if (want(Suite::slater)) {
    const Exponent ts = opt.order.value_or(kDefaultSlaterOrder);
    tasks.push_back([=] {
      return compare_check("slater-s83", {{"N", 2}}, ts, [=] { return bn_multisum(2, ts); },
                           [=] { return slater_product(ts); }, bn_ok);
    });
  }
  if (want(Suite::heckeroute)) {
    for (Exponent n = opt.n_lo; n <= opt.n_hi; ++n) {
      tasks.push_back([=] {
        return compare_check("hecke-route", {{"N", n}, {"m", 0}}, t,
                             [=] { return bn_hecke(n, 0, t); },
                             [=] { return bn_multisum(n, t); }, bn_ok);
      });
      tasks.push_back([=] {
        return compare_check("hecke-m-independence", {{"N", n}, {"m", 2 * n}}, t,
                             [=] { return bn_hecke(n, 2 * n, t); },
                             [=] { return bn_hecke(n, 0, t); });
      });
    }
  }
  if (want(Suite::string)) {
    for (Exponent n = opt.n_lo; n <= opt.n_hi; ++n) {
      for (Exponent m : {Exponent{0}, 2 * n}) {
        tasks.push_back([=] {
          return compare_check(
              "string-bridge", {{"N", n}, {"m", m}}, t,
              [=] {
                const Exponent D = 4 * n;
                const Exponent lift = m * m / (4 * n);
                Series c = string_function({n, m, 0}, t + lift);
                Series poch = pochhammer_infinite(Monomial::q_pow(D), c.trunc_order(), D, D);
                return (c * poch).shifted(Monomial::q_pow(-m * m)).reduced_scale(D).truncated(t);
              },
              [=] { return bn_multisum(n, t); });
        });
      }
    }
  }
  if (want(Suite::hm)) {
    for (Exponent n = opt.n_lo; n <= opt.n_hi; ++n) {
      tasks.push_back([=] { return g_vanishing_check(n, t); });
      tasks.push_back([=] { return hm_check(1, n, Monomial::q_pow(1), Monomial::q_pow(1), t); });
    }
    tasks.push_back([=] { return hm_check(1, 2, Monomial::q_pow(2), Monomial::q_pow(3), t); });
    tasks.push_back([=] { return hm_check(1, 3, Monomial::q_pow(2), Monomial::q_pow(3), t); });
    tasks.push_back([=] {
      auto xy = find_generic_monomials(2, 3);
      if (!xy) {
        VerifyReport r;
        r.id = "hm-decomposition";
        r.params = {{"n", 2}, {"p", 3}};
        r.order = t;
        r.message = "no generic monomials found";
        return r;
      }
      return hm_check(2, 3, xy->first, xy->second, t);
    });
  }
  if (want(Suite::andrews_gordon)) {
    for (Exponent k = opt.k_lo; k <= opt.k_hi; ++k) {
      for (Exponent i = 1; i <= k; ++i) {
        tasks.push_back([=] {
          std::optional<IdentitySides> sides;
          auto run = [&]() -> const IdentitySides& {
            if (!sides) sides = andrews_gordon(k, i, t);
            return *sides;
          };
          return compare_check("andrews-gordon", {{"k", k}, {"i", i}}, t,
                               [&] { return run().lhs; }, [&] { return run().rhs; });
        });
      }
    }
  }
  return tasks;
}

/// Worker count from QSERIES_WORKERS, else the hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("QSERIES_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs tasks on at most `workers` threads; results keep task order.
inline std::vector<VerifyReport> run_tasks(const std::vector<VerifyTask>& tasks,
                                           unsigned workers) {
  std::vector<VerifyReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = tasks[i]();
  };
  unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

/// Largest N for which the benchmark runs the (N-1)-fold multisum.
inline constexpr Exponent kBenchMultisumMaxLevel = 12;

struct RouteTiming {
  bool ran = false;
  std::string note;
  std::vector<double> runs_ms;
  std::uint64_t work = 0;  // multisum: admissible indices; theta: quotient terms
  std::uint64_t nodes = 0;  // multisum DFS nodes
};

struct BenchReport {
  Exponent level = 0;
  Exponent order = 0;
  int repeats = 1;
  RouteTiming multisum;
  RouteTiming theta;
  bool identical = false;
};

inline double best_ms(const RouteTiming& r) {
  return r.runs_ms.empty() ? 0.0 : *std::min_element(r.runs_ms.begin(), r.runs_ms.end());
}

/// Times bn_multisum against bn_theta. Throws mismatch_error before any
/// timing is reported if the two series are not identical.
inline BenchReport run_bench(Exponent n, Exponent order, int repeats) {
  if (repeats < 1) throw range_error("repeats must be positive");
  BenchReport rep;
  rep.level = n;
  rep.order = order;
  rep.repeats = repeats;
  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto ms = [](auto a, auto b) { return std::chrono::duration<double, std::milli>(b - a).count(); };

  Series theta_series;
  for (int i = 0; i < repeats; ++i) {
    auto t0 = clock();
    theta_series = bn_theta(n, order);
    rep.theta.runs_ms.push_back(ms(t0, clock()));
  }
  rep.theta.ran = true;
  rep.theta.work = static_cast<std::uint64_t>(n * n);

  if (n > kBenchMultisumMaxLevel) {
    rep.multisum.note = "refused: the " + std::to_string(n - 1) +
                        "-fold multisum is infeasible (limit N <= " +
                        std::to_string(kBenchMultisumMaxLevel) + ")";
    return rep;
  }
  Series multi;
  for (int i = 0; i < repeats; ++i) {
    MultisumStats stats;
    auto t0 = clock();
    multi = bn_multisum(n, order, &stats);
    rep.multisum.runs_ms.push_back(ms(t0, clock()));
    rep.multisum.work = stats.indices;
    rep.multisum.nodes = stats.nodes;
  }
  rep.multisum.ran = true;
  if (!(multi == theta_series)) {
    auto d = first_difference(multi, theta_series, order);
    throw mismatch_error("bn_multisum and bn_theta differ at q^" +
                         std::to_string(d.value_or(-1)) + " for N = " + std::to_string(n));
  }
  rep.identical = true;
  return rep;
}

inline nlohmann::json to_json(const RouteTiming& r) {
  nlohmann::json j{{"ran", r.ran}, {"work", r.work}};
  if (r.ran) {
    j["best_ms"] = best_ms(r);
    j["runs_ms"] = r.runs_ms;
  }
  if (r.nodes) j["dfs_nodes"] = r.nodes;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::json to_json(const BenchReport& b) {
  nlohmann::json j{{"N", b.level},
                   {"order", b.order},
                   {"repeats", b.repeats},
                   {"identical", b.identical},
                   {"multisum", to_json(b.multisum)},
                   {"theta", to_json(b.theta)}};
  j["theta"]["work_unit"] = "theta quotient terms (N^2)";
  j["multisum"]["work_unit"] = "admissible multisum indices";
  if (b.multisum.ran && b.theta.ran && best_ms(b.theta) > 0) {
    j["ratio_multisum_over_theta"] = best_ms(b.multisum) / best_ms(b.theta);
  }
  return j;
}

}  // namespace qseries

#endif  // QSERIES_VERIFY_HPP_
