// SPDX-License-Identifier: Apache-2.0
//
// qseries: verification suites, series printing, numeric tables and the
// multisum/theta benchmark.
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 usage or
// parameter error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qseries/hecke.hpp"
#include "qseries/identities.hpp"
#include "qseries/io.hpp"
#include "qseries/numeric.hpp"
#include "qseries/theta.hpp"
#include "qseries/verify.hpp"

namespace {

using namespace qseries;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Range {
  Exponent lo = 2;
  Exponent hi = 6;
};

Range parse_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      Exponent v = std::stoll(text);
      return {v, v};
    }
    return {std::stoll(text.substr(0, dots)), std::stoll(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw range_error("invalid range '" + text + "', expected A..B or A");
  }
}

// Values from --config fill any option not given on the command line.
class Config {
 public:
  void load(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw range_error("cannot open config file '" + path + "'");
    try {
      data_ = json::parse(in);
    } catch (const json::exception& e) {
      throw parse_error("config file '" + path + "': " + e.what());
    }
    if (!data_.is_object()) throw parse_error("config file must hold a JSON object");
  }

  template <class T>
  void fill(CLI::Option* opt, const std::string& key, T& target) const {
    if (opt->count() > 0 || !data_.contains(key)) return;
    try {
      target = data_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw parse_error("config key '" + key + "': " + e.what());
    }
  }

 private:
  json data_ = json::object();
};

std::string coeff_text(const Rational& c) { return c.get_str(); }

void print_series(const Series& s, const std::string& format) {
  if (format == "json") {
    std::cout << to_json(s).dump(2) << "\n";
    return;
  }
  if (s.scale() == 1 && s.valuation() >= 0) {
    std::string sep = format == "csv" ? "," : ", ";
    for (Exponent e = 0; e <= s.trunc_order(); ++e) {
      if (e > 0) std::cout << sep;
      std::cout << coeff_text(s.coeff(e));
    }
    std::cout << "\n";
    return;
  }
  // Laurent series or fractional exponents: one exponent per line.
  for (std::size_t i = 0; i < s.coeffs().size(); ++i) {
    const Rational& c = s.coeffs()[i];
    if (sgn(c) == 0) continue;
    Exponent e = s.min_exp() + static_cast<Exponent>(i);
    std::string exp = std::to_string(e);
    if (s.scale() != 1) exp += "/" + std::to_string(s.scale());
    if (format == "csv") {
      std::cout << exp << "," << coeff_text(c) << "\n";
    } else {
      std::printf("q^%-12s %s\n", exp.c_str(), coeff_text(c).c_str());
    }
  }
  std::cout << (format == "csv" ? "# " : "") << "known modulo q^" << s.trunc_order() + 1
            << (s.scale() != 1 ? "/" + std::to_string(s.scale()) : "") << "\n";
}

std::string real_text(const Real& x, int digits) { return x.str(digits, std::ios_base::fixed); }

json cell_json(const TableCell& c) {
  json j{{"N", c.level == 0 ? json("(q)_inf") : json(c.level)},
         {"q", c.q.str()},
         {"value", real_text(c.primary.value, c.primary.digits + 5)},
         {"table_value", c.rounded},
         {"err_est", c.primary.err_est.str(3, std::ios_base::scientific)},
         {"route", to_string(c.primary.route)},
         {"working_digits", c.primary.working_digits},
         {"terms", c.primary.work.terms},
         {"product_factors", c.primary.work.product_factors}};
  if (c.secondary) {
    j["cross_check"] = {{"route", to_string(c.secondary->route)},
                        {"value", real_text(c.secondary->value, c.primary.digits + 5)},
                        {"err_est", c.secondary->err_est.str(3, std::ios_base::scientific)},
                        {"series_order", c.secondary->work.series_order}};
  }
  return j;
}

int run_verify(const std::string& suite_name, const std::string& n_range,
               const std::string& k_range, std::optional<Exponent> order,
               const std::string& format) {
  SuiteOptions opt;
  Range n = parse_range(n_range);
  Range k = parse_range(k_range);
  opt.n_lo = n.lo;
  opt.n_hi = n.hi;
  opt.k_lo = k.lo;
  opt.k_hi = k.hi;
  opt.order = order;
  if (opt.n_lo < 2 || opt.n_hi < opt.n_lo) throw range_error("N range must satisfy 2 <= A <= B");
  if (opt.k_lo < 2 || opt.k_hi < opt.k_lo) throw range_error("k range must satisfy 2 <= A <= B");
  if (order && *order < 0) throw range_error("order must be nonnegative");
  auto tasks = suite_tasks(parse_suite(suite_name), opt);
  auto t0 = std::chrono::steady_clock::now();
  auto reports = run_tasks(tasks, default_workers());
  double total =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  bool all_pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    json out{{"suite", suite_name}, {"pass", all_pass}, {"wall_ms", total}, {"reports", arr}};
    std::cout << out.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "id,params,order,status,first_difference,wall_ms\n";
    for (const auto& r : reports) {
      std::string params = r.params.dump();
      for (auto& ch : params) {
        if (ch == ',') ch = ';';
      }
      std::cout << r.id << "," << params << "," << r.order << "," << (r.pass ? "pass" : "fail")
                << "," << (r.first_difference ? std::to_string(*r.first_difference) : "") << ","
                << r.wall_ms << "\n";
    }
  } else {
    for (const auto& r : reports) {
      std::printf("%-4s %-22s %-40s T=%-4lld %9.1f ms %s\n", r.pass ? "PASS" : "FAIL",
                  r.id.c_str(), r.params.dump().c_str(), static_cast<long long>(r.order),
                  r.wall_ms, r.message.c_str());
    }
    std::printf("%s: %zu checks, %.1f ms\n", all_pass ? "all pass" : "FAILURES", reports.size(),
                total);
  }
  return all_pass ? kExitPass : kExitFail;
}

int run_series(const std::string& target, Exponent n, Exponent m, Exponent l, Exponent order,
               const std::string& sym, const std::string& format) {
  if (order < 0) throw range_error("order must be nonnegative");
  Series s;
  if (target == "multisum") {
    s = bn_multisum(n, order);
  } else if (target == "theta") {
    s = bn_theta(n, order);
  } else if (target == "hecke") {
    s = bn_hecke(n, m, order);
  } else if (target == "string") {
    s = string_function({n, m, l}, order).with_minimal_scale();
  } else if (target == "slater") {
    s = slater_product(order);
  } else if (target == "jsymbol") {
    if (sym.empty()) throw range_error("series jsymbol needs --sym");
    s = expand_j(parse_jsymbol(sym), order);
  } else {
    throw range_error("unknown series target '" + target + "'");
  }
  print_series(s, format);
  return kExitPass;
}

void print_table_csv(const std::vector<TableCell>& cells) {
  std::cout << "N\\1/q";
  for (const auto& q : table1_qs()) std::cout << "," << q.den.get_str();
  std::cout << "\n";
  std::size_t cols = table1_qs().size();
  for (std::size_t i = 0; i < cells.size(); i += cols) {
    std::cout << (cells[i].level == 0 ? std::string("(q)_inf") : std::to_string(cells[i].level));
    for (std::size_t j = 0; j < cols; ++j) std::cout << "," << cells[i + j].rounded;
    std::cout << "\n";
  }
}

int run_eval(bool table, Exponent n, const std::string& q_text, int digits,
             const std::string& format) {
  if (digits < 1 || digits > 60) throw range_error("digits must be in [1, 60]");
  if (table) {
    auto cells = table1(digits);
    if (format == "csv") {
      print_table_csv(cells);
    } else if (format == "json") {
      json arr = json::array();
      for (const auto& c : cells) arr.push_back(cell_json(c));
      std::cout << json{{"digits", digits}, {"quantity", "1/B_N(q); last row (q)_inf"},
                        {"cells", arr}}
                       .dump(2)
                << "\n";
    } else {
      for (const auto& c : cells) {
        std::printf("N=%-8s q=%-6s %s\n",
                    c.level == 0 ? "(q)_inf" : std::to_string(c.level).c_str(), c.q.str().c_str(),
                    c.rounded.c_str());
      }
    }
    return kExitPass;
  }
  if (q_text.empty()) throw range_error("eval needs --table1 or --n and --q");
  RationalQ q = RationalQ::parse(q_text);
  TableCell c = eval_bn_cell(n, q, digits);
  if (format == "json") {
    std::cout << cell_json(c).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "N,q,table_value,B_N,err_est\n"
              << n << "," << q.str() << "," << c.rounded << ","
              << real_text(c.primary.value, digits + 5) << ","
              << c.primary.err_est.str(3, std::ios_base::scientific) << "\n";
  } else {
    std::cout << "1/B_" << n << "(" << q.str() << ") = " << c.rounded << "\n"
              << "B_" << n << "(" << q.str() << ") = " << real_text(c.primary.value, digits + 5)
              << "  (err_est " << c.primary.err_est.str(3, std::ios_base::scientific) << ")\n";
  }
  return kExitPass;
}

int run_bench_cmd(Exponent n, Exponent order, int repeats, const std::string& format) {
  if (n < 2) throw range_error("N must be at least 2");
  if (order < 0) throw range_error("order must be nonnegative");
  BenchReport rep = run_bench(n, order, repeats);
  if (format == "json") {
    std::cout << to_json(rep).dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "route,N,order,ran,best_ms,work\n";
    std::cout << "multisum," << n << "," << order << "," << rep.multisum.ran << ","
              << best_ms(rep.multisum) << "," << rep.multisum.work << "\n";
    std::cout << "theta," << n << "," << order << "," << rep.theta.ran << ","
              << best_ms(rep.theta) << "," << rep.theta.work << "\n";
  } else {
    std::printf("N=%lld T=%lld repeats=%d\n", static_cast<long long>(n),
                static_cast<long long>(order), repeats);
    if (rep.multisum.ran) {
      std::printf("  multisum  %10.3f ms  %llu indices, %llu DFS nodes\n", best_ms(rep.multisum),
                  static_cast<unsigned long long>(rep.multisum.work),
                  static_cast<unsigned long long>(rep.multisum.nodes));
    } else {
      std::printf("  multisum  %s\n", rep.multisum.note.c_str());
    }
    std::printf("  theta     %10.3f ms  %llu quotient terms\n", best_ms(rep.theta),
                static_cast<unsigned long long>(rep.theta.work));
    if (rep.identical) std::printf("  series identical to q^%lld\n", static_cast<long long>(order));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact q-series engine for B_N(q): verification, series, evaluation, benchmark"};
  app.require_subcommand(1);
  std::string format = "json";
  std::string config_path;
  auto* format_opt = app.add_option("--format", format, "Output format")
                         ->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--config", config_path, "JSON file with default option values");

  // verify
  auto* verify = app.add_subcommand("verify", "Run identity verification suites");
  std::string suite = "all";
  std::string n_range = "2..6";
  std::string k_range = "2..3";
  Exponent verify_order = -1;
  auto* suite_opt = verify->add_option("--suite", suite, "Suite to run")
                        ->check(CLI::IsMember(
                            {"theorem1", "slater", "heckeroute", "string", "hm", "andrews-gordon", "all"}));
  auto* nrange_opt = verify->add_option("--n", n_range, "Level range A..B");
  auto* krange_opt = verify->add_option("--k", k_range, "Andrews-Gordon k range A..B");
  auto* vorder_opt = verify->add_option("--order", verify_order, "Truncation order T");

  // series
  auto* series = app.add_subcommand("series", "Print exact coefficients");
  std::string target;
  Exponent n = 2;
  Exponent m = 0;
  Exponent l = 0;
  Exponent order = 20;
  std::string sym;
  series->add_option("target", target, "multisum | theta | hecke | string | slater | jsymbol")
      ->required()
      ->check(CLI::IsMember({"multisum", "theta", "hecke", "string", "slater", "jsymbol"}));
  auto* sn_opt = series->add_option("--n", n, "Level N");
  series->add_option("--m", m, "m (hecke, string)");
  series->add_option("--l", l, "l (string)");
  auto* sorder_opt = series->add_option("--order", order, "Truncation order T");
  series->add_option("--sym", sym, "Theta symbol, e.g. 'j(- q^-2 ; q^4)' or 'Jbar(0,8)'");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate B_N(q) numerically");
  bool table = false;
  Exponent eval_n = 2;
  std::string q_text;
  int digits = 5;
  eval->add_flag("--table1", table, "Reproduce the full grid");
  auto* en_opt = eval->add_option("--n", eval_n, "Level N");
  auto* q_opt = eval->add_option("--q", q_text, "Rational q in (0,1), e.g. 1/2");
  auto* digits_opt = eval->add_option("--digits", digits, "Decimal digits");

  // bench
  auto* bench = app.add_subcommand("bench", "Time the multisum against the theta formula");
  Exponent bench_n = 6;
  Exponent bench_order = 60;
  int repeats = 3;
  auto* bn_opt = bench->add_option("--n", bench_n, "Level N");
  auto* border_opt = bench->add_option("--order", bench_order, "Truncation order T");
  auto* rep_opt = bench->add_option("--repeats", repeats, "Timing repetitions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    Config cfg;
    cfg.load(config_path);
    cfg.fill(format_opt, "format", format);
    if (format != "json" && format != "text" && format != "csv") {
      throw range_error("format must be json, text or csv");
    }
    if (verify->parsed()) {
      cfg.fill(suite_opt, "suite", suite);
      cfg.fill(nrange_opt, "n", n_range);
      cfg.fill(krange_opt, "k", k_range);
      cfg.fill(vorder_opt, "order", verify_order);
      std::optional<Exponent> ord;
      if (verify_order >= 0) ord = verify_order;
      return run_verify(suite, n_range, k_range, ord, format);
    }
    if (series->parsed()) {
      cfg.fill(sn_opt, "n", n);
      cfg.fill(sorder_opt, "order", order);
      return run_series(target, n, m, l, order, sym, format);
    }
    if (eval->parsed()) {
      cfg.fill(en_opt, "n", eval_n);
      cfg.fill(q_opt, "q", q_text);
      cfg.fill(digits_opt, "digits", digits);
      return run_eval(table, eval_n, q_text, digits, format);
    }
    if (bench->parsed()) {
      cfg.fill(bn_opt, "n", bench_n);
      cfg.fill(border_opt, "order", bench_order);
      cfg.fill(rep_opt, "repeats", repeats);
      return run_bench_cmd(bench_n, bench_order, repeats, format);
    }
  } catch (const mismatch_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const precision_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
