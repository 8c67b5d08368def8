// pqk: command line front end for the (p,q)-Szasz-Mirakjan-Kantorovich library.
//
//   pqk eval      --p 0.9 --q 0.8 --n 5 --x 1 --f exp_neg
//   pqk moments   --p 0.9 --q 0.8 --n 5 --x 1
//   pqk bounds    --f exp_neg --n 100 --p 0.999 --q 0.998 --x 1 --theorem all
//   pqk converge  --f exp_neg --a 2 --b 1 --n-list 16,64,256,1024
//   pqk verify    --level fast
//
// Exit codes: 0 ok, 1 invariant failure, 2 configuration error,
// 3 series non-convergence.

#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqk/pqk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOptions {
  double p = 0.9;
  double q = 0.8;
  std::size_t n = 5;
  std::vector<double> x = {1.0};
  std::string f = "exp_neg";
  double rel_tol = 1e-12;
  std::size_t max_terms = 1000000;
  std::string out = "-";
  std::string format = "json";

  pqk::SeriesPolicy policy() const {
    pqk::SeriesPolicy s;
    s.rel_tol = rel_tol;
    s.max_terms = max_terms;
    s.validate();
    return s;
  }
  pqk::PQParams params() const { return pqk::PQParams(p, q); }
  pqk::ReportFormat report_format() const { return pqk::parse_format(format); }
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_function = true) {
  cmd->add_option("--p", o.p, "parameter p, 0 < q < p <= 1")->capture_default_str();
  cmd->add_option("--q", o.q, "parameter q, 0 < q < p <= 1")->capture_default_str();
  cmd->add_option("--n", o.n, "operator order n >= 1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--x", o.x, "evaluation point(s), x >= 0")
      ->check(CLI::NonNegativeNumber)
      ->delimiter(',')
      ->capture_default_str();
  if (with_function) {
    cmd->add_option("--f", o.f, "registry function name")->capture_default_str();
  }
  cmd->add_option("--rel-tol", o.rel_tol, "series relative tolerance")->capture_default_str();
  cmd->add_option("--max-terms", o.max_terms, "series term cap")->capture_default_str();
  cmd->add_option("--out", o.out, "output file, '-' for stdout")->capture_default_str();
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// Rejects invalid (p, q) while parsing so that the error surfaces as a
// configuration error before any work is done.
void check_params_after_parse(CLI::App* cmd, const CommonOptions& o) {
  cmd->parse_complete_callback([&o] {
    try {
      (void)o.params();
    } catch (const std::invalid_argument& e) {
      throw CLI::ValidationError("--p/--q", e.what());
    }
  });
}

// ---------------------------------------------------------------------------
// eval

struct EvalRow {
  std::string op;
  std::string f;
  std::size_t n;
  double p, q, x;
  pqk::SeriesResult result;
  double f_x;
};

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out = "operator,f,n,p,q,x,value,f_x,error,terms_used,tail_estimate,converged\n";
  for (const auto& r : rows) {
    out += r.op + ',' + r.f + ',' + std::to_string(r.n) + ',' + pqk::format15(r.p) + ',' +
           pqk::format15(r.q) + ',' + pqk::format15(r.x) + ',' +
           pqk::format15(r.result.value) + ',' + pqk::format15(r.f_x) + ',' +
           pqk::format15(std::abs(r.result.value - r.f_x)) + ',' +
           std::to_string(r.result.terms_used) + ',' + pqk::format15(r.result.tail_estimate) +
           ',' + (r.result.converged ? "true" : "false") + '\n';
  }
  return out;
}

std::string eval_json(const std::vector<EvalRow>& rows) {
  using pqk::detail::json_number;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"operator", r.op},
                   {"f", r.f},
                   {"n", r.n},
                   {"p", json_number(r.p)},
                   {"q", json_number(r.q)},
                   {"x", json_number(r.x)},
                   {"value", json_number(r.result.value)},
                   {"f_x", json_number(r.f_x)},
                   {"error", json_number(std::abs(r.result.value - r.f_x))},
                   {"terms_used", r.result.terms_used},
                   {"tail_estimate", json_number(r.result.tail_estimate)},
                   {"converged", r.result.converged}});
  }
  return arr.dump(2) + '\n';
}

int run_eval(const CommonOptions& o, const std::string& op, bool numeric) {
  const pqk::OperatorContext ctx(o.n, o.params(), o.policy());
  pqk::TestFunction f = pqk::require_function(o.f);
  if (numeric) f = pqk::without_closed_form(f);
  const auto quad = numeric ? pqk::CellQuadrature::numeric : pqk::CellQuadrature::automatic;
  std::vector<EvalRow> rows;
  bool converged = true;
  for (double x : o.x) {
    pqk::SeriesResult r;
    if (op == "szasz") {
      r = pqk::szasz_apply(ctx, f, x);
    } else if (op == "auxiliary") {
      r = pqk::auxiliary_apply(ctx, f, x, quad);
    } else {
      r = pqk::kantorovich_apply(ctx, f, x, quad);
    }
    converged = converged && r.converged;
    rows.push_back({op, f.name, o.n, ctx.p(), ctx.q(), x, r, f(x)});
  }
  pqk::write_output(o.out, o.report_format() == pqk::ReportFormat::csv ? eval_csv(rows)
                                                                         : eval_json(rows));
  return converged ? kExitOk : kExitNonConvergence;
}

// ---------------------------------------------------------------------------
// moments

int run_moments(const CommonOptions& o, const std::string& op) {
  const pqk::OperatorContext ctx(o.n, o.params(), o.policy());
  const auto kind = op == "szasz" ? pqk::OperatorKind::szasz : pqk::OperatorKind::kantorovich;
  std::string text;
  nlohmann::json arr = nlohmann::json::array();
  bool converged = true;
  for (std::size_t i = 0; i < o.x.size(); ++i) {
    const pqk::MomentTable t = pqk::moment_table(ctx, kind, o.x[i]);
    for (const auto& row : t.rows) converged = converged && row.direct_converged;
    std::string csv = pqk::to_csv(t);
    if (i > 0) csv.erase(0, csv.find('\n') + 1);
    text += csv;
    arr.push_back(pqk::to_json(t));
  }
  if (o.report_format() == pqk::ReportFormat::json) text = arr.dump(2) + '\n';
  pqk::write_output(o.out, text);
  return converged ? kExitOk : kExitNonConvergence;
}

// ---------------------------------------------------------------------------
// bounds

struct BoundsOptions {
  std::string theorem = "all";
  double a = 2.0;
  double M = 4.0;
  double K = 8.0;
  double lambda = 1.0;
  double grid_x_max = 50.0;
  double grid_step = 1e-3;
};

int run_bounds(const CommonOptions& o, const BoundsOptions& b) {
  const pqk::OperatorContext ctx(o.n, o.params(), o.policy());
  const pqk::TestFunction f = pqk::require_function(o.f);
  const pqk::GridSpec grid{b.grid_x_max, b.grid_step, b.grid_step};
  grid.validate();
  const bool all = b.theorem == "all";
  std::vector<pqk::BoundReport> reports;
  for (double x : o.x) {
    if (all || b.theorem == "thm5") {
      if (f.growth_order <= 2.0 && x <= b.a) {
        reports.push_back(pqk::theorem5_bound(ctx, f, x, b.a, grid));
      } else if (!all) {
        throw std::invalid_argument("thm5 needs growth order <= 2 and x <= a");
      }
    }
    if (all || b.theorem == "thm6") {
      if (f.bounded) reports.push_back(pqk::theorem6_bound(ctx, f, x, b.M, grid));
      else if (!all) throw std::invalid_argument("thm6 needs a bounded function");
    }
    if (all || b.theorem == "thm10") {
      if (f.growth_order <= 2.0) {
        reports.push_back(pqk::theorem10_bound(ctx, f, x, b.lambda, b.K, grid));
      } else if (!all) {
        throw std::invalid_argument("thm10 needs growth order <= 2");
      }
    }
  }
  pqk::emit_report(reports, o.report_format(), o.out);
  bool violation = false;
  bool converged = true;
  for (const auto& r : reports) {
    violation = violation || r.violation;
    converged = converged && r.operator_converged;
  }
  if (violation) return kExitInvariant;
  return converged ? kExitOk : kExitNonConvergence;
}

// ---------------------------------------------------------------------------
// converge

struct ConvergeOptions {
  double a = 2.0;
  double b = 1.0;
  std::vector<std::size_t> n_list = {16, 64, 256, 1024};
  double alpha = 0.5;
  double x_max = 2.0;
  double weighted_x_max = 50.0;
  bool no_bounds = false;
  bool fixed = false;
};

int run_converge(const CommonOptions& o, const ConvergeOptions& c) {
  pqk::ConvergeConfig cfg;
  if (c.fixed) {
    cfg.params = o.params();
  } else {
    pqk::ParamSequence seq{c.a, c.b};
    seq.validate();
    cfg.params = seq;
  }
  cfg.n_list = c.n_list;
  cfg.alpha = c.alpha;
  cfg.x_grid = pqk::uniform_points(0.0, c.x_max, 0.05);
  cfg.weighted_grid = pqk::uniform_points(0.0, c.weighted_x_max, 0.5);
  cfg.with_bounds = !c.no_bounds;
  cfg.policy = o.policy();
  const auto rows = pqk::converge_run(pqk::require_function(o.f), cfg);
  pqk::emit_report(rows, o.report_format(), o.out);
  for (const auto& r : rows) {
    if (!r.converged) return kExitNonConvergence;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const CommonOptions& o, const std::string& level) {
  const pqk::VerifyReport report =
      pqk::verify_suite(level == "full" ? pqk::VerifyLevel::full : pqk::VerifyLevel::fast);
  pqk::emit_report(report, o.report_format(), o.out);
  for (const auto& c : report.checks) {
    std::fprintf(stderr, "%-28s %s  measured %s  limit %s\n", c.id.c_str(),
                 c.passed ? "PASS" : "FAIL", pqk::format15(c.measured).c_str(),
                 pqk::format15(c.threshold).c_str());
  }
  return report.passed() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(p,q)-Szasz-Mirakjan-Kantorovich operators: evaluation, moments, "
               "error bounds and convergence sweeps"};
  app.set_config("--config", "", "INI file; subcommand flags go under [eval], [converge], ...");
  app.require_subcommand(1);

  CommonOptions eval_opts, moments_opts, bounds_opts, converge_opts, verify_opts;

  std::string eval_op = "kantorovich";
  bool eval_numeric = false;
  auto* eval = app.add_subcommand("eval", "evaluate an operator on a registry function");
  add_common(eval, eval_opts);
  eval->add_option("--operator", eval_op, "szasz, kantorovich or auxiliary")
      ->check(CLI::IsMember({"szasz", "kantorovich", "auxiliary"}))
      ->capture_default_str();
  eval->add_flag("--numeric", eval_numeric, "always use numeric cell quadrature");
  check_params_after_parse(eval, eval_opts);

  std::string moments_op = "kantorovich";
  auto* moments = app.add_subcommand("moments", "moment table for orders 0..4");
  add_common(moments, moments_opts, false);
  moments->add_option("--operator", moments_op, "szasz or kantorovich")
      ->check(CLI::IsMember({"szasz", "kantorovich"}))
      ->capture_default_str();
  check_params_after_parse(moments, moments_opts);

  BoundsOptions bounds_cfg;
  auto* bounds = app.add_subcommand("bounds", "pointwise error bounds at (n, p, q, x)");
  add_common(bounds, bounds_opts);
  bounds->add_option("--theorem", bounds_cfg.theorem, "thm5, thm6, thm10 or all")
      ->check(CLI::IsMember({"thm5", "thm6", "thm10", "all"}))
      ->capture_default_str();
  bounds->add_option("--a", bounds_cfg.a, "interval [0, a] of the thm5 bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds->add_option("--M", bounds_cfg.M, "constant of the thm6 bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds->add_option("--K", bounds_cfg.K, "constant of the thm10 bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds->add_option("--lambda", bounds_cfg.lambda, "exponent of the thm10 bound, >= 1")
      ->check(CLI::Range(1.0, 1e300))
      ->capture_default_str();
  bounds->add_option("--grid-x-max", bounds_cfg.grid_x_max, "modulus grid extent")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bounds->add_option("--grid-step", bounds_cfg.grid_step, "modulus grid step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  check_params_after_parse(bounds, bounds_opts);

  ConvergeOptions conv_cfg;
  auto* converge = app.add_subcommand(
      "converge", "sweep n along p_n = n/(n+b), q_n = n/(n+a) (or fixed p, q)");
  add_common(converge, converge_opts);
  converge->add_option("--a", conv_cfg.a, "sequence parameter a > b")->capture_default_str();
  converge->add_option("--b", conv_cfg.b, "sequence parameter b > 0")->capture_default_str();
  converge->add_option("--n-list", conv_cfg.n_list, "increasing list of n")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  converge->add_option("--alpha", conv_cfg.alpha, "weight exponent 1 + alpha")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  converge->add_option("--x-max", conv_cfg.x_max, "right end A of the sup-error grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  converge->add_option("--weighted-x-max", conv_cfg.weighted_x_max,
                       "right end of the weighted-error grid")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  converge->add_flag("--no-bounds", conv_cfg.no_bounds, "skip the bound columns");
  converge->add_flag("--fixed", conv_cfg.fixed, "use --p/--q for every n instead of a sequence");
  check_params_after_parse(converge, converge_opts);

  std::string level = "fast";
  auto* verify = app.add_subcommand("verify", "run every invariant check");
  verify->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();
  verify->add_option("--out", verify_opts.out, "output file, '-' for stdout")
      ->capture_default_str();
  verify->add_option("--format", verify_opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*eval) return run_eval(eval_opts, eval_op, eval_numeric);
    if (*moments) return run_moments(moments_opts, moments_op);
    if (*bounds) return run_bounds(bounds_opts, bounds_cfg);
    if (*converge) return run_converge(converge_opts, conv_cfg);
    if (*verify) return run_verify(verify_opts, level);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
