#pragma once

// Parameter sequences and convergence sweeps.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "pqk/bounds.hpp"
#include "pqk/operator.hpp"
#include "pqk/test_function.hpp"

namespace pqk {

/// n -> (n/(n+b), n/(n+a)) with a > b > 0. Both components tend to 1,
/// p_n^n -> e^{-b} and q_n^n -> e^{-a}.
struct ParamSequence {
  double a = 2.0;
  double b = 1.0;

  void validate() const {
    if (!(b > 0.0) || !(a > b) || !std::isfinite(a)) {
      throw std::invalid_argument("parameter sequence requires a > b > 0");
    }
  }

  PQParams at(std::size_t n) const {
    validate();
    if (n == 0) throw std::invalid_argument("parameter sequence index must be >= 1");
    const double nn = static_cast<double>(n);
    return PQParams(nn / (nn + b), nn / (nn + a));
  }
};

inline PQParams param_sequence(double a, double b, std::size_t n) {
  return ParamSequence{a, b}.at(n);
}

/// Points lo, lo + h, ..., hi with h adjusted so that hi is hit exactly.
inline std::vector<double> uniform_points(double lo, double hi, double step) {
  if (!(hi >= lo) || !(step > 0.0)) {
    throw std::invalid_argument("uniform_points: need hi >= lo and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::llround(std::max(1.0, (hi - lo) / step)));
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
  }
  return xs;
}

struct ConvergenceRow {
  std::size_t n = 0;
  double p = 0.0;
  double q = 0.0;
  double pq_n = 0.0;
  std::string f;
  double x_max = 0.0;
  double sup_error = 0.0;
  double weighted_sup_error = 0.0;
  double alpha = 0.0;
  std::optional<double> bound_thm5;
  std::optional<double> bound_thm6;
  std::optional<double> bound_thm10;
  bool converged = true;
};

struct ConvergeConfig {
  /// Either a parameter sequence or one fixed (p, q) for every n.
  std::variant<ParamSequence, PQParams> params = ParamSequence{};
  std::vector<std::size_t> n_list = {16, 64, 256, 1024};
  std::vector<double> x_grid = uniform_points(0.0, 2.0, 0.05);
  std::vector<double> weighted_grid = uniform_points(0.0, 50.0, 0.5);
  double alpha = 0.5;
  bool with_bounds = true;
  double M = 4.0;       // constant of the second-order modulus bound
  double K = 8.0;       // constant of the weighted modulus bound
  double lambda = 1.0;
  GridSpec modulus_grid{};
  SeriesPolicy policy{};

  PQParams params_at(std::size_t n) const {
    if (const auto* seq = std::get_if<ParamSequence>(&params)) return seq->at(n);
    return std::get<PQParams>(params);
  }
};

/// One row per n: sup |K_n f - f| over x_grid, the weighted sup
/// |K_n f - f| / (1 + x^2)^{1+alpha} over weighted_grid, and optionally the
/// three bound right-hand sides evaluated at the right end of x_grid.
inline std::vector<ConvergenceRow> converge_run(const TestFunction& f,
                                                const ConvergeConfig& cfg) {
  if (cfg.x_grid.empty()) throw std::invalid_argument("converge_run: empty x grid");
  if (!std::is_sorted(cfg.n_list.begin(), cfg.n_list.end()) ||
      std::adjacent_find(cfg.n_list.begin(), cfg.n_list.end()) != cfg.n_list.end()) {
    throw std::invalid_argument("converge_run: n list must be strictly increasing");
  }
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("converge_run: alpha must be nonnegative");
  if (const auto* seq = std::get_if<ParamSequence>(&cfg.params)) seq->validate();

  const double x_max = *std::max_element(cfg.x_grid.begin(), cfg.x_grid.end());
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : cfg.n_list) {
    const OperatorContext ctx(n, cfg.params_at(n), cfg.policy);
    KantorovichEvaluator eval(ctx, f);
    ConvergenceRow row;
    row.n = n;
    row.p = ctx.p();
    row.q = ctx.q();
    row.pq_n = ctx.pq_n();
    row.f = f.name;
    row.x_max = x_max;
    row.alpha = cfg.alpha;
    for (double x : cfg.x_grid) {
      const SeriesResult k = eval(x);
      row.converged = row.converged && k.converged;
      row.sup_error = std::max(row.sup_error, std::abs(k.value - f(x)));
    }
    for (double x : cfg.weighted_grid) {
      const SeriesResult k = eval(x);
      row.converged = row.converged && k.converged;
      const double w = std::pow(1.0 + x * x, 1.0 + cfg.alpha);
      row.weighted_sup_error = std::max(row.weighted_sup_error, std::abs(k.value - f(x)) / w);
    }
    if (cfg.with_bounds) {
      if (f.growth_order <= 2.0) {
        row.bound_thm5 = theorem5_bound(ctx, f, x_max, x_max, cfg.modulus_grid).bound_value;
        row.bound_thm10 =
            theorem10_bound(ctx, f, x_max, cfg.lambda, cfg.K, cfg.modulus_grid).bound_value;
      }
      if (f.bounded) {
        row.bound_thm6 = theorem6_bound(ctx, f, x_max, cfg.M, cfg.modulus_grid).bound_value;
      }
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
    return std::tie(a.n, a.f) < std::tie(b.n, b.f);
  });
  return rows;
}

}  // namespace pqk
