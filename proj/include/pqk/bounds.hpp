#pragma once

// Moduli of continuity, weighted norms, and the computable right-hand sides
// of the pointwise error bounds for K_n.
//
// All suprema are taken over finite grids and are therefore lower estimates
// of the true suprema. Domination checks refine the grid before reporting a
// violation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqk/moments.hpp"
#include "pqk/operator.hpp"
#include "pqk/test_function.hpp"

namespace pqk {

struct GridSpec {
  double x_max = 50.0;
  double step = 1e-3;
  double h_step = 1e-3;

  void validate() const {
    if (!(x_max > 0.0) || !(step > 0.0) || !(h_step > 0.0)) {
      throw std::invalid_argument("GridSpec: x_max, step and h_step must be positive");
    }
    if (step > h_step) {
      throw std::invalid_argument("GridSpec: step must not exceed h_step");
    }
  }

  GridSpec refined() const { return GridSpec{x_max, step / 2, h_step / 2}; }
};

namespace detail {

// Uniform grid on [lo, hi] with spacing at most `step`, both ends included.
struct UniformGrid {
  double lo;
  double spacing;
  std::size_t intervals;
  double at(std::size_t i) const { return lo + static_cast<double>(i) * spacing; }
};

inline UniformGrid make_grid(double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / step - 1e-9)));
  return UniformGrid{lo, (hi - lo) / static_cast<double>(n), n};
}

template <class F>
std::vector<double> sample(const F& f, const UniformGrid& g, std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = f(g.at(i));
  return v;
}

// Step between tested increments h: h_step, widened so that at most
// `max_increments` values are tried.
inline std::size_t increment_stride(double delta, const GridSpec& grid,
                                    double spacing, std::size_t max_increments) {
  const double h = std::max(grid.h_step, delta / static_cast<double>(max_increments));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(h / spacing + 1e-9)));
}

// sup |f(t) - f(s)| over t, s in [lo, hi] with |t - s| <= delta.
template <class F>
double first_order_modulus(const F& f, double delta, double lo, double hi,
                           double step) {
  if (!(delta > 0.0)) throw std::domain_error("modulus: delta must be positive");
  const UniformGrid g = make_grid(lo, hi, step);
  const std::vector<double> v = sample(f, g, g.intervals + 1);
  const auto window = static_cast<std::size_t>(std::floor(delta / g.spacing + 1e-9));

  double best = 0.0;
  if (window >= g.intervals) {
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    best = *mx - *mn;
  } else if (window > 0) {
    // Sliding-window max - min over index windows of length window + 1.
    std::deque<std::size_t> maxq, minq;
    for (std::size_t i = 0; i < v.size(); ++i) {
      while (!maxq.empty() && v[maxq.back()] <= v[i]) maxq.pop_back();
      while (!minq.empty() && v[minq.back()] >= v[i]) minq.pop_back();
      maxq.push_back(i);
      minq.push_back(i);
      if (maxq.front() + window < i) maxq.pop_front();
      if (minq.front() + window < i) minq.pop_front();
      if (i >= window) best = std::max(best, v[maxq.front()] - v[minq.front()]);
    }
  }
  // Pairs at exactly distance delta anchored on grid points.
  if (delta <= hi - lo) {
    for (std::size_t i = 0; i <= g.intervals; ++i) {
      const double s = g.at(i);
      if (s + delta <= hi) best = std::max(best, std::abs(f(s + delta) - v[i]));
      if (s - delta >= lo) best = std::max(best, std::abs(v[i] - f(s - delta)));
    }
  }
  return best;
}

}  // namespace detail

/// Grid estimate of omega_{a+1}(f, delta) on [0, a+1].
template <class F>
double modulus_local(const F& f, double delta, double a, const GridSpec& grid = {}) {
  grid.validate();
  if (!(a > 0.0)) throw std::domain_error("modulus_local: a must be positive");
  return detail::first_order_modulus(f, delta, 0.0, a + 1.0, grid.step);
}

/// Grid estimate of sup_{0<h<=delta} sup_{x in [0, x_max]}
/// |f(x+2h) - 2f(x+h) + f(x)|. Defined for bounded f only.
inline double modulus2(const TestFunction& f, double delta, const GridSpec& grid = {}) {
  grid.validate();
  if (!f.bounded) {
    throw std::domain_error("modulus2: '" + f.name +
                            "' is not in C_B[0,inf); the second-order modulus "
                            "requires a bounded function");
  }
  if (!(delta > 0.0)) throw std::domain_error("modulus2: delta must be positive");
  const detail::UniformGrid g = detail::make_grid(0.0, grid.x_max, grid.step);
  const std::size_t reach = static_cast<std::size_t>(std::ceil(2.0 * delta / g.spacing)) + 2;
  const std::vector<double> v = detail::sample(f, g, g.intervals + 1 + reach);
  const std::size_t stride = detail::increment_stride(delta, grid, g.spacing, 2000);

  double best = 0.0;
  for (std::size_t d = stride; static_cast<double>(d) * g.spacing <= delta * (1 + 1e-12);
       d += stride) {
    for (std::size_t i = 0; i <= g.intervals; ++i) {
      best = std::max(best, std::abs(v[i + 2 * d] - 2.0 * v[i + d] + v[i]));
    }
  }
  for (std::size_t i = 0; i <= g.intervals; ++i) {
    const double x = g.at(i);
    best = std::max(best, std::abs(f(x + 2 * delta) - 2.0 * f(x + delta) + v[i]));
  }
  return best;
}

/// Grid estimate of Omega_2(f, delta) =
/// sup_{x >= 0, 0 < h <= delta} |f(x+h) - f(x)| / (1 + (x+h)^2) over
/// x in [0, x_max].
inline double weighted_modulus(const TestFunction& f, double delta,
                               const GridSpec& grid = {}) {
  grid.validate();
  if (f.growth_order > 2.0) {
    throw std::domain_error("weighted_modulus: '" + f.name +
                            "' grows faster than x^2 and is outside C*_2[0,inf)");
  }
  if (!(delta > 0.0)) throw std::domain_error("weighted_modulus: delta must be positive");
  const detail::UniformGrid g = detail::make_grid(0.0, grid.x_max, grid.step);
  const std::size_t reach = static_cast<std::size_t>(std::ceil(delta / g.spacing)) + 2;
  const std::vector<double> v = detail::sample(f, g, g.intervals + 1 + reach);
  const std::size_t stride = detail::increment_stride(delta, grid, g.spacing, 2000);

  double best = 0.0;
  for (std::size_t d = stride; static_cast<double>(d) * g.spacing <= delta * (1 + 1e-12);
       d += stride) {
    for (std::size_t i = 0; i <= g.intervals; ++i) {
      const double xh = g.at(i + d);
      best = std::max(best, std::abs(v[i + d] - v[i]) / (1.0 + xh * xh));
    }
  }
  for (std::size_t i = 0; i <= g.intervals; ++i) {
    const double xh = g.at(i) + delta;
    best = std::max(best, std::abs(f(xh) - v[i]) / (1.0 + xh * xh));
  }
  return best;
}

struct WeightedNorm {
  double value = 0.0;
  /// Growth order of f is below m, so |f|/(1+x^m) -> 0 and the supremum is
  /// attained on a bounded range.
  bool tail_vanishes = false;
};

/// Grid estimate of ||f||_m = sup |f(x)| / (1 + x^m) over [0, x_max].
template <class F>
WeightedNorm weighted_norm(const F& f, double m, const GridSpec& grid = {},
                           std::optional<double> growth_order = std::nullopt) {
  grid.validate();
  const detail::UniformGrid g = detail::make_grid(0.0, grid.x_max, grid.step);
  double best = 0.0;
  for (std::size_t i = 0; i <= g.intervals; ++i) {
    const double x = g.at(i);
    best = std::max(best, std::abs(f(x)) / (1.0 + std::pow(x, m)));
  }
  return WeightedNorm{best, growth_order && *growth_order < m};
}

inline WeightedNorm weighted_norm(const TestFunction& f, double m,
                                  const GridSpec& grid = {}) {
  return weighted_norm(f.evaluator, m, grid, f.growth_order);
}

/// Constant M with |f(x)| <= M (1 + x^2), derived from the declared growth
/// data: M_f * sup_x (1 + x^m)/(1 + x^2) for m <= 2.
inline double c2_growth_constant(const TestFunction& f) {
  if (f.growth_order > 2.0) {
    throw std::domain_error("'" + f.name + "' is not in C_2[0,inf)");
  }
  const double m = f.growth_order;
  double ratio = 1.0;
  for (double x = 0.0; x <= 20.0; x += 1e-3) {
    ratio = std::max(ratio, (1.0 + std::pow(x, m)) / (1.0 + x * x));
  }
  return f.growth_constant * ratio * (1.0 + 1e-9);
}

// ---------------------------------------------------------------------------
// Bound reports

struct BoundReport {
  std::string theorem;
  std::size_t n = 0;
  double p = 0.0;
  double q = 0.0;
  double x = 0.0;
  std::string function;
  double actual_error = 0.0;
  double bound_value = 0.0;
  double slack = 0.0;
  // Constants used (absent when the theorem has no such constant).
  std::optional<double> growth_constant;  // M_f as used in the bound
  std::optional<double> a;
  std::optional<double> M;
  std::optional<double> K;
  std::optional<double> lambda;
  /// Smallest value of the theorem's free constant that makes the bound
  /// hold at this point.
  std::optional<double> empirical_constant;
  int refinements = 0;
  bool operator_converged = true;
  bool violation = false;
};

inline constexpr double kBoundTolerance = 1e-10;

namespace detail {
inline BoundReport base_report(const char* theorem, const OperatorContext& ctx,
                               const TestFunction& f, double x) {
  BoundReport r;
  r.theorem = theorem;
  r.n = ctx.n();
  r.p = ctx.p();
  r.q = ctx.q();
  r.x = x;
  r.function = f.name;
  return r;
}

inline double actual_error(const OperatorContext& ctx, const TestFunction& f,
                           double x, bool& converged) {
  const SeriesResult k = kantorovich_apply(ctx, f, x);
  converged = k.converged;
  return std::abs(k.value - f(x));
}
}  // namespace detail

/// |K_n(f; x) - f(x)| <= 4 M_f (1 + a^2) delta_n(x)^2 + 2 omega_{a+1}(f, delta_n(x))
/// for f in C_2[0,inf) and x in [0, a].
inline BoundReport theorem5_bound(const OperatorContext& ctx, const TestFunction& f,
                                  double x, double a, GridSpec grid = {}) {
  if (!(x >= 0.0 && x <= a)) {
    throw std::domain_error("theorem5_bound: x must lie in [0, a]");
  }
  const double mf = c2_growth_constant(f);
  BoundReport r = detail::base_report("thm5", ctx, f, x);
  r.growth_constant = mf;
  r.a = a;
  r.actual_error = detail::actual_error(ctx, f, x, r.operator_converged);

  const double delta = delta_theorem5(ctx, x);
  const double moment_term = 4.0 * mf * (1.0 + a * a) * delta * delta;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double omega = delta > 0.0 ? modulus_local(f, delta, a, grid) : 0.0;
    r.bound_value = moment_term + 2.0 * omega;
    r.slack = r.bound_value - r.actual_error;
    r.refinements = attempt;
    if (r.slack >= -kBoundTolerance) break;
    grid = grid.refined();
  }
  r.violation = r.slack < -kBoundTolerance;
  return r;
}

/// |K_n(f; x) - f(x)| <= M omega_2(f, sqrt(delta_n(x))) +
///                       omega(f, 1/([2][n]) + ((1-q)/q) x)
/// for bounded f. The first-order modulus is taken over [0, x_max].
inline BoundReport theorem6_bound(const OperatorContext& ctx, const TestFunction& f,
                                  double x, double M = 4.0, GridSpec grid = {}) {
  if (!f.bounded) {
    throw std::domain_error("theorem6_bound: '" + f.name +
                            "' is not in C_B[0,inf)");
  }
  BoundReport r = detail::base_report("thm6", ctx, f, x);
  r.M = M;
  r.actual_error = detail::actual_error(ctx, f, x, r.operator_converged);
  const double delta = delta_theorem6(ctx, x);
  const double shift = central_moment(ctx, 1, x);
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double w2 = modulus2(f, std::sqrt(delta), grid);
    const double w1 = detail::first_order_modulus(f, shift, 0.0, grid.x_max, grid.step);
    r.bound_value = M * w2 + w1;
    r.slack = r.bound_value - r.actual_error;
    r.refinements = attempt;
    if (w2 > 0.0) {
      r.empirical_constant = std::max(0.0, (r.actual_error - w1) / w2);
    } else {
      r.empirical_constant = r.actual_error <= w1 + kBoundTolerance
                                 ? 0.0
                                 : std::numeric_limits<double>::infinity();
    }
    if (r.slack >= -kBoundTolerance) break;
    grid = grid.refined();
  }
  r.violation = r.slack < -kBoundTolerance;
  return r;
}

/// |K_n(f; x) - f(x)| <= K (1 + x^{2+lambda}) Omega_2(f, delta_n),
/// delta_n = max(alpha_n, beta_n, gamma_n).
inline BoundReport theorem10_bound(const OperatorContext& ctx, const TestFunction& f,
                                   double x, double lambda = 1.0, double K = 8.0,
                                   GridSpec grid = {}) {
  if (f.growth_order > 2.0) {
    throw std::domain_error("theorem10_bound: '" + f.name +
                            "' is outside C*_2[0,inf)");
  }
  if (!(lambda >= 1.0)) throw std::domain_error("theorem10_bound: lambda must be >= 1");
  BoundReport r = detail::base_report("thm10", ctx, f, x);
  r.K = K;
  r.lambda = lambda;
  r.actual_error = detail::actual_error(ctx, f, x, r.operator_converged);
  const double delta = theorem10_coefficients(ctx).delta();
  const double weight = 1.0 + std::pow(x, 2.0 + lambda);
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double omega = weighted_modulus(f, delta, grid);
    r.bound_value = K * weight * omega;
    r.slack = r.bound_value - r.actual_error;
    r.refinements = attempt;
    r.empirical_constant = omega > 0.0 ? r.actual_error / (weight * omega)
                                       : (r.actual_error <= kBoundTolerance
                                              ? 0.0
                                              : std::numeric_limits<double>::infinity());
    if (r.slack >= -kBoundTolerance) break;
    grid = grid.refined();
  }
  r.violation = r.slack < -kBoundTolerance;
  return r;
}

}  // namespace pqk
