#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqk/test_function.hpp"

namespace pqk {

namespace detail {
inline TestFunction bounded_function(std::string name, std::function<double(double)> fn,
                                     double sup) {
  TestFunction f;
  f.name = std::move(name);
  f.evaluator = std::move(fn);
  f.growth_order = 0.0;
  f.growth_constant = sup;
  f.bounded = true;
  f.sup_bound = sup;
  return f;
}
}  // namespace detail

/// Named test functions used by the CLI, the verification suite and the
/// sweeps. Growth data is declared here and checked by
/// `check_growth_contract`.
inline std::vector<TestFunction> default_registry() {
  std::vector<TestFunction> r;
  r.push_back(polynomial_function("one", {1.0}));
  r.push_back(polynomial_function("id", {0.0, 1.0}));
  r.push_back(polynomial_function("sq", {0.0, 0.0, 1.0}));
  r.push_back(polynomial_function("cube", {0.0, 0.0, 0.0, 1.0}));
  r.push_back(detail::bounded_function("exp_neg", [](double x) { return std::exp(-x); }, 1.0));
  r.push_back(detail::bounded_function("sin_clamp", [](double x) { return std::sin(x); }, 1.0));
  // |x - 1| capped at 1 so that it stays bounded; Lipschitz with constant 1.
  r.push_back(detail::bounded_function(
      "abs_shift", [](double x) { return std::min(std::abs(x - 1.0), 1.0); }, 1.0));
  r.push_back(detail::bounded_function(
      "runge", [](double x) { return 1.0 / (1.0 + x * x); }, 1.0));
  {
    TestFunction f;
    f.name = "sqrt";
    f.evaluator = [](double x) { return std::sqrt(x); };
    f.growth_order = 0.5;
    f.growth_constant = 1.0;
    r.push_back(std::move(f));
  }
  // x^2 up to x = 10, then constant: bounded, with second differences 2h^2
  // away from the kink.
  r.push_back(detail::bounded_function(
      "sq_clamp",
      [](double x) {
        const double c = std::min(x, 10.0);
        return c * c;
      },
      100.0));
  return r;
}

inline std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& f : default_registry()) names.push_back(f.name);
  return names;
}

inline std::optional<TestFunction> find_function(const std::string& name) {
  for (auto& f : default_registry()) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

inline TestFunction require_function(const std::string& name) {
  auto f = find_function(name);
  if (!f) {
    std::string known;
    for (const auto& n : registry_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown function '" + name + "' (known: " + known + ")");
  }
  return *f;
}

struct GrowthCheck {
  std::string name;
  bool holds = true;
  double worst_ratio = 0.0;  // max |f(x)| / (M_f (1 + x^m)) over the samples
  double worst_x = 0.0;
};

/// Samples |f(x)| <= M_f (1 + x^m) (and |f| <= sup_bound when bounded) on
/// [0, x_max] with the given step.
inline GrowthCheck check_growth_contract(const TestFunction& f, double x_max = 50.0,
                                         double step = 1e-2) {
  GrowthCheck c{f.name};
  const auto n = static_cast<std::size_t>(std::ceil(x_max / step));
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = x_max * static_cast<double>(i) / static_cast<double>(n);
    const double v = std::abs(f(x));
    const double ratio = v / (f.growth_constant * (1.0 + std::pow(x, f.growth_order)));
    if (ratio > c.worst_ratio) {
      c.worst_ratio = ratio;
      c.worst_x = x;
    }
    if (!std::isfinite(v) || ratio > 1.0 + 1e-12) c.holds = false;
    if (f.bounded && f.sup_bound && v > *f.sup_bound * (1.0 + 1e-12)) c.holds = false;
  }
  return c;
}

}  // namespace pqk
