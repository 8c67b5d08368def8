#pragma once

// Executable invariants. Each check returns a CheckResult with the measured
// worst gap; `verify_suite` runs them all and attaches the informational
// discrepancy report.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "pqk/bounds.hpp"
#include "pqk/harness.hpp"
#include "pqk/moments.hpp"
#include "pqk/operator.hpp"
#include "pqk/pq_core.hpp"
#include "pqk/registry.hpp"
#include "pqk/report.hpp"

namespace pqk {

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = true;
  double measured = 0.0;   // worst observed gap (or value) for this check
  double threshold = 0.0;  // limit the measured value was compared against
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::vector<std::pair<double, double>> standard_pq_pairs() {
  return {{1.0, 0.5}, {1.0, 0.9}, {0.9, 0.8}, {0.9, 0.5}, {0.99, 0.98}};
}

inline void note_worst(CheckResult& r, double gap, const std::string& where) {
  if (!(gap <= r.measured) || r.detail.empty()) {
    if (!(gap <= r.measured)) r.measured = gap;
    r.detail = "worst at " + where;
  }
}

inline std::string point_label(std::size_t n, double p, double q, double x) {
  return "n=" + std::to_string(n) + " p=" + format15(p) + " q=" + format15(q) +
         " x=" + format15(x);
}

inline std::string pq_label(double p, double q) {
  return "p=" + format15(p) + " q=" + format15(q);
}

inline void finish(CheckResult& r) {
  r.passed = r.passed && r.measured <= r.threshold;
}

}  // namespace detail

/// int_0^a t^m d_{p,q}t = a^{m+1}/[m+1] for m <= 6, a in {0.5, 1, 3}.
inline CheckResult check_quadrature_identity() {
  CheckResult r{"quadrature-identity",
                "(p,q)-integral of t^m over [0,a] equals a^(m+1)/[m+1]"};
  r.threshold = 1e-12;
  SeriesPolicy policy;
  policy.rel_tol = 1e-13;
  for (const auto& [p, q] : detail::standard_pq_pairs()) {
    const PQParams pq(p, q);
    for (std::size_t m = 0; m <= 6; ++m) {
      for (double a : {0.5, 1.0, 3.0}) {
        const auto f = [m](double t) { return std::pow(t, static_cast<double>(m)); };
        const SeriesResult s = pq_integral_zero(f, a, pq, policy);
        const double exact = std::pow(a, static_cast<double>(m + 1)) / pq_int(m + 1, pq);
        if (!s.converged) r.passed = false;
        detail::note_worst(r, relative_gap(s.value, exact),
                           detail::pq_label(p, q) + " m=" + std::to_string(m) +
                               " a=" + format15(a));
      }
    }
  }
  detail::finish(r);
  return r;
}

/// Basis weights are nonnegative and sum to 1.
inline CheckResult check_partition_of_unity(const std::vector<GridPoint>& grid) {
  CheckResult r{"partition-of-unity", "basis weights are nonnegative and sum to one"};
  r.threshold = 1e-12;
  for (const GridPoint& g : grid) {
    const OperatorContext ctx(g.n, PQParams(g.p, g.q));
    const SeriesResult mass = basis_mass(ctx, g.x);
    if (!mass.converged) r.passed = false;
    for (double w : basis_weights(ctx, g.x)) {
      if (!(w >= 0.0)) r.passed = false;
    }
    detail::note_worst(r, std::abs(mass.value - 1.0),
                       detail::point_label(g.n, g.p, g.q, g.x));
  }
  detail::finish(r);
  return r;
}

/// Closed form, recurrence and direct summation agree (orders <= 2 within
/// 1e-9, orders 3 and 4 within 1e-8).
inline CheckResult check_moment_triangle_grid(const std::vector<GridPoint>& grid) {
  CheckResult r{"moment-triangle",
                "moment closed forms, recurrence and direct sums agree"};
  r.threshold = 1e-9;
  double worst_high = 0.0;
  for (const GridPoint& g : grid) {
    const OperatorContext ctx(g.n, PQParams(g.p, g.q));
    const TriangleCheck t = check_moment_triangle(ctx, g.x);
    if (!t.passed) r.passed = false;
    worst_high = std::max(worst_high, t.max_gap_high_orders);
    detail::note_worst(r, t.max_gap_low_orders, detail::point_label(g.n, g.p, g.q, g.x));
  }
  r.detail += "; orders 3-4 worst gap " + format15(worst_high) + " (limit 1e-08)";
  detail::finish(r);
  return r;
}

/// Spot points used for the numeric-pipeline comparison.
inline std::vector<GridPoint> pipeline_spot_points() {
  return {{1, 1.0, 0.5, 0.25},  {2, 1.0, 0.9, 1.0},   {5, 0.9, 0.8, 1.0},
          {5, 0.9, 0.5, 2.5},   {20, 0.99, 0.98, 0.25}, {20, 1.0, 0.5, 10.0},
          {100, 0.9, 0.8, 1.0}, {2, 0.99, 0.98, 2.5}, {1, 0.9, 0.5, 0.0},
          {100, 1.0, 0.9, 0.25}};
}

/// Closed forms of K_n(1), K_n(t), K_n(t^2) and the second central moment
/// against series evaluation with numeric cell quadrature.
inline CheckResult check_numeric_pipeline() {
  CheckResult r{"numeric-pipeline",
                "moment closed forms match series with numeric cell quadrature"};
  r.threshold = 1e-8;
  for (const GridPoint& g : pipeline_spot_points()) {
    const OperatorContext ctx(g.n, PQParams(g.p, g.q));
    const std::string where = detail::point_label(g.n, g.p, g.q, g.x);
    auto numeric = [&](const TestFunction& f) {
      const SeriesResult s =
          kantorovich_apply(ctx, without_closed_form(f), g.x, CellQuadrature::numeric);
      if (!s.converged) r.passed = false;
      return s.value;
    };
    for (std::size_t m = 0; m <= 2; ++m) {
      const double ref = kantorovich_moment_closed(ctx, m, g.x);
      const double got = numeric(monomial(m));
      detail::note_worst(r, std::abs(got - ref) / std::max(1.0, std::abs(ref)),
                         where + " m=" + std::to_string(m));
    }
    const double c1 = central_moment(ctx, 1, g.x);
    detail::note_worst(r, std::abs(numeric(shifted_power(g.x, 1)) - c1) /
                              std::max(1.0, std::abs(c1)),
                       where + " first central");
    const double c2 = central_moment(ctx, 2, g.x);
    detail::note_worst(r, std::abs(numeric(shifted_power(g.x, 2)) - c2) /
                              std::max(1.0, std::abs(c2)),
                       where + " second central");
  }
  detail::finish(r);
  return r;
}

/// e_{p,q}(x) E_{p,q}(-x) = 1.
inline CheckResult check_exponential_identity() {
  CheckResult r{"exponential-identity", "e(x) E(-x) = 1"};
  r.threshold = 1e-10;
  for (const auto& [p, q] : detail::standard_pq_pairs()) {
    const PQParams pq(p, q);
    for (double x : {0.1, 0.25, 0.5}) {
      const SeriesResult e = e_pq(x, pq);
      const SeriesResult E = E_pq(-x, pq);
      if (!e.converged || !E.converged) r.passed = false;
      detail::note_worst(r, std::abs(e.value * E.value - 1.0),
                         detail::pq_label(p, q) + " x=" + format15(x));
    }
  }
  detail::finish(r);
  return r;
}

/// |K_n(t; x) - x| = ((1-q)/q) x + 1/([2][n]) and the first pointwise bound
/// (a = 2) dominates it, for x in [0, 2].
inline CheckResult check_linear_exact_error() {
  CheckResult r{"linear-exact-error",
                "error of K_n on t is ((1-q)/q)x + 1/([2][n]) and is dominated by "
                "the a=2 pointwise bound"};
  r.threshold = 1e-10;
  const TestFunction id = monomial(1);
  double worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t n : {1, 2, 5, 20, 100}) {
    for (const auto& [p, q] : detail::standard_pq_pairs()) {
      const OperatorContext ctx(n, PQParams(p, q));
      for (double x : uniform_points(0.0, 2.0, 0.25)) {
        const double expected = (1.0 - q) / q * x + 1.0 / (pq_int(2, ctx.params()) * ctx.pq_n());
        const BoundReport b = theorem5_bound(ctx, id, x, 2.0);
        if (!b.operator_converged) r.passed = false;
        worst_slack = std::min(worst_slack, b.slack);
        if (b.violation) r.passed = false;
        detail::note_worst(r, std::abs(b.actual_error - expected),
                           detail::point_label(n, p, q, x));
      }
    }
  }
  r.detail += "; minimum bound slack " + format15(worst_slack);
  detail::finish(r);
  return r;
}

/// The pointwise bound with a = 2 dominates |K_n f - f| for every registry
/// function of growth order <= 2 at grid points with x <= 2.
inline CheckResult check_theorem5_domination(const std::vector<GridPoint>& grid,
                                             std::vector<BoundReport>* reports = nullptr) {
  CheckResult r{"pointwise-bound-domination",
                "4 M_f (1+a^2) delta^2 + 2 omega bound dominates the error (a = 2)"};
  r.threshold = 0.0;  // measured = number of confirmed violations
  const double a = 2.0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string worst_where;
  std::size_t evaluated = 0;
  for (const TestFunction& f : default_registry()) {
    if (f.growth_order > 2.0) continue;
    for (const GridPoint& g : grid) {
      if (g.x > a) continue;
      const OperatorContext ctx(g.n, PQParams(g.p, g.q));
      const BoundReport b = theorem5_bound(ctx, f, g.x, a);
      ++evaluated;
      if (!b.operator_converged) r.passed = false;
      if (b.violation) r.measured += 1.0;
      if (b.slack < worst_slack) {
        worst_slack = b.slack;
        worst_where = f.name + " " + detail::point_label(g.n, g.p, g.q, g.x);
      }
      if (reports) reports->push_back(b);
    }
  }
  r.detail = std::to_string(evaluated) + " evaluations; minimum slack " +
             format15(worst_slack) + " at " + worst_where;
  detail::finish(r);
  return r;
}

/// Sweep along the a=2, b=1 sequence: the error for e^{-x} on [0,2]
/// decreases and ends <= 0.1; weighted errors for t^i end <= 0.05 and do not
/// increase; the alpha = 0.5 weighted error for t^2 decreases.
inline CheckResult check_convergence_sweep() {
  CheckResult r{"convergence-sweep",
                "errors decrease along the a=2, b=1 parameter sequence"};
  r.threshold = 0.0;  // measured = number of failed sub-conditions
  std::string notes;
  auto fail = [&](const std::string& what) {
    r.measured += 1.0;
    notes += (notes.empty() ? "" : "; ") + what;
  };

  ConvergeConfig cfg;
  cfg.with_bounds = false;
  cfg.weighted_grid.clear();
  const auto exp_rows = converge_run(require_function("exp_neg"), cfg);
  const double first = exp_rows.front().sup_error;
  const double last = exp_rows.back().sup_error;
  if (!(last < first)) fail("exp_neg sup error did not decrease");
  if (!(last <= 0.1)) fail("exp_neg final sup error " + format15(last) + " > 0.1");

  ConvergeConfig korovkin;
  korovkin.with_bounds = false;
  korovkin.alpha = 0.0;  // weight 1/(1+x^2)
  std::string finals;
  for (std::size_t i = 0; i <= 2; ++i) {
    const auto rows = converge_run(monomial(i), korovkin);
    for (std::size_t j = 1; j < rows.size(); ++j) {
      if (rows[j].weighted_sup_error > rows[j - 1].weighted_sup_error + 1e-12) {
        fail("weighted error for t^" + std::to_string(i) + " increased at n=" +
             std::to_string(rows[j].n));
      }
      if (!rows[j].converged) fail("non-convergence for t^" + std::to_string(i));
    }
    const double fin = rows.back().weighted_sup_error;
    finals += (finals.empty() ? "" : ",") + format15(fin);
    if (!(fin <= 0.05)) fail("final weighted error for t^" + std::to_string(i) + " > 0.05");
  }

  ConvergeConfig weighted;
  weighted.with_bounds = false;
  weighted.alpha = 0.5;
  const auto sq_rows = converge_run(monomial(2), weighted);
  for (std::size_t j = 1; j < sq_rows.size(); ++j) {
    if (!(sq_rows[j].weighted_sup_error < sq_rows[j - 1].weighted_sup_error)) {
      fail("alpha=0.5 weighted error for t^2 did not decrease at n=" +
           std::to_string(sq_rows[j].n));
    }
  }
  r.detail = "exp_neg sup error " + format15(first) + " -> " + format15(last) +
             "; final weighted errors (t^0,t^1,t^2) " + finals +
             (notes.empty() ? "" : "; " + notes);
  detail::finish(r);
  return r;
}

/// p = 1, q = 0.9999, n = 1000: K_n(t) and K_n(t^2) are close to the
/// classical Szasz-Kantorovich moments x + 1/(2n) and x^2 + 2x/n + 1/(3n^2).
inline CheckResult check_classical_limit() {
  CheckResult r{"classical-limit",
                "moments at q close to 1 approach the classical Szasz-Kantorovich moments"};
  r.threshold = 1e-3;
  const std::size_t n = 1000;
  const double nn = static_cast<double>(n);
  const OperatorContext ctx(n, PQParams(1.0, 0.9999));
  for (double x : {0.0, 0.25, 1.0, 2.5, 10.0}) {
    const SeriesResult k1 = moment_direct(ctx, OperatorKind::kantorovich, 1, x);
    const SeriesResult k2 = moment_direct(ctx, OperatorKind::kantorovich, 2, x);
    if (!k1.converged || !k2.converged) r.passed = false;
    const double c1 = x + 1.0 / (2.0 * nn);
    const double c2 = x * x + 2.0 * x / nn + 1.0 / (3.0 * nn * nn);
    detail::note_worst(r, std::abs(k1.value - c1) / std::max(1.0, std::abs(c1)),
                       "m=1 x=" + format15(x));
    detail::note_worst(r, std::abs(k2.value - c2) / std::max(1.0, std::abs(c2)),
                       "m=2 x=" + format15(x));
  }
  detail::finish(r);
  return r;
}

/// K*_n((t - x); x) = 0.
inline CheckResult check_auxiliary_operator() {
  CheckResult r{"auxiliary-operator", "auxiliary operator annihilates t - x"};
  r.threshold = 1e-10;
  const std::vector<GridPoint> points = {{1, 1.0, 0.5, 0.25}, {5, 0.9, 0.8, 1.0},
                                         {20, 0.99, 0.98, 2.5}, {100, 1.0, 0.9, 0.5},
                                         {2, 0.9, 0.5, 10.0}};
  for (const GridPoint& g : points) {
    const OperatorContext ctx(g.n, PQParams(g.p, g.q));
    const TestFunction f = without_closed_form(shifted_power(g.x, 1));
    const SeriesResult s = auxiliary_apply(ctx, f, g.x, CellQuadrature::numeric);
    if (!s.converged) r.passed = false;
    detail::note_worst(r, std::abs(s.value), detail::point_label(g.n, g.p, g.q, g.x));
  }
  detail::finish(r);
  return r;
}

/// The discrepancy report has no entries for the formulas that are exact.
inline CheckResult check_discrepancy_sections(const DiscrepancyReport& report) {
  CheckResult r{"discrepancy-exact-sections",
                "exact moment formulas have no discrepancy entries"};
  r.threshold = 0.0;
  const char* exact[] = {"szasz.m0",  "szasz.m1",  "szasz.m2",          "kantorovich.m0",
                         "kantorovich.m1", "kantorovich.m2", "kantorovich.central1", "kantorovich.central2"};
  for (const char* id : exact) r.measured += static_cast<double>(report.count(id));
  std::string informational;
  for (const auto& id : report.formulas) {
    const std::size_t c = report.count(id);
    if (c > 0) informational += (informational.empty() ? "" : ", ") + id + ":" + std::to_string(c);
  }
  r.detail = std::to_string(report.points_checked) + " points; entries " +
             (informational.empty() ? "none" : informational);
  detail::finish(r);
  return r;
}

/// Two sweeps with the same configuration serialise to identical bytes.
inline CheckResult check_determinism() {
  CheckResult r{"determinism", "repeated sweeps produce byte-identical CSV"};
  r.threshold = 0.0;
  ConvergeConfig cfg;
  cfg.n_list = {16, 64};
  cfg.weighted_grid = uniform_points(0.0, 10.0, 0.5);
  const TestFunction f = require_function("exp_neg");
  const std::string a = to_csv(converge_run(f, cfg));
  const std::string b = to_csv(converge_run(f, cfg));
  r.measured = a == b ? 0.0 : 1.0;
  r.detail = std::to_string(a.size()) + " bytes";
  detail::finish(r);
  return r;
}

/// Every registry function satisfies its declared growth bound.
inline CheckResult check_registry_contract() {
  CheckResult r{"registry-growth", "registry functions satisfy |f| <= M_f (1 + x^m)"};
  r.threshold = 1.0;
  for (const auto& f : default_registry()) {
    const GrowthCheck g = check_growth_contract(f);
    if (!g.holds) r.passed = false;
    detail::note_worst(r, g.worst_ratio, f.name + " x=" + format15(g.worst_x));
  }
  detail::finish(r);
  return r;
}

/// p_n^n -> e^{-b}, q_n^n -> e^{-a} at n = 10^4.
inline CheckResult check_sequence_limits() {
  CheckResult r{"sequence-limits", "p_n^n and q_n^n approach e^-b and e^-a at n = 10^4"};
  r.threshold = 1e-3;
  const std::size_t n = 10000;
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{{2, 1}, {1, 0.5}, {5, 0.1}}) {
    const PQParams pq = param_sequence(a, b, n);
    const double nn = static_cast<double>(n);
    detail::note_worst(r, std::abs(std::pow(pq.p(), nn) - std::exp(-b)),
                       "a=" + format15(a) + " b=" + format15(b) + " (p)");
    detail::note_worst(r, std::abs(std::pow(pq.q(), nn) - std::exp(-a)),
                       "a=" + format15(a) + " b=" + format15(b) + " (q)");
  }
  detail::finish(r);
  return r;
}

/// Grid properties of the moduli: monotonicity in delta, vanishing second
/// differences of affine functions, and the weighted-modulus scaling and
/// small-delta behaviour.
inline CheckResult check_modulus_properties() {
  CheckResult r{"modulus-properties",
                "moduli are monotone in delta, second differences of affine "
                "functions vanish, weighted modulus scales and vanishes"};
  r.threshold = 0.0;  // measured = number of failed sub-conditions
  std::string notes;
  auto fail = [&](const std::string& what) {
    r.measured += 1.0;
    notes += (notes.empty() ? "" : "; ") + what;
  };
  const GridSpec grid{10.0, 1e-3, 1e-3};
  const std::vector<double> deltas = {0.01, 0.05, 0.1, 0.25, 0.5};
  for (const auto& f : default_registry()) {
    double prev = 0.0;
    for (double d : deltas) {
      const double w = modulus_local(f, d, 2.0, grid);
      if (w < prev) fail("omega not monotone for " + f.name);
      prev = w;
    }
    if (f.bounded) {
      prev = 0.0;
      for (double d : deltas) {
        const double w = modulus2(f, d, grid);
        if (w < prev) fail("omega_2 not monotone for " + f.name);
        prev = w;
      }
    }
    if (f.growth_order <= 2.0) {
      prev = 0.0;
      for (double d : deltas) {
        const double w = weighted_modulus(f, d, grid);
        if (w < prev) fail("Omega_2 not monotone for " + f.name);
        prev = w;
      }
      for (double d : {0.05, 0.2}) {
        const double base = weighted_modulus(f, d, grid);
        for (double lambda : {2.0, 3.5}) {
          const double scaled = weighted_modulus(f, lambda * d, grid);
          if (scaled > (1.0 + lambda) * base + 1e-3 * scaled + 1e-12) {
            fail("Omega_2 scaling fails for " + f.name + " lambda=" + format15(lambda));
          }
        }
      }
      prev = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= 5; ++k) {
        const double w = weighted_modulus(f, std::pow(10.0, -k), grid);
        if (w > prev) fail("Omega_2 not decreasing as delta -> 0 for " + f.name);
        prev = w;
      }
      if (prev > 1e-2) fail("Omega_2(1e-5) not small for " + f.name);
    }
  }
  // Dyadic grid so that second differences of 2x + 1 are computed exactly.
  TestFunction affine = polynomial_function("affine", {1.0, 2.0});
  affine.bounded = true;
  const GridSpec dyadic{8.0, 1.0 / 1024, 1.0 / 1024};
  const double w2 = modulus2(affine, 0.125, dyadic);
  if (w2 != 0.0) fail("omega_2 of affine function is " + format15(w2));
  r.detail = notes.empty() ? "all sub-conditions hold" : notes;
  detail::finish(r);
  return r;
}

/// Second- and weighted-modulus bounds at their reference points.
inline CheckResult check_other_bounds(std::vector<BoundReport>* reports = nullptr) {
  CheckResult r{"modulus-bounds",
                "second-order (M=4) and weighted (K=8, lambda=1) bounds dominate "
                "the error for e^-x"};
  r.threshold = 0.0;
  const TestFunction f = require_function("exp_neg");
  const BoundReport b6 = theorem6_bound(OperatorContext(100, PQParams(0.999, 0.998)), f, 1.0);
  const BoundReport b10 =
      theorem10_bound(OperatorContext(200, param_sequence(2.0, 1.0, 200)), f, 1.0);
  r.measured = (b6.violation ? 1.0 : 0.0) + (b10.violation ? 1.0 : 0.0);
  r.detail = "second-order slack " + format15(b6.slack) + " (empirical M " +
             format15(b6.empirical_constant.value_or(0)) + "); weighted slack " +
             format15(b10.slack) + " (empirical K " +
             format15(b10.empirical_constant.value_or(0)) + ")";
  if (reports) {
    reports->push_back(b6);
    reports->push_back(b10);
  }
  detail::finish(r);
  return r;
}

enum class VerifyLevel { fast, full };

struct VerifyReport {
  VerifyLevel level = VerifyLevel::fast;
  std::vector<CheckResult> checks;
  DiscrepancyReport discrepancy;
  std::vector<BoundReport> bounds;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  }
};

/// Fast level uses the subset of the standard grid with n in {1, 5, 100} for
/// the heavier per-point checks; full uses every point.
inline VerifyReport verify_suite(VerifyLevel level = VerifyLevel::fast) {
  VerifyReport out;
  out.level = level;
  const std::vector<GridPoint> full = standard_grid();
  std::vector<GridPoint> grid;
  for (const GridPoint& g : full) {
    if (level == VerifyLevel::full || g.n == 1 || g.n == 5 || g.n == 100) grid.push_back(g);
  }

  auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult c = fn();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.checks.push_back(std::move(c));
  };
  timed([] { return check_quadrature_identity(); });
  timed([&] { return check_partition_of_unity(full); });
  timed([&] { return check_moment_triangle_grid(full); });
  timed([] { return check_numeric_pipeline(); });
  timed([] { return check_exponential_identity(); });
  timed([] { return check_linear_exact_error(); });
  timed([&] { return check_theorem5_domination(grid, &out.bounds); });
  timed([] { return check_convergence_sweep(); });
  timed([] { return check_classical_limit(); });
  timed([] { return check_auxiliary_operator(); });
  timed([&] {
    out.discrepancy = discrepancy_report(full);
    return check_discrepancy_sections(out.discrepancy);
  });
  timed([] { return check_determinism(); });
  timed([] { return check_registry_contract(); });
  timed([] { return check_sequence_limits(); });
  timed([] { return check_modulus_properties(); });
  timed([&] { return check_other_bounds(&out.bounds); });
  return out;
}

inline nlohmann::json to_json(const CheckResult& c) {
  return nlohmann::json{{"id", c.id},
                        {"description", c.description},
                        {"passed", c.passed},
                        {"measured", detail::json_number(c.measured)},
                        {"threshold", detail::json_number(c.threshold)},
                        {"detail", c.detail}};
}

/// Timings are left out so that the report is reproducible.
inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  std::size_t violations = 0;
  for (const auto& b : r.bounds) violations += b.violation ? 1 : 0;
  return nlohmann::json{{"level", r.level == VerifyLevel::fast ? "fast" : "full"},
                        {"passed", r.passed()},
                        {"checks", checks},
                        {"bound_reports", r.bounds.size()},
                        {"bound_violations", violations},
                        {"discrepancy", to_json(r.discrepancy)}};
}

inline std::string to_csv(const VerifyReport& r) {
  std::string out = "id,passed,measured,threshold\n";
  for (const auto& c : r.checks) {
    out += c.id + ',' + (c.passed ? "true" : "false") + ',' + format15(c.measured) + ',' +
           format15(c.threshold) + '\n';
  }
  return out;
}

}  // namespace pqk
