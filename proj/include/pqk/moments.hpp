#pragma once

// Moments of S_n and K_n by three routes (closed forms, the recurrence that
// expresses K_n(t^m) through S_n moments, and direct summation), central
// moments, the derived quantities used by the error bounds, and a report of
// where the printed higher-order moment formulas disagree with direct sums.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "pqk/operator.hpp"
#include "pqk/pq_core.hpp"
#include "pqk/test_function.hpp"

namespace pqk {

enum class OperatorKind { szasz, kantorovich };

inline const char* to_string(OperatorKind kind) {
  return kind == OperatorKind::szasz ? "S" : "K";
}

/// |a - b| / max(|a|, |b|), zero when both vanish.
inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

namespace detail {
struct Brackets {
  double p, q, n, b2, b3, b4, b5;
};
inline Brackets brackets(const OperatorContext& ctx) {
  const PQParams& pq = ctx.params();
  return {ctx.p(),        ctx.q(),        ctx.pq_n(),     pq_int(2, pq),
          pq_int(3, pq),  pq_int(4, pq),  pq_int(5, pq)};
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Closed forms

/// S_n(t^m; x) for m <= 2: 1, x, (p/q) x^2 + x/[n].
inline double szasz_moment_closed(const OperatorContext& ctx, std::size_t m,
                                  double x) {
  switch (m) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return ctx.p() / ctx.q() * x * x + x / ctx.pq_n();
    default:
      throw std::domain_error(
          "szasz_moment_closed: only orders 0..2 have verified closed forms");
  }
}

/// K_n(t^m; x) for m <= 2.
inline double kantorovich_moment_closed(const OperatorContext& ctx,
                                        std::size_t m, double x) {
  const auto [p, q, n, b2, b3, b4, b5] = detail::brackets(ctx);
  switch (m) {
    case 0: return 1.0;
    case 1: return x / q + 1.0 / (b2 * n);
    case 2:
      return p / (q * q * q) * x * x +
             ((p + b2) / (q * b3 * n) + 1.0 / (q * q * n)) * x +
             1.0 / (b3 * n * n);
    default:
      throw std::domain_error(
          "kantorovich_moment_closed: only orders 0..2 have verified closed "
          "forms");
  }
}

// Printed higher-order forms. These are evaluated only for the discrepancy
// report and never feed another computation.

inline double szasz_moment_printed(const OperatorContext& ctx, std::size_t m,
                                   double x) {
  const auto [p, q, n, b2, b3, b4, b5] = detail::brackets(ctx);
  switch (m) {
    case 3:
      return std::pow(p / q, 3) * x * x * x +
             (p * p + 2 * p * q) / (q * n) * x * x + q * q / (n * n) * x;
    case 4:
      return std::pow(p / q, 6) * std::pow(x, 4) +
             std::pow(p, 3) * (p * p + 2 * q + 3 * q * q) / (std::pow(q, 4) * n) *
                 std::pow(x, 3) +
             p * (p * p + 3 * p * q + 3 * q * q) / (q * n) * x * x +
             std::pow(q, 3) / std::pow(n, 3) * x;
    default:
      throw std::domain_error("szasz_moment_printed: orders 3 and 4 only");
  }
}

inline double kantorovich_moment_printed(const OperatorContext& ctx,
                                         std::size_t m, double x) {
  const auto [p, q, n, b2, b3, b4, b5] = detail::brackets(ctx);
  const double c4 = 3 * p * p + 2 * p * q + q * q;
  const double c5 = 4 * p * p * p + 3 * p * p * q + 2 * p * q * q + q * q * q;
  switch (m) {
    case 3:
      return std::pow(p, 3) / std::pow(q, 6) * std::pow(x, 3) +
             ((p * p + 2 * p * q) / (std::pow(q, 4) * n) +
              p * c4 / (std::pow(q, 3) * b4 * n)) *
                 x * x +
             (1.0 / (q * n * n) + c4 / (q * q * b4 * n * n) +
              (3 * p + q) / (q * b4 * n * n)) *
                 x +
             1.0 / (b4 * std::pow(n, 3));
    case 4:
      return std::pow(p, 6) / std::pow(q, 10) * std::pow(x, 4) +
             (std::pow(p, 3) * (p * p + 2 * q + 3 * q * q) / (std::pow(q, 8) * n) +
              std::pow(p, 3) * c5 / (std::pow(q, 6) * b5 * n)) *
                 std::pow(x, 3) +
             (p * (p * p + 3 * p * q + 3 * q * q) / (std::pow(q, 5) * n * n) +
              (p * p + 2 * p * q) * c5 / (std::pow(q, 4) * b5 * n * n) +
              p * (6 * p * p + 3 * p * q + q * q) / (std::pow(q, 3) * b5 * n * n)) *
                 x * x +
             (1.0 / (q * std::pow(n, 3)) + c5 / (q * b5 * std::pow(n, 3)) +
              (6 * p * p + 3 * p * q + q * q) / (q * q * b5 * std::pow(n, 3)) +
              (4 * p + q) / (q * b5 * std::pow(n, 3))) *
                 x +
             1.0 / (b5 * std::pow(n, 4));
    default:
      throw std::domain_error("kantorovich_moment_printed: orders 3 and 4 only");
  }
}

/// Printed fourth central moment K_n((t-x)^4; x).
inline double fourth_central_moment_printed(const OperatorContext& ctx,
                                            double x) {
  const auto [p, q, n, b2, b3, b4, b5] = detail::brackets(ctx);
  const double c4 = 3 * p * p + 2 * p * q + q * q;
  const double c5 = 4 * p * p * p + 3 * p * p * q + 2 * p * q * q + q * q * q;
  const double x4 = std::pow(p, 6) / std::pow(q, 10) - 4 * std::pow(p, 3) / std::pow(q, 6) +
                    6 * p / std::pow(q, 3) - 4 / q + 1;
  const double x3 = std::pow(p, 3) * (p * p + 2 * q + 3 * q * q) / std::pow(q, 8) +
                    std::pow(p, 3) * c5 / (std::pow(q, 6) * b5) -
                    4 * (p * p + 2 * p * q) / std::pow(q, 4) -
                    4 * p * c4 / (std::pow(q, 3) * b4) + 6 * (2 * p + q) / (q * b3) +
                    6 / (q * q) - 4 / b2;
  const double x2 = p * (p * p + 3 * p * q + 3 * q * q) / std::pow(q, 5) +
                    (p * p + 2 * p * q) * c5 / (std::pow(q, 4) * b5) +
                    p * (6 * p * p + 3 * p * q + q * q) / (std::pow(q, 3) * b5) -
                    4 * c4 / (q * q) - 4 / q + 6 / b3;
  const double x1 = 1 / q + c5 / (q * b5) + (6 * p * p + 3 * p * q + q * q) / (q * q * b5) +
                    (4 * p + q) / (q * b5);
  return x4 * std::pow(x, 4) + x3 * std::pow(x, 3) / n + x2 * x * x / (n * n) +
         x1 * x / std::pow(n, 3);
}

// ---------------------------------------------------------------------------
// Direct summation and the recurrence

/// Brute-force moment: the operator applied to t^m by direct series
/// summation (closed-form cell integrals for K).
inline SeriesResult moment_direct(const OperatorContext& ctx,
                                  OperatorKind kind, std::size_t m, double x) {
  if (kind == OperatorKind::szasz) {
    const double dm = static_cast<double>(m);
    return szasz_apply(ctx, [dm](double t) { return std::pow(t, dm); }, x);
  }
  return kantorovich_apply(ctx, monomial(m), x);
}

/// K_n(t^m; x) = (1/[m+1]) sum_{j<=m} sum_{i<=j} p^i/(q^i [n]^{j-i}) C(j,i)
///               S_n(t^{m+i-j}; x),
/// with every S_n moment taken from direct summation.
inline double kantorovich_moment_recurrence(const OperatorContext& ctx,
                                            std::size_t m, double x) {
  std::vector<double> s(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    s[j] = moment_direct(ctx, OperatorKind::szasz, j, x).value;
  }
  const double ratio = ctx.p() / ctx.q();
  NeumaierSum acc;
  for (std::size_t j = 0; j <= m; ++j) {
    double binom = 1.0;
    for (std::size_t i = 0; i <= j; ++i) {
      acc.add(std::pow(ratio, static_cast<double>(i)) /
              std::pow(ctx.pq_n(), static_cast<double>(j - i)) * binom *
              s[m + i - j]);
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
  }
  return acc.value() / pq_int(m + 1, ctx.params());
}

// ---------------------------------------------------------------------------
// Central moments and derived quantities

struct Theorem10Coefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta() const { return std::max({alpha, beta, gamma}); }
};

/// Coefficients of K_n((t-x)^2; x) = alpha x^2 + beta x + gamma.
inline Theorem10Coefficients theorem10_coefficients(const OperatorContext& ctx) {
  const auto [p, q, n, b2, b3, b4, b5] = detail::brackets(ctx);
  Theorem10Coefficients c;
  c.alpha = p / (q * q * q) - 2.0 / q + 1.0;
  c.beta = (p + b2) / (q * b3 * n) + 1.0 / (q * q * n) - 2.0 / (b2 * n);
  c.gamma = 1.0 / (b3 * n * n);
  return c;
}

/// K_n((t-x)^order; x) for order 1 or 2, from the closed forms.
inline double central_moment(const OperatorContext& ctx, int order, double x) {
  if (order == 1) {
    return (1.0 - ctx.q()) / ctx.q() * x +
           1.0 / (pq_int(2, ctx.params()) * ctx.pq_n());
  }
  if (order == 2) {
    const Theorem10Coefficients c = theorem10_coefficients(ctx);
    return (c.alpha * x + c.beta) * x + c.gamma;
  }
  throw std::domain_error("central_moment: order must be 1 or 2");
}

/// sqrt(K_n((t-x)^2; x)).
inline double delta_theorem5(const OperatorContext& ctx, double x) {
  const double c = central_moment(ctx, 2, x);
  if (c < -1e-12) {
    throw std::logic_error("negative second central moment " + format15(c));
  }
  return std::sqrt(std::max(c, 0.0));
}

/// K_n((t-x)^2; x) + (1/([2][n]) + ((1-q)/q) x)^2.
inline double delta_theorem6(const OperatorContext& ctx, double x) {
  const double shift = central_moment(ctx, 1, x);
  return central_moment(ctx, 2, x) + shift * shift;
}

// ---------------------------------------------------------------------------
// Moment table

struct MomentRow {
  std::size_t order = 0;
  std::optional<double> value_closed;
  std::optional<double> value_recurrence;
  double value_direct = 0.0;
  bool direct_converged = true;
  std::optional<double> value_printed;
};

struct MomentTable {
  OperatorKind kind = OperatorKind::kantorovich;
  std::size_t n = 0;
  double p = 0.0;
  double q = 0.0;
  double x = 0.0;
  std::vector<MomentRow> rows;
};

inline MomentTable moment_table(const OperatorContext& ctx, OperatorKind kind,
                                double x) {
  MomentTable t{kind, ctx.n(), ctx.p(), ctx.q(), x, {}};
  for (std::size_t m = 0; m <= 4; ++m) {
    MomentRow row;
    row.order = m;
    const SeriesResult d = moment_direct(ctx, kind, m, x);
    row.value_direct = d.value;
    row.direct_converged = d.converged;
    if (kind == OperatorKind::szasz) {
      if (m <= 2) row.value_closed = szasz_moment_closed(ctx, m, x);
      else row.value_printed = szasz_moment_printed(ctx, m, x);
    } else {
      row.value_recurrence = kantorovich_moment_recurrence(ctx, m, x);
      if (m <= 2) row.value_closed = kantorovich_moment_closed(ctx, m, x);
      else row.value_printed = kantorovich_moment_printed(ctx, m, x);
    }
    t.rows.push_back(row);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Moment triangle: closed == recurrence == direct

using KantorovichClosedForm =
    std::function<double(const OperatorContext&, std::size_t, double)>;

struct TriangleCheck {
  double max_gap_low_orders = 0.0;   // m <= 2, all three routes and S closed
  double max_gap_high_orders = 0.0;  // m in {3, 4}, recurrence vs direct
  bool passed = true;
};

/// Cross-checks all routes at one point. `closed` is injectable so a
/// mutated closed form can be shown to fail the check.
inline TriangleCheck check_moment_triangle(
    const OperatorContext& ctx, double x,
    const KantorovichClosedForm& closed = kantorovich_moment_closed,
    double tol_low = 1e-9, double tol_high = 1e-8) {
  TriangleCheck out;
  for (std::size_t m = 0; m <= 4; ++m) {
    const SeriesResult kd = moment_direct(ctx, OperatorKind::kantorovich, m, x);
    const double kr = kantorovich_moment_recurrence(ctx, m, x);
    if (!kd.converged) out.passed = false;
    if (m <= 2) {
      const SeriesResult sd = moment_direct(ctx, OperatorKind::szasz, m, x);
      const double kc = closed(ctx, m, x);
      const double gap = std::max({relative_gap(kc, kr), relative_gap(kc, kd.value),
                                   relative_gap(kr, kd.value),
                                   relative_gap(szasz_moment_closed(ctx, m, x), sd.value)});
      out.max_gap_low_orders = std::max(out.max_gap_low_orders, gap);
      if (!sd.converged) out.passed = false;
    } else {
      out.max_gap_high_orders =
          std::max(out.max_gap_high_orders, relative_gap(kr, kd.value));
    }
  }
  out.passed = out.passed && out.max_gap_low_orders <= tol_low &&
               out.max_gap_high_orders <= tol_high;
  return out;
}

// ---------------------------------------------------------------------------
// Discrepancy report

struct GridPoint {
  std::size_t n = 1;
  double p = 1.0;
  double q = 0.5;
  double x = 0.0;
};

struct DiscrepancyEntry {
  std::string formula;
  GridPoint point;
  double printed = 0.0;
  double oracle = 0.0;
  double relative_gap = 0.0;
};

struct DiscrepancyReport {
  double threshold = 0.0;
  std::vector<std::string> formulas;
  std::size_t points_checked = 0;
  std::vector<DiscrepancyEntry> entries;

  std::size_t count(const std::string& formula) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(),
                      [&](const DiscrepancyEntry& e) { return e.formula == formula; }));
  }
};

/// Formula identifiers in report order.
inline const std::vector<std::string>& discrepancy_formulas() {
  static const std::vector<std::string> ids = {
      "szasz.m0",      "szasz.m1",      "szasz.m2",        "szasz.m3",
      "szasz.m4",      "kantorovich.m0",       "kantorovich.m1",         "kantorovich.m2",
      "kantorovich.m3", "kantorovich.m4", "kantorovich.central1", "kantorovich.central2",
      "kantorovich.central4"};
  return ids;
}

/// Evaluates every printed moment formula against direct summation at each
/// grid point and records those whose relative gap exceeds
/// 100 * policy.rel_tol. The oracle sums use a tighter tolerance than the
/// threshold so that agreement is not masked by truncation.
inline DiscrepancyReport discrepancy_report(const std::vector<GridPoint>& grid,
                                            const SeriesPolicy& policy = {}) {
  DiscrepancyReport report;
  report.threshold = 100.0 * policy.rel_tol;
  report.formulas = discrepancy_formulas();
  report.points_checked = grid.size();

  SeriesPolicy oracle_policy = policy;
  oracle_policy.rel_tol = std::max(policy.rel_tol * 1e-3, 1e-16);

  for (const GridPoint& g : grid) {
    const OperatorContext ctx(g.n, PQParams(g.p, g.q), oracle_policy);
    const double x = g.x;
    double s[5];
    double k[5];
    for (std::size_t m = 0; m <= 4; ++m) {
      s[m] = moment_direct(ctx, OperatorKind::szasz, m, x).value;
      k[m] = moment_direct(ctx, OperatorKind::kantorovich, m, x).value;
    }
    const double central2 = k[2] - 2 * x * k[1] + x * x;
    const double central4 = k[4] - 4 * x * k[3] + 6 * x * x * k[2] -
                            4 * x * x * x * k[1] + x * x * x * x;
    const std::vector<std::tuple<std::string, double, double>> rows = {
        {"szasz.m0", 1.0, s[0]},
        {"szasz.m1", x, s[1]},
        {"szasz.m2", szasz_moment_closed(ctx, 2, x), s[2]},
        {"szasz.m3", szasz_moment_printed(ctx, 3, x), s[3]},
        {"szasz.m4", szasz_moment_printed(ctx, 4, x), s[4]},
        {"kantorovich.m0", 1.0, k[0]},
        {"kantorovich.m1", kantorovich_moment_closed(ctx, 1, x), k[1]},
        {"kantorovich.m2", kantorovich_moment_closed(ctx, 2, x), k[2]},
        {"kantorovich.m3", kantorovich_moment_printed(ctx, 3, x), k[3]},
        {"kantorovich.m4", kantorovich_moment_printed(ctx, 4, x), k[4]},
        {"kantorovich.central1", central_moment(ctx, 1, x), k[1] - x},
        {"kantorovich.central2", central_moment(ctx, 2, x), central2},
        {"kantorovich.central4", fourth_central_moment_printed(ctx, x), central4},
    };
    for (const auto& [id, printed, oracle] : rows) {
      const double gap = relative_gap(printed, oracle);
      if (gap > report.threshold) {
        report.entries.push_back({id, g, printed, oracle, gap});
      }
    }
  }
  std::sort(report.entries.begin(), report.entries.end(),
            [](const DiscrepancyEntry& a, const DiscrepancyEntry& b) {
              return std::tie(a.formula, a.point.n, a.point.p, a.point.q, a.point.x) <
                     std::tie(b.formula, b.point.n, b.point.p, b.point.q, b.point.x);
            });
  return report;
}

/// n in {1,2,5,20,100}, (p,q) over five pairs, x in {0,0.25,1,2.5,10}.
inline std::vector<GridPoint> standard_grid() {
  const std::size_t ns[] = {1, 2, 5, 20, 100};
  const std::pair<double, double> pqs[] = {
      {1.0, 0.5}, {1.0, 0.9}, {0.9, 0.8}, {0.9, 0.5}, {0.99, 0.98}};
  const double xs[] = {0.0, 0.25, 1.0, 2.5, 10.0};
  std::vector<GridPoint> grid;
  for (std::size_t n : ns) {
    for (const auto& [p, q] : pqs) {
      for (double x : xs) grid.push_back({n, p, q, x});
    }
  }
  return grid;
}

}  // namespace pqk
