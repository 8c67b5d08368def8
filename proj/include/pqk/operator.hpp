#pragma once

// Szasz-Mirakjan basis, cell geometry, and the three operators:
//
//   S_n(f; x)  = sum_k s_k(x) f(a_k)
//   K_n(f; x)  = [n] sum_k p^{-k} q^k s_k(x) int_{a_k}^{b_k} f(t) d_{p,q}t
//   K*_n(f; x) = K_n(f; x) - f(x/q + 1/([2][n])) + f(x)
//
// with s_k(x) = q^{k(k-1)/2} ([n]x)^k / ([k]! E_{p,q}([n]x)),
// a_k = [k]/(q^{k-1}[n]) and b_k = [k+1]/(q^k[n]) = a_{k+1}.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pqk/pq_core.hpp"
#include "pqk/summation.hpp"
#include "pqk/test_function.hpp"

namespace pqk {

class OperatorContext {
 public:
  OperatorContext(std::size_t n, PQParams params, SeriesPolicy policy = {})
      : n_(n), params_(params), policy_(policy) {
    if (n == 0) {
      throw std::invalid_argument("operator order n must be positive");
    }
    policy_.validate();
    pq_n_ = pq_int(n, params_);
    log_pq_n_ = std::log(pq_n_);
  }

  std::size_t n() const { return n_; }
  const PQParams& params() const { return params_; }
  const SeriesPolicy& policy() const { return policy_; }
  double p() const { return params_.p(); }
  double q() const { return params_.q(); }
  /// [n]_{p,q}
  double pq_n() const { return pq_n_; }
  double log_pq_n() const { return log_pq_n_; }

 private:
  std::size_t n_;
  PQParams params_;
  SeriesPolicy policy_;
  double pq_n_ = 0.0;
  double log_pq_n_ = 0.0;
};

struct CellGeometry {
  std::size_t k = 0;
  double node = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double width = 0.0;
};

/// a_k = [k] / (q^{k-1} [n]).
inline double node_position(const OperatorContext& ctx, std::size_t k) {
  if (k == 0) return 0.0;
  const double qpow = std::pow(ctx.q(), static_cast<double>(k - 1));
  if (qpow > 0.0) return pq_int(k, ctx.params()) / qpow / ctx.pq_n();
  return std::exp(log_pq_int(k, ctx.params()) -
                  static_cast<double>(k - 1) * std::log(ctx.q()) -
                  ctx.log_pq_n());
}

inline CellGeometry cell_geometry(const OperatorContext& ctx, std::size_t k) {
  CellGeometry c;
  c.k = k;
  c.node = node_position(ctx, k);
  c.lower = c.node;
  c.upper = node_position(ctx, k + 1);
  // p^k / (q^k [n]), evaluated directly rather than as upper - lower.
  c.width = std::exp(-static_cast<double>(k) * ctx.params().log_ratio()) /
            ctx.pq_n();
  return c;
}

/// [n] p^{-k} q^k, the Kantorovich weight that cancels the cell width.
inline double kantorovich_cell_weight(const OperatorContext& ctx,
                                      std::size_t k) {
  return ctx.pq_n() * std::pow(ctx.p(), -static_cast<double>(k)) *
         std::pow(ctx.q(), static_cast<double>(k));
}

namespace detail {

/// log E_{p,q}(y) resolved well below double precision, used to normalise
/// the basis.
inline SeriesResult log_basis_normaliser(const OperatorContext& ctx, double y) {
  SeriesPolicy tight;
  tight.rel_tol = 1e-18;
  tight.max_terms = ctx.policy().max_terms;
  return log_E_pq(y, ctx.params(), tight);
}

inline double require_log_normaliser(const OperatorContext& ctx, double y) {
  const SeriesResult r = log_basis_normaliser(ctx, y);
  if (!r.converged) {
    throw std::runtime_error("basis normalisation series did not converge");
  }
  return r.value;
}

/// sum_k s_k(x) v_k with v_k = value_at(k) (a SeriesResult carrying its own
/// inner tail). Stops once the weights are past their peak, the cumulative
/// basis mass is within tolerance of one, three consecutive contributions are
/// negligible, and the geometric tail bound is below tolerance. The weight
/// ratios are decreasing in k, and |v_k| is assumed to grow no faster than
/// its most recent observed rate.
template <class ValueAt>
SeriesResult basis_sum(const OperatorContext& ctx, double x,
                       ValueAt&& value_at) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::domain_error("operators are defined for x >= 0");
  }
  const SeriesPolicy& policy = ctx.policy();
  if (x == 0.0) {
    const SeriesResult v = value_at(std::size_t{0});
    return SeriesResult{v.value, 1, v.tail_estimate, v.converged};
  }

  const double y = ctx.pq_n() * x;
  const SeriesResult norm = log_basis_normaliser(ctx, y);
  if (!norm.converged) {
    return SeriesResult{std::numeric_limits<double>::quiet_NaN(), 0,
                        std::numeric_limits<double>::infinity(), false};
  }
  const double log_norm = norm.value;
  const double mass_slack = std::max(policy.rel_tol, 1e-13);

  TriangularLogTerms gen(std::log(y), ctx.params());
  NeumaierSum sum;
  NeumaierSum mass;
  double abs_sum = 0.0;
  double inner_tail = 0.0;
  bool inner_converged = true;
  double v1 = 0.0, v2 = 0.0;  // two previous |v|
  bool have_prev = false;
  std::size_t negligible = 0;
  double tail = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < policy.max_terms; ++k, gen.advance()) {
    const double log_ratio = gen.log_ratio_next();
    const bool past_peak = log_ratio < 0.0;
    const double w = std::exp(gen.log_term() - log_norm);
    if (w == 0.0) {
      if (past_peak && mass.value() > 0.5) {
        return SeriesResult{sum.value(), k, inner_tail, inner_converged};
      }
      continue;
    }

    const SeriesResult v = value_at(k);
    const double contribution = w * v.value;
    sum.add(contribution);
    mass.add(w);
    abs_sum += std::abs(contribution);
    inner_tail += w * v.tail_estimate;
    inner_converged = inner_converged && v.converged;

    const double av = std::abs(v.value);
    double growth = 1.0;
    if (have_prev && v1 > 0.0) growth = std::max(1.0, av / v1);
    const double local_bound = std::max({av, v1, v2});
    v2 = v1;
    v1 = av;
    have_prev = true;

    const double tol = policy.tolerance(abs_sum);
    negligible = std::abs(contribution) <= tol ? negligible + 1 : 0;

    const double rho = std::exp(log_ratio) * growth;
    if (past_peak && rho < 1.0) {
      tail = w * local_bound * rho / (1.0 - rho);
      if (negligible >= 3 && 1.0 - mass.value() <= mass_slack &&
          tail + inner_tail <= tol) {
        return SeriesResult{sum.value(), k + 1, tail + inner_tail,
                            inner_converged};
      }
    }
  }
  return SeriesResult{sum.value(), policy.max_terms, tail + inner_tail, false};
}

}  // namespace detail

/// s_k(x), normalised so that the weights sum to one.
inline double basis_weight(const OperatorContext& ctx, std::size_t k,
                           double x) {
  if (!(x >= 0.0)) throw std::domain_error("basis_weight: x must be >= 0");
  if (x == 0.0) return k == 0 ? 1.0 : 0.0;
  const double y = ctx.pq_n() * x;
  const double kk = static_cast<double>(k);
  const double log_term = kk * (kk - 1.0) / 2.0 * std::log(ctx.q()) +
                          kk * std::log(y) -
                          log_pq_factorial(k, ctx.params());
  return std::exp(log_term - detail::require_log_normaliser(ctx, y));
}

/// Sum of the basis weights as evaluated by the operator kernel.
inline SeriesResult basis_mass(const OperatorContext& ctx, double x) {
  return detail::basis_sum(ctx, x, [](std::size_t) {
    return SeriesResult{1.0, 1, 0.0, true};
  });
}

/// All basis weights up to the point where the remaining mass is negligible.
inline std::vector<double> basis_weights(const OperatorContext& ctx,
                                         double x) {
  if (!(x >= 0.0)) throw std::domain_error("basis_weights: x must be >= 0");
  if (x == 0.0) return {1.0};
  const std::size_t count = basis_mass(ctx, x).terms_used;
  const double y = ctx.pq_n() * x;
  const double log_norm = detail::require_log_normaliser(ctx, y);
  detail::TriangularLogTerms gen(std::log(y), ctx.params());
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k, gen.advance()) {
    out.push_back(std::exp(gen.log_term() - log_norm));
  }
  return out;
}

/// S_n(f; x).
template <class F>
SeriesResult szasz_apply(const OperatorContext& ctx, const F& f, double x) {
  return detail::basis_sum(ctx, x, [&](std::size_t k) {
    return SeriesResult{f(node_position(ctx, k)), 1, 0.0, true};
  });
}

/// (b_k^{m+1} - a_k^{m+1}) / [m+1] divided by the cell width, i.e.
/// sum_{j=0}^{m} b_k^j a_k^{m-j} / [m+1].
inline double cell_mean_monomial(const OperatorContext& ctx, std::size_t m,
                                 std::size_t k) {
  const CellGeometry c = cell_geometry(ctx, k);
  double acc = 0.0;
  double bj = 1.0;
  for (std::size_t j = 0; j <= m; ++j) {
    acc += bj * std::pow(c.lower, static_cast<double>(m - j));
    bj *= c.upper;
  }
  return acc / pq_int(m + 1, ctx.params());
}

/// Closed-form (p,q)-integral of t^m over cell k, written in the factored
/// form width * sum_j b^j a^{m-j} / [m+1] so that it is cancellation free.
inline double cell_integral_monomial(const OperatorContext& ctx, std::size_t m,
                                     std::size_t k) {
  return cell_geometry(ctx, k).width * cell_mean_monomial(ctx, m, k);
}

/// Numeric (p,q)-integral of f over cell k.
template <class F>
SeriesResult cell_integral(const OperatorContext& ctx, const F& f,
                           std::size_t k) {
  const CellGeometry c = cell_geometry(ctx, k);
  return pq_integral(f, c.lower, c.upper, ctx.params(), ctx.policy());
}

enum class CellQuadrature {
  automatic,  // closed form for polynomials, numeric series otherwise
  numeric,    // always the numeric (p,q)-series
};

/// Evaluates K_n(f; x) for many x with one operator context and one f.
/// Half-line integrals int_0^{a_k} f are cached per node and shared between
/// neighbouring cells and between evaluation points. Not thread safe; use one
/// instance per thread.
class KantorovichEvaluator {
 public:
  KantorovichEvaluator(OperatorContext ctx, TestFunction f,
                       CellQuadrature quadrature = CellQuadrature::automatic)
      : ctx_(std::move(ctx)),
        f_(std::move(f)),
        numeric_(quadrature == CellQuadrature::numeric || !f_.is_polynomial()) {
    inner_policy_ = ctx_.policy();
    inner_policy_.rel_tol = std::max(ctx_.policy().rel_tol * 1e-2, 1e-16);
  }

  const OperatorContext& context() const { return ctx_; }
  const TestFunction& function() const { return f_; }

  SeriesResult operator()(double x) {
    return detail::basis_sum(ctx_, x, [&](std::size_t k) { return cell_mean(k); });
  }

  /// [n] p^{-k} q^k times the (p,q)-integral over cell k.
  SeriesResult cell_mean(std::size_t k) {
    if (!numeric_) {
      double acc = 0.0;
      for (std::size_t m = 0; m < f_.polynomial.size(); ++m) {
        if (f_.polynomial[m] != 0.0) {
          acc += f_.polynomial[m] * cell_mean_monomial(ctx_, m, k);
        }
      }
      return SeriesResult{acc, 1, 0.0, true};
    }
    const SeriesResult& lo = half_line(k);
    const SeriesResult& hi = half_line(k + 1);
    const double weight = kantorovich_cell_weight(ctx_, k);
    return SeriesResult{weight * (hi.value - lo.value),
                        hi.terms_used + lo.terms_used,
                        weight * (hi.tail_estimate + lo.tail_estimate),
                        hi.converged && lo.converged};
  }

 private:
  const SeriesResult& half_line(std::size_t k) {
    if (half_line_.size() <= k) half_line_.resize(k + 1);
    if (!half_line_[k]) {
      half_line_[k] = pq_integral_zero(f_, node_position(ctx_, k),
                                       ctx_.params(), inner_policy_);
    }
    return *half_line_[k];
  }

  OperatorContext ctx_;
  TestFunction f_;
  bool numeric_;
  SeriesPolicy inner_policy_;
  std::vector<std::optional<SeriesResult>> half_line_;
};

/// K_n(f; x).
inline SeriesResult kantorovich_apply(
    const OperatorContext& ctx, const TestFunction& f, double x,
    CellQuadrature quadrature = CellQuadrature::automatic) {
  KantorovichEvaluator eval(ctx, f, quadrature);
  return eval(x);
}

/// x/q + 1/([2][n]), the point K_n maps the identity to.
inline double kantorovich_shift(const OperatorContext& ctx, double x) {
  return x / ctx.q() + 1.0 / (pq_int(2, ctx.params()) * ctx.pq_n());
}

/// K*_n(f; x) = K_n(f; x) - f(x/q + 1/([2][n])) + f(x). Reproduces affine f.
inline SeriesResult auxiliary_apply(
    const OperatorContext& ctx, const TestFunction& f, double x,
    CellQuadrature quadrature = CellQuadrature::automatic) {
  SeriesResult r = kantorovich_apply(ctx, f, x, quadrature);
  r.value = r.value - f(kantorovich_shift(ctx, x)) + f(x);
  return r;
}

}  // namespace pqk
