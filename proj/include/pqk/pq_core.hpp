#pragma once

// (p,q)-calculus primitives: integers, factorials, binomials, the two
// (p,q)-exponentials, the (p,q)-derivative and the Jackson-type (p,q)-integral.
//
// Throughout, r = q/p. Many quantities factor through the one-parameter
// q-calculus with base r, e.g. [n]_{p,q} = p^{n-1} [n]_r, which is how the
// integers are evaluated without cancellation when q is close to p.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "pqk/summation.hpp"

namespace pqk {

/// Validated deformation parameters, 0 < q < p <= 1.
class PQParams {
 public:
  PQParams(double p, double q) : p_(p), q_(q) {
    if (!(q > 0.0) || !(q < p) || !(p <= 1.0) || !std::isfinite(p) ||
        !std::isfinite(q)) {
      throw std::invalid_argument(
          "(p,q) parameters must satisfy 0 < q < p <= 1 (got p=" +
          format15(p) + ", q=" + format15(q) + ")");
    }
    log_ratio_ = std::log1p((q_ - p_) / p_);
  }

  double p() const { return p_; }
  double q() const { return q_; }
  /// q/p, always in (0, 1).
  double ratio() const { return q_ / p_; }
  /// log(q/p), accurate when q is close to p.
  double log_ratio() const { return log_ratio_; }

 private:
  double p_;
  double q_;
  double log_ratio_;
};

/// Truncation contract for every infinite sum in the library.
struct SeriesPolicy {
  double rel_tol = 1e-12;
  double abs_floor = 1e-300;
  std::size_t max_terms = 1'000'000;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
      throw std::invalid_argument("SeriesPolicy: rel_tol must lie in (0, 1)");
    }
    if (!(abs_floor >= 0.0)) {
      throw std::invalid_argument("SeriesPolicy: abs_floor must be >= 0");
    }
    if (max_terms == 0) {
      throw std::invalid_argument("SeriesPolicy: max_terms must be positive");
    }
  }

  /// Acceptance threshold for a tail against a running scale.
  double tolerance(double scale) const {
    return std::max(rel_tol * std::abs(scale), abs_floor);
  }
};

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = true;
};

// ---------------------------------------------------------------------------
// Integers, factorials, binomials

/// [n]_{p,q} = (p^n - q^n)/(p - q). Exactly 0 for n = 0 and 1 for n = 1.
inline double pq_int(std::size_t n, const PQParams& pq) {
  if (n == 0) return 0.0;
  if (n == 1) return 1.0;
  const double lr = pq.log_ratio();
  return std::pow(pq.p(), static_cast<double>(n - 1)) *
         (std::expm1(static_cast<double>(n) * lr) / std::expm1(lr));
}

/// log [n]_{p,q} for n >= 1.
inline double log_pq_int(std::size_t n, const PQParams& pq) {
  if (n == 1) return 0.0;
  const double lr = pq.log_ratio();
  return static_cast<double>(n - 1) * std::log(pq.p()) +
         std::log(std::expm1(static_cast<double>(n) * lr) / std::expm1(lr));
}

inline double pq_factorial(std::size_t n, const PQParams& pq) {
  double out = 1.0;
  for (std::size_t j = 2; j <= n; ++j) out *= pq_int(j, pq);
  return out;
}

inline double log_pq_factorial(std::size_t n, const PQParams& pq) {
  NeumaierSum s;
  for (std::size_t j = 2; j <= n; ++j) s.add(log_pq_int(j, pq));
  return s.value();
}

/// (p,q)-binomial coefficient, evaluated as prod_{j=1}^{k} [n-k+j]/[j] over
/// the smaller of k and n-k so that it is symmetric by construction.
inline double pq_binomial(std::size_t n, std::size_t k, const PQParams& pq) {
  if (k > n) {
    throw std::domain_error("pq_binomial: k must not exceed n");
  }
  const std::size_t kk = std::min(k, n - k);
  double out = 1.0;
  for (std::size_t j = 1; j <= kk; ++j) {
    out *= pq_int(n - kk + j, pq) / pq_int(j, pq);
  }
  return out;
}

/// (x - y)^n_{p,q} = prod_{j=0}^{n-1} (p^j x - q^j y).
inline double pq_power_product(double x, double y, std::size_t n,
                               const PQParams& pq) {
  double out = 1.0;
  double pj = 1.0;
  double qj = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    out *= pj * x - qj * y;
    pj *= pq.p();
    qj *= pq.q();
  }
  return out;
}

/// (ax + by)^n_{p,q} = sum_k p^{C(n-k,2)} q^{C(k,2)} [n k] (ax)^{n-k} (by)^k.
inline double pq_binomial_expansion(double a, double b, double x, double y,
                                    std::size_t n, const PQParams& pq) {
  auto choose2 = [](std::size_t m) {
    return static_cast<double>(m) * (static_cast<double>(m) - 1.0) / 2.0;
  };
  NeumaierSum s;
  for (std::size_t k = 0; k <= n; ++k) {
    s.add(std::pow(pq.p(), choose2(n - k)) * std::pow(pq.q(), choose2(k)) *
          pq_binomial(n, k, pq) *
          std::pow(a * x, static_cast<double>(n - k)) *
          std::pow(b * y, static_cast<double>(k)));
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Exponentials

namespace detail {

// Sum of w^{n(n-1)/2} x^n / [n]! in linear space. The term ratio
// w^n x / [n+1] is monotone decreasing in |.|, so once it drops below one the
// geometric bound |t| rho / (1 - rho) with rho the next ratio bounds the tail.
// Returns nullopt when a term overflows.
inline std::optional<SeriesResult> triangular_exp_series(
    double x, double w, const PQParams& pq, const SeriesPolicy& policy,
    bool divergence_guard) {
  policy.validate();
  NeumaierSum sum;
  double abs_sum = 1.0;
  sum.add(1.0);
  if (x == 0.0) return SeriesResult{1.0, 1, 0.0, true};

  double term = 1.0;
  double wpow = 1.0;
  std::size_t negligible = 0;
  std::size_t non_decreasing = 0;
  double tail = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < policy.max_terms; ++n) {
    const double ratio = wpow * x / pq_int(n + 1, pq);
    wpow *= w;
    const double next = term * ratio;
    if (!std::isfinite(next)) return std::nullopt;

    if (divergence_guard && n >= 100) {
      non_decreasing = std::abs(ratio) >= 1.0 ? non_decreasing + 1 : 0;
      if (non_decreasing >= 50) {
        return SeriesResult{sum.value(), n + 2, tail, false};
      }
    }

    term = next;
    sum.add(term);
    abs_sum += std::abs(term);
    const double tol = policy.tolerance(abs_sum);
    negligible = std::abs(term) <= tol ? negligible + 1 : 0;

    const double rho = std::abs(wpow * x / pq_int(n + 2, pq));
    if (rho < 1.0) {
      tail = std::abs(term) * rho / (1.0 - rho);
      if (negligible >= 3 && tail <= tol) {
        return SeriesResult{sum.value(), n + 2, tail, true};
      }
    }
  }
  return SeriesResult{sum.value(), policy.max_terms, tail, false};
}

/// Incremental generator for log of q^{k(k-1)/2} y^k / [k]_{p,q}!.
class TriangularLogTerms {
 public:
  TriangularLogTerms(double log_y, const PQParams& pq)
      : pq_(pq), log_y_(log_y), log_q_(std::log(pq.q())) {}

  std::size_t index() const { return k_; }
  double log_term() const { return log_term_; }
  /// log(t_{k+1} / t_k); strictly decreasing in k.
  double log_ratio_next() const {
    return static_cast<double>(k_) * log_q_ + log_y_ - log_pq_int(k_ + 1, pq_);
  }
  void advance() {
    log_term_ += log_ratio_next();
    ++k_;
  }

 private:
  PQParams pq_;
  double log_y_;
  double log_q_;
  std::size_t k_ = 0;
  double log_term_ = 0.0;
};

}  // namespace detail

/// e_{p,q}(x) = sum p^{n(n-1)/2} x^n / [n]!. Finite radius of convergence
/// p/(p-q); beyond it the result is flagged non-converged.
inline SeriesResult e_pq(double x, const PQParams& pq,
                         const SeriesPolicy& policy = {}) {
  auto r = detail::triangular_exp_series(x, pq.p(), pq, policy, true);
  if (!r) {
    return SeriesResult{std::numeric_limits<double>::infinity(), 0,
                        std::numeric_limits<double>::infinity(), false};
  }
  return *r;
}

/// log E_{p,q}(y) for y > 0, accumulated as a streaming log-sum-exp.
/// tail_estimate bounds the relative omitted mass, i.e. the absolute error
/// of the returned logarithm.
inline SeriesResult log_E_pq(double y, const PQParams& pq,
                             const SeriesPolicy& policy = {}) {
  policy.validate();
  if (!(y > 0.0)) {
    throw std::domain_error("log_E_pq: argument must be positive");
  }
  detail::TriangularLogTerms gen(std::log(y), pq);
  double max_log = 0.0;
  NeumaierSum scaled;
  scaled.add(1.0);
  std::size_t negligible = 0;
  double tail = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < policy.max_terms; ++k) {
    gen.advance();
    const double lt = gen.log_term();
    if (lt > max_log) {
      scaled.scale(std::exp(max_log - lt));
      max_log = lt;
      scaled.add(1.0);
    } else {
      scaled.add(std::exp(lt - max_log));
    }
    const double log_total = max_log + std::log(scaled.value());
    const double rel = std::exp(lt - log_total);
    negligible = rel <= policy.rel_tol ? negligible + 1 : 0;
    const double rho = std::exp(gen.log_ratio_next());
    if (rho < 1.0) {
      tail = rel * rho / (1.0 - rho);
      if (negligible >= 3 && tail <= policy.rel_tol) {
        return SeriesResult{log_total, k + 1, tail, true};
      }
    }
  }
  return SeriesResult{max_log + std::log(scaled.value()), policy.max_terms,
                      tail, false};
}

/// E_{p,q}(x) = sum q^{n(n-1)/2} x^n / [n]!, entire in x. Falls back to
/// log-magnitude accumulation when a linear-space term overflows.
inline SeriesResult E_pq(double x, const PQParams& pq,
                         const SeriesPolicy& policy = {}) {
  if (auto r = detail::triangular_exp_series(x, pq.q(), pq, policy, false)) {
    return *r;
  }
  if (x > 0.0) {
    SeriesResult lr = log_E_pq(x, pq, policy);
    const double v = std::exp(lr.value);
    // Relative error of the value equals the absolute error of the log.
    return SeriesResult{v, lr.terms_used, v * lr.tail_estimate,
                        lr.converged && std::isfinite(v)};
  }
  return SeriesResult{std::numeric_limits<double>::quiet_NaN(), 0,
                      std::numeric_limits<double>::infinity(), false};
}

// ---------------------------------------------------------------------------
// Derivative and integrals

/// (D_{p,q} f)(x) = (f(px) - f(qx)) / ((p - q) x) for x != 0. At x = 0 the
/// supplied f'(0) is used, otherwise a central finite difference.
template <class F>
double pq_derivative(F&& f, double x, const PQParams& pq,
                     std::optional<double> derivative_at_zero = std::nullopt) {
  if (x != 0.0) {
    return (f(pq.p() * x) - f(pq.q() * x)) / ((pq.p() - pq.q()) * x);
  }
  if (derivative_at_zero) return *derivative_at_zero;
  const double h = 1e-5;
  return (f(h) - f(-h)) / (2.0 * h);
}

namespace detail {

// Jackson-type integral over [0, a] for an arbitrary ordered pair (p, q),
// p != q, both positive. The branch is chosen by |p/q|; swapping p and q
// maps one branch onto the other.
template <class F>
SeriesResult jackson_integral_zero(F&& f, double a, double p, double q,
                                   const SeriesPolicy& policy) {
  policy.validate();
  if (a < 0.0) {
    throw std::domain_error("pq integral: upper limit must be >= 0");
  }
  if (a == 0.0) return SeriesResult{0.0, 0, 0.0, true};

  // Larger parameter in the denominator: nodes a rho^k / big, rho = small/big.
  const double big = std::max(p, q);
  const double small = std::min(p, q);
  const double rho = small / big;
  const double scale = (big - small) * a / big;
  const double bound_at_zero = std::abs(f(0.0));

  NeumaierSum sum;
  double abs_sum = 0.0;
  double rho_k = 1.0;
  double recent = 0.0;  // max |f| over the last three nodes
  double f_1 = 0.0, f_2 = 0.0;
  std::size_t negligible = 0;
  double tail = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < policy.max_terms; ++k) {
    const double fk = f(a * rho_k / big);
    const double term = scale * rho_k * fk;
    sum.add(term);
    abs_sum += std::abs(term);
    recent = std::max({std::abs(fk), std::abs(f_1), std::abs(f_2)});
    f_2 = f_1;
    f_1 = fk;
    rho_k *= rho;

    const double tol = policy.tolerance(abs_sum);
    negligible = std::abs(term) <= tol ? negligible + 1 : 0;
    tail = scale * rho_k / (1.0 - rho) * std::max(recent, bound_at_zero);
    if (negligible >= 3 && tail <= tol) {
      return SeriesResult{sum.value(), k + 1, tail, true};
    }
    if (rho_k == 0.0) {
      return SeriesResult{sum.value(), k + 1, 0.0, true};
    }
  }
  return SeriesResult{sum.value(), policy.max_terms, tail, false};
}

}  // namespace detail

/// (p,q)-integral of f over [0, a]:
///   (p - q) a sum_k q^k / p^{k+1} f(q^k a / p^{k+1}).
/// The tail is bounded by the geometric ratio q/p times a running bound on
/// |f| taken from f(0) and the three most recent nodes.
template <class F>
SeriesResult pq_integral_zero(F&& f, double a, const PQParams& pq,
                              const SeriesPolicy& policy = {}) {
  return detail::jackson_integral_zero(std::forward<F>(f), a, pq.p(), pq.q(),
                                       policy);
}

/// (p,q)-integral over [a, b], defined as the difference of the two
/// half-line integrals from 0.
template <class F>
SeriesResult pq_integral(F&& f, double a, double b, const PQParams& pq,
                         const SeriesPolicy& policy = {}) {
  if (!(a >= 0.0) || !(b >= a)) {
    throw std::domain_error("pq_integral: requires 0 <= a <= b");
  }
  const SeriesResult upper = pq_integral_zero(f, b, pq, policy);
  const SeriesResult lower = pq_integral_zero(f, a, pq, policy);
  return SeriesResult{upper.value - lower.value,
                      upper.terms_used + lower.terms_used,
                      upper.tail_estimate + lower.tail_estimate,
                      upper.converged && lower.converged};
}

}  // namespace pqk
