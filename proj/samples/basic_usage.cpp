// Evaluates K_n(e^{-x}) at a few points, prints the low-order moments and
// the pointwise error bound, then runs a short convergence sweep.

#include <cstdio>

#include "pqk/pqk.hpp"

int main() {
  const pqk::OperatorContext ctx(20, pqk::PQParams(0.95, 0.9));
  const pqk::TestFunction f = pqk::require_function("exp_neg");

  pqk::KantorovichEvaluator eval(ctx, f);
  std::printf("[20]_{p,q} = %s\n", pqk::format15(ctx.pq_n()).c_str());
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    const pqk::SeriesResult r = eval(x);
    std::printf("K(exp_neg; %.2f) = %.12f  (f = %.12f, %zu terms)\n", x, r.value, f(x),
                r.terms_used);
  }

  for (std::size_t m = 0; m <= 2; ++m) {
    std::printf("K(t^%zu; 1) = %.12f\n", m, pqk::kantorovich_moment_closed(ctx, m, 1.0));
  }

  const pqk::BoundReport b = pqk::theorem5_bound(ctx, f, 1.0, 2.0);
  std::printf("error %.3e <= bound %.3e (slack %.3e)\n", b.actual_error, b.bound_value,
              b.slack);

  pqk::ConvergeConfig cfg;
  cfg.n_list = {16, 64, 256};
  cfg.with_bounds = false;
  std::fputs(pqk::to_csv(pqk::converge_run(f, cfg)).c_str(), stdout);
  return 0;
}
