#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "pqk/operator.hpp"
#include "pqk/registry.hpp"

using namespace pqk;

namespace {

const std::vector<std::pair<double, double>> kPairs = {
    {1.0, 0.5}, {1.0, 0.9}, {0.9, 0.8}, {0.9, 0.5}, {0.99, 0.98}};
const std::size_t kOrders[] = {1, 2, 5, 20, 100};
const double kPoints[] = {0.0, 0.25, 1.0, 2.5, 10.0};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(OperatorContext, RejectsZeroOrder) {
  EXPECT_THROW(OperatorContext(0, PQParams(0.9, 0.8)), std::invalid_argument);
}

TEST(Cells, FrozenGeometry) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  const CellGeometry c = cell_geometry(ctx, 1);
  EXPECT_LT(rel(c.node, 0.38050302499904874), 1e-14);
  EXPECT_LT(rel(c.upper, 0.80856892812297858), 1e-14);
  EXPECT_LT(rel(c.width, c.upper - c.lower), 1e-13);
  EXPECT_EQ(cell_geometry(ctx, 0).lower, 0.0);
  EXPECT_LT(rel(cell_integral_monomial(ctx, 1, 0), 0.085166207078486301), 1e-14);
}

TEST(Cells, WeightTimesWidthIsOne) {
  for (const auto& [p, q] : kPairs) {
    for (std::size_t n : kOrders) {
      const OperatorContext ctx(n, PQParams(p, q));
      for (std::size_t k = 0; k <= 200; ++k) {
        const double prod = kantorovich_cell_weight(ctx, k) * cell_geometry(ctx, k).width;
        ASSERT_LT(std::abs(prod - 1.0), 1e-12) << n << " " << p << " " << q << " k=" << k;
      }
    }
  }
}

TEST(Cells, NodesMatchBruteForceAndIncrease) {
  for (const auto& [p, q] : kPairs) {
    const OperatorContext ctx(5, PQParams(p, q));
    double prev = -1.0;
    for (std::size_t k = 0; k <= 60; ++k) {
      const double a = node_position(ctx, k);
      EXPECT_GT(a, prev);
      prev = a;
      if (k > 0) {
        EXPECT_LT(rel(a, static_cast<double>(oracle::node(5, p, q, k))), 1e-12);
      }
    }
  }
}

TEST(Cells, NumericQuadratureMatchesClosedForm) {
  SeriesPolicy policy;
  policy.rel_tol = 1e-14;
  for (const auto& [p, q] : kPairs) {
    const OperatorContext ctx(5, PQParams(p, q), policy);
    for (std::size_t m = 0; m <= 6; ++m) {
      for (std::size_t k : {0, 1, 3, 10}) {
        const auto f = [m](double t) { return std::pow(t, static_cast<double>(m)); };
        const SeriesResult r = cell_integral(ctx, f, k);
        const double exact = cell_integral_monomial(ctx, m, k);
        EXPECT_LT(std::abs(r.value - exact), 1e-11 * std::max(1.0, std::abs(exact)))
            << p << " " << q << " m=" << m << " k=" << k;
      }
    }
  }
}

TEST(Basis, WeightsMatchBruteForce) {
  for (const auto& [p, q] : kPairs) {
    for (std::size_t n : {1, 2, 5}) {
      const OperatorContext ctx(n, PQParams(p, q));
      for (double x : {0.25, 1.0, 2.5}) {
        const auto ref = oracle::weights(n, p, q, x, 300);
        for (std::size_t k = 0; k < 30; ++k) {
          const double w = basis_weight(ctx, k, x);
          EXPECT_NEAR(w, static_cast<double>(ref[k]), 1e-14 + 1e-12 * w);
        }
      }
    }
  }
}

TEST(Basis, PartitionOfUnityAndPositivity) {
  for (const auto& [p, q] : kPairs) {
    for (std::size_t n : kOrders) {
      const OperatorContext ctx(n, PQParams(p, q));
      for (double x : kPoints) {
        const SeriesResult mass = basis_mass(ctx, x);
        ASSERT_TRUE(mass.converged);
        EXPECT_LE(std::abs(mass.value - 1.0), 1e-12) << n << " " << p << " " << q << " " << x;
        double total = 0.0;
        for (double w : basis_weights(ctx, x)) {
          EXPECT_GE(w, 0.0);
          total += w;
        }
        EXPECT_LE(std::abs(total - 1.0), 1e-12);
      }
    }
  }
}

TEST(Basis, AtZeroOnlyFirstWeight) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  EXPECT_EQ(basis_weight(ctx, 0, 0.0), 1.0);
  EXPECT_EQ(basis_weight(ctx, 3, 0.0), 0.0);
  EXPECT_EQ(basis_mass(ctx, 0.0).value, 1.0);
}

TEST(Basis, NegativeOrNonFiniteXRejected) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  EXPECT_THROW(basis_mass(ctx, -0.1), std::domain_error);
  EXPECT_THROW(basis_weight(ctx, 0, -1.0), std::domain_error);
  EXPECT_THROW(kantorovich_apply(ctx, monomial(1), -1.0), std::domain_error);
  EXPECT_THROW(basis_mass(ctx, std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(Szasz, FrozenSecondMoment) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  const auto sq = [](double t) { return t * t; };
  EXPECT_LT(rel(szasz_apply(ctx, sq, 1.0).value, 1.5055030249990487), 1e-12);
}

TEST(Szasz, MomentsMatchBruteForce) {
  for (const auto& [p, q] : kPairs) {
    const OperatorContext ctx(5, PQParams(p, q));
    for (int m = 0; m <= 4; ++m) {
      const auto f = [m](double t) { return std::pow(t, m); };
      for (double x : {0.25, 1.0, 2.5}) {
        const double ref = static_cast<double>(oracle::szasz_moment(5, p, q, x, m));
        EXPECT_LT(rel(szasz_apply(ctx, f, x).value, ref), 1e-11);
      }
    }
  }
}

TEST(Kantorovich, FrozenMoments) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  EXPECT_LT(rel(kantorovich_apply(ctx, monomial(1), 1.0).value, 1.4738253088229698), 1e-12);
  EXPECT_LT(rel(kantorovich_apply(ctx, monomial(2), 1.0).value, 2.9889463490404308), 1e-12);
  EXPECT_LT(rel(kantorovich_apply(ctx, monomial(3), 1.0).value, 7.5933592193423771), 1e-12);
  EXPECT_LT(rel(kantorovich_apply(ctx, monomial(4), 1.0).value, 23.218026994123064), 1e-12);
}

TEST(Kantorovich, NumericAndClosedPathsAgree) {
  for (const auto& [p, q] : kPairs) {
    for (std::size_t n : {1, 5, 20}) {
      const OperatorContext ctx(n, PQParams(p, q));
      for (std::size_t m = 0; m <= 3; ++m) {
        for (double x : {0.0, 0.25, 1.0, 2.5}) {
          const double closed = kantorovich_apply(ctx, monomial(m), x).value;
          const SeriesResult numeric =
              kantorovich_apply(ctx, monomial(m), x, CellQuadrature::numeric);
          ASSERT_TRUE(numeric.converged);
          EXPECT_LT(std::abs(closed - numeric.value), 1e-10 * std::max(1.0, std::abs(closed)))
              << n << " " << p << " " << q << " m=" << m << " x=" << x;
        }
      }
    }
  }
}

TEST(Kantorovich, MomentsMatchBruteForce) {
  for (const auto& [p, q] : kPairs) {
    const OperatorContext ctx(2, PQParams(p, q));
    for (int m = 0; m <= 4; ++m) {
      for (double x : {0.25, 1.0, 2.5}) {
        const double ref = static_cast<double>(oracle::kantorovich_moment(2, p, q, x, m));
        EXPECT_LT(rel(kantorovich_apply(ctx, monomial(m), x).value, ref), 1e-11)
            << p << " " << q << " m=" << m << " x=" << x;
      }
    }
  }
}

TEST(Kantorovich, IsLinear) {
  const OperatorContext ctx(5, PQParams(0.9, 0.5));
  const TestFunction f = require_function("exp_neg");
  const TestFunction g = require_function("runge");
  TestFunction h = f;
  h.evaluator = [&](double t) { return 2.0 * f(t) - 3.0 * g(t); };
  for (double x : {0.0, 0.5, 2.0}) {
    const double lhs = kantorovich_apply(ctx, h, x).value;
    const double rhs =
        2.0 * kantorovich_apply(ctx, f, x).value - 3.0 * kantorovich_apply(ctx, g, x).value;
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(Kantorovich, IsPositive) {
  const OperatorContext ctx(20, PQParams(0.99, 0.98));
  for (const auto& name : {"exp_neg", "abs_shift", "runge", "sqrt", "sq_clamp"}) {
    const TestFunction f = require_function(name);
    for (double x : {0.0, 0.3, 1.0, 4.0}) {
      EXPECT_GE(kantorovich_apply(ctx, f, x).value, 0.0) << name << " " << x;
    }
  }
}

TEST(Kantorovich, EvaluatorReuseGivesSameValues) {
  const OperatorContext ctx(20, PQParams(0.9, 0.8));
  const TestFunction f = require_function("sin_clamp");
  KantorovichEvaluator eval(ctx, f);
  for (double x : {2.0, 0.5, 1.0, 0.5}) {
    EXPECT_EQ(eval(x).value, kantorovich_apply(ctx, f, x).value);
  }
}

TEST(Kantorovich, LargeOrderAndFarPointConverge) {
  const OperatorContext ctx(1024, PQParams(1024.0 / 1025.0, 1024.0 / 1026.0));
  const SeriesResult r = kantorovich_apply(ctx, monomial(2), 50.0);
  ASSERT_TRUE(r.converged);
  EXPECT_TRUE(std::isfinite(r.value));
  const double expected = kantorovich_apply(ctx, monomial(2), 50.0).value;
  EXPECT_EQ(r.value, expected);
  EXPECT_GT(r.value, 2500.0);
}

TEST(Kantorovich, TruncationBoundIsSound) {
  SeriesPolicy loose;
  loose.rel_tol = 1e-7;
  SeriesPolicy tight;
  tight.rel_tol = 1e-15;
  for (const auto& [p, q] : kPairs) {
    for (double x : {0.25, 2.5, 10.0}) {
      const OperatorContext a(20, PQParams(p, q), loose);
      const OperatorContext b(20, PQParams(p, q), tight);
      const TestFunction f = require_function("exp_neg");
      const SeriesResult ra = kantorovich_apply(a, f, x);
      const SeriesResult rb = kantorovich_apply(b, f, x);
      ASSERT_TRUE(ra.converged && rb.converged);
      EXPECT_LE(std::abs(ra.value - rb.value),
                ra.tail_estimate + 1e-7 * std::max(1.0, std::abs(rb.value)) + 1e-15);
    }
  }
}

TEST(Kantorovich, NonConvergenceIsReported) {
  SeriesPolicy tiny;
  tiny.max_terms = 5;
  const OperatorContext ctx(100, PQParams(0.99, 0.98), tiny);
  EXPECT_FALSE(kantorovich_apply(ctx, monomial(1), 10.0).converged);
}

TEST(Auxiliary, ReproducesAffineFunctions) {
  for (const auto& [p, q] : kPairs) {
    const OperatorContext ctx(5, PQParams(p, q));
    for (double x : {0.0, 0.5, 2.5}) {
      const TestFunction lin = polynomial_function("lin", {0.7, -1.3});
      EXPECT_NEAR(auxiliary_apply(ctx, lin, x).value, lin(x), 1e-12);
      const TestFunction shifted = without_closed_form(shifted_power(x, 1));
      EXPECT_NEAR(auxiliary_apply(ctx, shifted, x, CellQuadrature::numeric).value, 0.0, 1e-10);
    }
  }
}

TEST(Auxiliary, ShiftIsImageOfIdentity) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  EXPECT_NEAR(kantorovich_shift(ctx, 1.0), kantorovich_apply(ctx, monomial(1), 1.0).value,
              1e-13);
}
