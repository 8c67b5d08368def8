#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "pqk/bounds.hpp"
#include "pqk/harness.hpp"
#include "pqk/registry.hpp"

using namespace pqk;

TEST(GridSpec, Validation) {
  EXPECT_NO_THROW(GridSpec{}.validate());
  EXPECT_THROW((GridSpec{0.0, 1e-3, 1e-3}.validate()), std::invalid_argument);
  EXPECT_THROW((GridSpec{10.0, 1e-2, 1e-3}.validate()), std::invalid_argument);
  const GridSpec r = GridSpec{}.refined();
  EXPECT_EQ(r.step, 5e-4);
  EXPECT_EQ(r.h_step, 5e-4);
}

TEST(ModulusLocal, Examples) {
  const TestFunction id = require_function("id");
  EXPECT_NEAR(modulus_local(id, 0.1, 1.0), 0.1, 1e-14);
  EXPECT_NEAR(modulus_local(id, 0.1, 7.0), 0.1, 1e-13);
  EXPECT_EQ(modulus_local(require_function("one"), 0.3, 2.0), 0.0);
  EXPECT_NEAR(modulus_local(require_function("sq"), 0.1, 1.0), 0.39, 1e-13);
}

TEST(ModulusLocal, OffGridDeltaUsesExactPairs) {
  const TestFunction sq = require_function("sqrt");
  // Largest increment of sqrt over distance delta is at the origin.
  EXPECT_NEAR(modulus_local(sq, 3.3e-4, 1.0), std::sqrt(3.3e-4), 1e-15);
}

TEST(ModulusLocal, MonotoneInDelta) {
  for (const auto& f : default_registry()) {
    double prev = 0.0;
    for (double d : {0.001, 0.01, 0.1, 0.5, 1.0, 3.0}) {
      const double w = modulus_local(f, d, 2.0);
      EXPECT_GE(w, prev) << f.name << " " << d;
      prev = w;
    }
  }
}

TEST(Modulus2, RejectsUnboundedFunctions) {
  try {
    modulus2(require_function("sq"), 0.1);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("C_B"), std::string::npos);
  }
}

TEST(Modulus2, ConstantAndAffineVanish) {
  EXPECT_EQ(modulus2(require_function("one"), 0.4), 0.0);
  TestFunction affine = polynomial_function("affine", {-3.0, 0.5});
  affine.bounded = true;
  EXPECT_EQ(modulus2(affine, 0.25, GridSpec{8.0, 1.0 / 1024, 1.0 / 1024}), 0.0);
}

TEST(Modulus2, ClampedSquareHasTwoDeltaSquared) {
  const TestFunction f = require_function("sq_clamp");
  const GridSpec interior{5.0, 1e-3, 1e-3};  // stays clear of the clamp at 10
  for (double d : {0.05, 0.1, 0.5}) {
    EXPECT_NEAR(modulus2(f, d, interior), 2.0 * d * d, 1e-11) << d;
  }
}

TEST(Modulus2, MonotoneInDelta) {
  for (const auto& f : default_registry()) {
    if (!f.bounded) continue;
    double prev = 0.0;
    for (double d : {0.01, 0.1, 0.3, 1.0}) {
      const double w = modulus2(f, d, GridSpec{10.0, 1e-3, 1e-3});
      EXPECT_GE(w, prev) << f.name;
      prev = w;
    }
  }
}

TEST(WeightedModulus, RejectsFastGrowth) {
  EXPECT_THROW(weighted_modulus(require_function("cube"), 0.1), std::domain_error);
}

TEST(WeightedModulus, ConstantVanishes) {
  EXPECT_EQ(weighted_modulus(require_function("one"), 0.5), 0.0);
}

TEST(WeightedModulus, MonotoneScalingAndSmallDelta) {
  const GridSpec grid{20.0, 1e-3, 1e-3};
  for (const auto& f : default_registry()) {
    if (f.growth_order > 2.0) continue;
    double prev = 0.0;
    for (double d : {0.01, 0.05, 0.2, 0.7}) {
      const double w = weighted_modulus(f, d, grid);
      EXPECT_GE(w, prev) << f.name;
      prev = w;
    }
    for (double d : {0.05, 0.2}) {
      const double base = weighted_modulus(f, d, grid);
      for (double lambda : {2.0, 3.5}) {
        EXPECT_LE(weighted_modulus(f, lambda * d, grid), (1.0 + lambda) * base + 1e-12)
            << f.name << " " << d << " " << lambda;
      }
    }
    prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 5; ++k) {
      const double w = weighted_modulus(f, std::pow(10.0, -k), grid);
      EXPECT_LE(w, prev) << f.name;
      prev = w;
    }
    EXPECT_LT(prev, 1e-2) << f.name;
  }
}

TEST(WeightedNorm, Examples) {
  // 1 + x^0 = 2, so the constant 1 has norm 1/2 for m = 0.
  EXPECT_EQ(weighted_norm(require_function("one"), 0.0).value, 0.5);
  EXPECT_EQ(weighted_norm(require_function("one"), 2.0).value, 1.0);
  const WeightedNorm sq = weighted_norm(require_function("sq"), 2.0);
  EXPECT_NEAR(sq.value, 2500.0 / 2501.0, 1e-15);
  EXPECT_FALSE(sq.tail_vanishes);
  const WeightedNorm id = weighted_norm(require_function("id"), 2.0);
  EXPECT_NEAR(id.value, 0.5, 1e-15);
  EXPECT_TRUE(id.tail_vanishes);
}

TEST(GrowthConstant, CoversDeclaredGrowth) {
  for (const auto& f : default_registry()) {
    if (f.growth_order > 2.0) {
      EXPECT_THROW(c2_growth_constant(f), std::domain_error);
      continue;
    }
    const double M = c2_growth_constant(f);
    for (double x = 0.0; x <= 50.0; x += 0.01) {
      ASSERT_LE(std::abs(f(x)), M * (1.0 + x * x)) << f.name << " " << x;
    }
  }
}

TEST(Theorem5, ConstantHasZeroError) {
  const BoundReport r =
      theorem5_bound(OperatorContext(5, PQParams(0.9, 0.8)), require_function("one"), 1.0, 2.0);
  EXPECT_NEAR(r.actual_error, 0.0, 1e-14);
  EXPECT_GE(r.bound_value, 0.0);
  EXPECT_FALSE(r.violation);
}

TEST(Theorem5, LinearExample) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  const BoundReport r = theorem5_bound(ctx, require_function("id"), 1.0, 2.0);
  EXPECT_NEAR(r.actual_error, 0.473825308822970, 1e-12);
  EXPECT_GE(r.bound_value, r.actual_error);
  EXPECT_DOUBLE_EQ(r.slack, r.bound_value - r.actual_error);
  EXPECT_EQ(r.theorem, "thm5");
  EXPECT_EQ(*r.a, 2.0);
  EXPECT_EQ(r.refinements, 0);
}

TEST(Theorem5, Preconditions) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  EXPECT_THROW(theorem5_bound(ctx, require_function("id"), 3.0, 2.0), std::domain_error);
  EXPECT_THROW(theorem5_bound(ctx, require_function("cube"), 1.0, 2.0), std::domain_error);
}

TEST(Theorem5, DominatesOnSweepAlongSequence) {
  for (const auto& name : {"exp_neg", "abs_shift", "sqrt", "runge"}) {
    for (std::size_t n : {16, 256}) {
      const OperatorContext ctx(n, param_sequence(2.0, 1.0, n));
      for (double x : {0.0, 0.5, 1.0, 2.0}) {
        const BoundReport r = theorem5_bound(ctx, require_function(name), x, 2.0);
        EXPECT_FALSE(r.violation) << name << " n=" << n << " x=" << x;
      }
    }
  }
}

TEST(Theorem6, ConstantAndUnbounded) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  const BoundReport r = theorem6_bound(ctx, require_function("one"), 1.0);
  EXPECT_NEAR(r.actual_error, 0.0, 1e-14);
  EXPECT_EQ(r.bound_value, 0.0);
  EXPECT_THROW(theorem6_bound(ctx, require_function("sq"), 1.0), std::domain_error);
}

TEST(Theorem6, ExponentialExample) {
  const OperatorContext ctx(100, PQParams(0.999, 0.998));
  const BoundReport r = theorem6_bound(ctx, require_function("exp_neg"), 1.0, 4.0);
  EXPECT_FALSE(r.violation);
  EXPECT_GE(r.slack, 0.0);
  ASSERT_TRUE(r.empirical_constant.has_value());
  EXPECT_LE(*r.empirical_constant, 4.0);
  EXPECT_EQ(*r.M, 4.0);
}

TEST(Theorem10, ConstantAndPreconditions) {
  const OperatorContext ctx(5, PQParams(0.9, 0.8));
  const BoundReport r = theorem10_bound(ctx, require_function("one"), 1.0);
  EXPECT_NEAR(r.actual_error, 0.0, 1e-14);
  EXPECT_EQ(r.bound_value, 0.0);
  EXPECT_THROW(theorem10_bound(ctx, require_function("exp_neg"), 1.0, 0.5), std::domain_error);
  EXPECT_THROW(theorem10_bound(ctx, require_function("cube"), 1.0), std::domain_error);
}

TEST(Theorem10, ExponentialAlongSequence) {
  const OperatorContext ctx(200, param_sequence(2.0, 1.0, 200));
  const BoundReport r = theorem10_bound(ctx, require_function("exp_neg"), 1.0, 1.0, 8.0);
  EXPECT_GE(r.slack, 0.0);
  EXPECT_FALSE(r.violation);
  ASSERT_TRUE(r.empirical_constant.has_value());
  EXPECT_LT(*r.empirical_constant, 8.0);
  EXPECT_EQ(*r.lambda, 1.0);
  EXPECT_EQ(*r.K, 8.0);
}
