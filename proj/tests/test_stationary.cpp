#include <gtest/gtest.h>

#include <cmath>

#include "maxchaos/drift.hpp"
#include "maxchaos/errors.hpp"
#include "maxchaos/stationary.hpp"

using namespace maxchaos;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// B(r) = 1 - 2r + c r (1 - r)(1 - 2r) keeps bfrak(1) = 0 and bfrak > 0 for |c| < 2:
// bfrak(u) = u (1 - u) (1 + c u (1 - u) / 2).
DriftFunction cubic_drift(double c) {
  // 1 - 2r + c (r - 3r^2 + 2r^3)
  return polynomial_drift({1.0, -2.0 + c, -3.0 * c, 2.0 * c});
}

}  // namespace

TEST(Drift, Registry) {
  const auto lin = parse_drift("linear");
  EXPECT_DOUBLE_EQ(lin(0.25), 0.5);
  EXPECT_DOUBLE_EQ(lin.derivative(0.3), -2.0);
  const auto aff = parse_drift("affine(2, -4)");
  EXPECT_DOUBLE_EQ(aff(0.5), 0.0);
  const auto poly = parse_drift("poly(1,0,-3)");
  EXPECT_DOUBLE_EQ(poly(2.0), -11.0);
  EXPECT_DOUBLE_EQ(poly.derivative(2.0), -12.0);
  EXPECT_THROW(parse_drift("cubic"), ParameterError);
  EXPECT_THROW(parse_drift("affine(1)"), ParameterError);
  EXPECT_THROW(parse_drift("poly(1,x)"), ParameterError);
}

TEST(Drift, SampledLipschitz) {
  EXPECT_NEAR(sampled_lipschitz(parse_drift("linear")), 2.0, 1e-12);
  EXPECT_NEAR(sampled_lipschitz(parse_drift("poly(0,0,1)")), 2.0, 1e-12);
}

TEST(Quadrature, PolynomialsAndTranscendentals) {
  EXPECT_NEAR(integrate_adaptive_simpson([](double x) { return x * x * x; }, 0, 2, 1e-12), 4.0, 1e-12);
  EXPECT_NEAR(integrate_adaptive_simpson([](double x) { return std::sin(x); }, 0, M_PI, 1e-12), 2.0, 1e-11);
  EXPECT_NEAR(integrate_adaptive_simpson([](double x) { return std::exp(-x * x); }, -6, 6, 1e-12), std::sqrt(M_PI),
              1e-10);
}

TEST(Bfrak, Examples) {
  const auto lin = parse_drift("linear");
  EXPECT_EQ(bfrak(lin, 0.0), 0.0);
  EXPECT_NEAR(bfrak(lin, 1.0), 0.0, 1e-12);
  EXPECT_NEAR(bfrak(lin, 0.5), 0.25, 1e-12);
  EXPECT_THROW(bfrak(lin, 1.5), DomainError);
  EXPECT_THROW(bfrak(lin, -0.1), DomainError);
}

TEST(Bfrak, BalancedMatchesClosedForm) {
  const auto d = cubic_drift(1.0);
  for (double u : {1e-9, 1e-4, 0.3, 0.5, 0.9, 1 - 1e-6, 1 - 1e-10}) {
    const double exact = u * (1 - u) * (1 + u * (1 - u) / 2);
    EXPECT_NEAR(bfrak_balanced(d, u), exact, 1e-12 + 1e-9 * exact) << u;
  }
}

TEST(StationaryCdf, LogisticOracle) {
  const auto cdf = solve_stationary_cdf(parse_drift("linear"));
  EXPECT_LE(cdf.F(0), 1e-6);
  EXPECT_GE(cdf.F(cdf.size() - 1), 1 - 1e-6);
  double errF = 0, errf = 0, errNode = 0;
  for (int k = 0; k <= 20000; ++k) {
    const double x = -10.0 + 20.0 * k / 20000;
    const double L = logistic(x);
    errF = std::max(errF, std::abs(cdf.cdf(x) - L));
    errf = std::max(errf, std::abs(cdf.density(x) - L * (1 - L)));
  }
  for (Index i = 0; i < cdf.size(); ++i) {
    if (std::abs(cdf.grid_x(i)) <= 10) errNode = std::max(errNode, std::abs(cdf.F(i) - logistic(cdf.grid_x(i))));
  }
  EXPECT_LE(errF, 1e-8);
  EXPECT_LE(errf, 1e-8);
  EXPECT_LE(errNode, 1e-8);
}

TEST(StationaryCdf, OdeResidualAtMidpoints) {
  for (double c : {0.0, 1.0, -1.5}) {
    const auto d = cubic_drift(c);
    const auto cdf = solve_stationary_cdf(d);
    double worst = 0;
    for (Index i = 0; i + 1 < cdf.size(); ++i) {
      const double x = 0.5 * (cdf.grid_x(i) + cdf.grid_x(i + 1));
      worst = std::max(worst, std::abs(cdf.density(x) - bfrak_balanced(d, cdf.cdf(x))));
    }
    EXPECT_LE(worst, 1e-7) << "c=" << c;
  }
}

TEST(StationaryCdf, NormalizationAndMonotonicity) {
  for (double c : {0.0, 1.5, -1.0}) {
    const auto cdf = solve_stationary_cdf(cubic_drift(c));
    double mass = 0;
    for (Index i = 0; i + 1 < cdf.size(); ++i) {
      ASSERT_LE(cdf.F(i), cdf.F(i + 1));
      ASSERT_GE(cdf.F(i), 0.0);
      ASSERT_LE(cdf.F(i + 1), 1.0);
      mass += 0.5 * (cdf.f(i) + cdf.f(i + 1)) * (cdf.grid_x(i + 1) - cdf.grid_x(i));
    }
    EXPECT_NEAR(mass, 1.0, 1e-4);
  }
}

TEST(StationaryCdf, AnchorTranslation) {
  const auto d = cubic_drift(1.0);
  GridSpec shifted;
  shifted.anchor = 0.37;
  const auto a = solve_stationary_cdf(d);
  const auto b = solve_stationary_cdf(d, shifted);
  for (double x = -8; x <= 8; x += 0.173) EXPECT_NEAR(b.cdf(x + 0.37), a.cdf(x), 1e-9);
}

TEST(StationaryCdf, Quantile) {
  const auto cdf = solve_stationary_cdf(parse_drift("linear"));
  EXPECT_NEAR(cdf.quantile(0.5), cdf.anchor, 1e-12);
  EXPECT_NEAR(cdf.quantile(0.75), std::log(3.0), 1e-7);
  for (int k = 1; k < 1000; ++k) {
    const double u = k / 1000.0;
    ASSERT_LE(std::abs(cdf.cdf(cdf.quantile(u)) - u), 1e-6);
    ASSERT_NEAR(inverse_cdf_sample(cdf, u), cdf.quantile(u), 0.0);
  }
  EXPECT_THROW(cdf.quantile(1e-9), GridExtensionError);
  EXPECT_THROW(cdf.cdf(cdf.upper() + 1), GridExtensionError);
}

TEST(StationaryCdf, TailBudget) {
  GridSpec tiny;
  tiny.max_points = 50;
  EXPECT_THROW(solve_stationary_cdf(parse_drift("linear"), tiny), TailResolutionError);
}

TEST(VonMises, Logistic) {
  const auto d = parse_drift("linear");
  const auto cdf = solve_stationary_cdf(d);
  EXPECT_NEAR(von_mises_limit(cdf, d, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(von_mises_ratio_at_level(d, 1 - 1e-4), -1.0, 1e-3);
  const double x = cdf.quantile(1 - 1e-4);
  EXPECT_NEAR(von_mises_limit(cdf, d, x), -1.0, 1e-3);
  EXPECT_THROW(von_mises_ratio_at_level(d, 1 - 1e-13), TailDegeneracyError);
}

TEST(VonMises, OtherDrifts) {
  for (double c : {1.0, -1.5, 1.9}) {
    EXPECT_NEAR(von_mises_ratio_at_level(cubic_drift(c), 1 - 1e-4), -1.0, 0.05) << c;
  }
}
