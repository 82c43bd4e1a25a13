#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxchaos/errors.hpp"
#include "maxchaos/evt.hpp"
#include "maxchaos/rng.hpp"

using namespace maxchaos;

namespace {

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Exact sup_x |Phi(a x + b)^n - Gamma(x)| on a fine grid.
double exact_gaussian_gap(Index n) {
  const auto c = gaussian_norm_constants(n, 0.0, 1.0);
  double d = 0;
  for (int k = 0; k <= 40000; ++k) {
    const double x = -5 + 20.0 * k / 40000;
    d = std::max(d, std::abs(std::pow(std_normal_cdf(c.a * x + c.b), static_cast<double>(n)) - gumbel_cdf(x)));
  }
  return d;
}

StationaryCdf gridded(double lo, double hi, double h, double (*F)(double), double (*f)(double), double (*fp)(double)) {
  StationaryCdf c;
  const Index n = static_cast<Index>(std::llround((hi - lo) / h)) + 1;
  c.grid_x.resize(n);
  c.F.resize(n);
  c.f.resize(n);
  c.fprime.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double x = lo + h * i;
    c.grid_x(i) = x;
    c.F(i) = F(x);
    c.f(i) = f(x);
    c.fprime(i) = fp(x);
  }
  c.step = h;
  return c;
}

std::vector<double> sample(Index n, std::uint64_t seed) {
  std::vector<double> v(n);
  fill_normals(make_stream(seed, StreamPurpose::lemma, 0), 0, v);
  return v;
}

}  // namespace

TEST(GaussianConstants, Examples) {
  const auto c = gaussian_norm_constants(100, 0.0, 1.0);
  // b_std = sqrt(2 ln 100 - ln ln 100 - ln 4 pi), evaluated independently.
  const double b_std = std::sqrt(9.2103403719761836 - 1.5271796258079011 - 2.5310242469692907);
  EXPECT_NEAR(c.b, b_std, 1e-12);
  EXPECT_NEAR(c.b, 2.2698, 5e-5);
  EXPECT_NEAR(c.a, 0.4406, 5e-5);
  EXPECT_EQ(c.n, 100);
  EXPECT_THROW(gaussian_norm_constants(2, 0.0, 1.0), TooSmallNError);
  EXPECT_THROW(gaussian_norm_constants(3, 0.0, 1.0), TooSmallNError);
  EXPECT_NO_THROW(gaussian_norm_constants(5, 0.0, 1.0));
}

TEST(GaussianConstants, LocationScaleAndMonotone) {
  double prev = 0;
  for (Index n = 5; n < 100000; n = n * 3 / 2 + 1) {
    const auto base = gaussian_norm_constants(n, 0.0, 1.0);
    const auto c = gaussian_norm_constants(n, 1.5, 0.3);
    EXPECT_NEAR(c.b, 1.5 + 0.3 * base.b, 1e-14);
    EXPECT_NEAR(c.a, 0.3 * base.a, 1e-15);
    EXPECT_DOUBLE_EQ(base.a * base.b, 1.0);
    EXPECT_GT(base.b, prev);
    prev = base.b;
  }
}

TEST(CdfConstants, ExponentialAndLogistic) {
  const auto expo = gridded(
      0.0, 40.0, 0.01, [](double x) { return -std::expm1(-x); }, [](double x) { return std::exp(-x); },
      [](double x) { return -std::exp(-x); });
  for (Index n : {10, 100, 5000}) {
    const auto c = norm_constants_from_cdf(expo, n);
    EXPECT_NEAR(c.b, std::log(static_cast<double>(n)), 1e-8);
    EXPECT_NEAR(c.a, 1.0, 1e-8);
  }
  const auto logi = gridded(
      -30.0, 30.0, 0.01, [](double x) { return 1 / (1 + std::exp(-x)); },
      [](double x) {
        const double F = 1 / (1 + std::exp(-x));
        return F * (1 - F);
      },
      [](double x) {
        const double F = 1 / (1 + std::exp(-x));
        return F * (1 - F) * (1 - 2 * F);
      });
  for (Index n : {2, 50, 5000}) {
    const auto c = norm_constants_from_cdf(logi, n);
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(c.b, std::log(nn - 1), 1e-8);
    EXPECT_NEAR(c.a, nn / (nn - 1), 1e-8);
  }
  EXPECT_THROW(norm_constants_from_cdf(logi, 1), DomainError);
}

TEST(NormalizeMaxima, Examples) {
  VecX raw(3);
  raw << 3.0, -1.0, 10.0;
  const auto id = normalize_maxima(raw, {1.0, 0.0, 5});
  EXPECT_EQ(id.normalized, raw);
  const auto m = normalize_maxima(raw, {2.0, 1.0, 5});
  EXPECT_EQ(m.normalized(0), 1.0);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(m.normalized(i) * 2.0 + 1.0, raw(i), 1e-12);
  EXPECT_LT(m.normalized(1), m.normalized(0));
  EXPECT_LT(m.normalized(0), m.normalized(2));
  EXPECT_THROW(normalize_maxima(raw, {0.0, 0.0, 5}), DomainError);
}

TEST(Gumbel, Values) {
  EXPECT_NEAR(gumbel_cdf(0.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gumbel_cdf(-std::log(std::log(2.0))), 0.5, 1e-15);
  EXPECT_EQ(gumbel_cdf(INFINITY), 1.0);
  EXPECT_EQ(gumbel_cdf(-50.0), 0.0);
  double prev = 0;
  for (int k = 0; k <= 2000; ++k) {
    const double v = gumbel_cdf(-10 + 0.01 * k);
    ASSERT_GE(v, prev);
    prev = v;
  }
  EXPECT_EQ(limit_cdf(LimitFamily::gumbel, 0.3), gumbel_cdf(0.3));
  EXPECT_NEAR(limit_cdf(LimitFamily::frechet, 1.0, 2.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(limit_cdf(LimitFamily::frechet, -1.0, 2.0), 0.0);
  EXPECT_EQ(limit_cdf(LimitFamily::weibull, 1.0, 2.0), 1.0);
  EXPECT_NEAR(limit_cdf(LimitFamily::weibull, -1.0, 2.0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(parse_limit_family("gumbel"), LimitFamily::gumbel);
  EXPECT_EQ(to_string(LimitFamily::frechet), "frechet");
  EXPECT_THROW(parse_limit_family("normal"), ParameterError);
}

TEST(Gumbel, ExactGaussianMaximaApproachSlowly) {
  const double d2 = exact_gaussian_gap(100), d3 = exact_gaussian_gap(1000), d4 = exact_gaussian_gap(10000);
  EXPECT_GT(d2, d3);
  EXPECT_GT(d3, d4);
  EXPECT_NEAR(d2, 0.0654, 1e-3);
  EXPECT_NEAR(d4, 0.0352, 1e-3);
}

TEST(KsOneSample, Examples) {
  const auto F = [](double x) { return std_normal_cdf(x); };
  const std::vector<double> median{0.0};
  EXPECT_NEAR(ks_one_sample(median, F), 0.5, 1e-15);
  // Points at the (i - 1/2)/n quantiles of the uniform law.
  std::vector<double> quantiles;
  for (int i = 1; i <= 40; ++i) quantiles.push_back((i - 0.5) / 40);
  EXPECT_NEAR(ks_one_sample(quantiles, [](double u) { return std::clamp(u, 0.0, 1.0); }), 0.5 / 40, 1e-15);
  EXPECT_THROW(ks_one_sample(std::vector<double>{}, F), DomainError);
}

TEST(KsTwoSample, Examples) {
  const std::vector<double> a{1, 2}, b{1.5, 2.5}, low{-3, -2, -1}, high{5, 6};
  EXPECT_EQ(ks_two_sample(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample(a, b), 0.5);
  EXPECT_EQ(ks_two_sample(low, high), 1.0);
  EXPECT_THROW(ks_two_sample(a, std::vector<double>{}), DomainError);
  const std::vector<double> tied{1, 1, 2, 2}, other{1, 2, 2, 2};
  EXPECT_DOUBLE_EQ(ks_two_sample(tied, other), 0.25);
}

TEST(KsTwoSample, SymmetricAndRankInvariant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto x = sample(137, seed), y = sample(211, seed + 100);
    for (double& v : y) v = 0.3 + 1.2 * v;
    const double d = ks_two_sample(x, y);
    EXPECT_EQ(d, ks_two_sample(y, x));
    for (double& v : x) v = std::exp(v) + v * v * v;
    for (double& v : y) v = std::exp(v) + v * v * v;
    EXPECT_EQ(d, ks_two_sample(x, y));
  }
}

TEST(JointIndependence, Examples) {
  const auto x = sample(10001, 4);
  std::vector<double> sorted = x;
  std::nth_element(sorted.begin(), sorted.begin() + 5000, sorted.end());
  const std::pair<double, double> median_grid[] = {{sorted[5000], sorted[5000]}};
  // Marginal ECDF at the median is 5001 / 10001.
  const double p = 5001.0 / 10001.0;
  EXPECT_NEAR(joint_independence_report(x, x, median_grid), p - p * p, 1e-12);
  const std::pair<double, double> inf_grid[] = {{INFINITY, INFINITY}};
  EXPECT_EQ(joint_independence_report(x, x, inf_grid), 0.0);
  EXPECT_THROW(joint_independence_report(x, sample(3, 1), median_grid), DomainError);
}

TEST(JointIndependence, IndependentPairsAreClose) {
  const auto x = sample(100000, 1), y = sample(100000, 2);
  std::vector<std::pair<double, double>> grid;
  const double z[] = {-1.2816, -0.5244, 0.0, 0.5244, 1.2816};
  for (double a : z)
    for (double b : z) grid.emplace_back(a, b);
  EXPECT_LE(joint_independence_report(x, y, grid), 0.01);
}

TEST(JointIndependence, GumbelQuantileGrid) {
  const double levels[] = {0.1, 0.5, 0.9};
  const auto grid = gumbel_quantile_grid(levels);
  ASSERT_EQ(grid.size(), 9u);
  for (const auto& [a, b] : grid) {
    const double ua = gumbel_cdf(a), ub = gumbel_cdf(b);
    EXPECT_TRUE(std::abs(ua - 0.1) < 1e-12 || std::abs(ua - 0.5) < 1e-12 || std::abs(ua - 0.9) < 1e-12);
    EXPECT_TRUE(std::abs(ub - 0.1) < 1e-12 || std::abs(ub - 0.5) < 1e-12 || std::abs(ub - 0.9) < 1e-12);
  }
}
