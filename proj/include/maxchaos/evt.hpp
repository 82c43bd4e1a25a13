#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxchaos/stationary.hpp"
#include "maxchaos/types.hpp"

namespace maxchaos {

/// Affine normalization (max - b) / a for a population of size n.
struct NormalizingConstants {
  double a = 1.0;
  double b = 0.0;
  Index n = 0;
};

struct MaximaSample {
  VecX raw;
  VecX normalized;
  NormalizingConstants constants;
};

enum class LimitFamily { gumbel, weibull, frechet };

std::string to_string(LimitFamily family);
LimitFamily parse_limit_family(const std::string& name);

struct EvtReport {
  double ks_vs_limit = 0.0;
  double ks_two_sample = 0.0;
  Index n_particles = 0;
  Index n_reps = 0;
  NormalizingConstants constants;
  LimitFamily limit_family = LimitFamily::gumbel;
};

/// b_std = sqrt(2 ln n - ln ln n - ln 4 pi); returns a = sd / b_std and
/// b = mean + sd b_std. Throws TooSmallNError when the radicand is <= 0.
NormalizingConstants gaussian_norm_constants(Index n, double mean, double sd);

/// Von Mises convention b = F^{-1}(1 - 1/n), a = 1 / (n f(b)).
NormalizingConstants norm_constants_from_cdf(const StationaryCdf& cdf, Index n);

MaximaSample normalize_maxima(const Eigen::Ref<const VecX>& raw_maxima, const NormalizingConstants& constants);

/// exp(-exp(-x)).
double gumbel_cdf(double x);

/// Standard extreme-value law of the given family; `shape` is the tail
/// index of the Frechet and Weibull laws.
double limit_cdf(LimitFamily family, double x, double shape = 1.0);

/// sup_x |F_n(x) - F(x)| evaluated at the sorted sample points.
double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf);

/// sup_x |F_x(t) - F_y(t)| between two empirical CDFs.
double ks_two_sample(std::span<const double> x, std::span<const double> y);

/// sup over grid points (x1, x2) of |joint ECDF - product of marginal ECDFs|
/// for paired samples.
double joint_independence_report(std::span<const double> maxima_t1, std::span<const double> maxima_t2,
                                 std::span<const std::pair<double, double>> grid);

/// Cartesian grid of standard-Gumbel quantiles at the given levels.
std::vector<std::pair<double, double>> gumbel_quantile_grid(std::span<const double> levels);

inline std::span<const double> as_span(const VecX& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace maxchaos
