#include "maxchaos/evt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxchaos/errors.hpp"

namespace maxchaos {

std::string to_string(LimitFamily family) {
  switch (family) {
    case LimitFamily::gumbel: return "gumbel";
    case LimitFamily::weibull: return "weibull";
    case LimitFamily::frechet: return "frechet";
  }
  return "gumbel";
}

LimitFamily parse_limit_family(const std::string& name) {
  if (name == "gumbel") return LimitFamily::gumbel;
  if (name == "weibull") return LimitFamily::weibull;
  if (name == "frechet") return LimitFamily::frechet;
  throw ParameterError("unknown limit family '" + name + "'");
}

NormalizingConstants gaussian_norm_constants(Index n, double mean, double sd) {
  if (!(sd > 0.0)) throw DomainError("gaussian_norm_constants: sd must be > 0");
  if (n < 2) throw TooSmallNError("gaussian_norm_constants: n must be >= 2");
  const double ln_n = std::log(static_cast<double>(n));
  const double radicand = 2.0 * ln_n - std::log(ln_n) - std::log(4.0 * std::numbers::pi);
  if (!(radicand > 0.0)) {
    throw TooSmallNError("gaussian_norm_constants: 2 ln n - ln ln n - ln 4pi <= 0 for n = " + std::to_string(n));
  }
  const double b_std = std::sqrt(radicand);
  return {sd / b_std, mean + sd * b_std, n};
}

NormalizingConstants norm_constants_from_cdf(const StationaryCdf& cdf, Index n) {
  if (n < 2) throw DomainError("norm_constants_from_cdf: n must be >= 2");
  const double level = 1.0 - 1.0 / static_cast<double>(n);
  const double b = cdf.quantile(level);
  const double density = cdf.density(b);
  if (!(density > 0.0)) throw DomainError("norm_constants_from_cdf: zero density at the quantile");
  return {1.0 / (static_cast<double>(n) * density), b, n};
}

MaximaSample normalize_maxima(const Eigen::Ref<const VecX>& raw, const NormalizingConstants& c) {
  if (!(c.a > 0.0)) throw DomainError("normalize_maxima: scale a must be > 0");
  MaximaSample out;
  out.raw = raw;
  out.normalized = ((raw.array() - c.b) / c.a).matrix();
  out.constants = c;
  return out;
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double limit_cdf(LimitFamily family, double x, double shape) {
  switch (family) {
    case LimitFamily::gumbel:
      return gumbel_cdf(x);
    case LimitFamily::frechet:
      return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -shape));
    case LimitFamily::weibull:
      return x >= 0.0 ? 1.0 : std::exp(-std::pow(-x, shape));
  }
  return gumbel_cdf(x);
}

double ks_one_sample(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_one_sample: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double F = cdf(sorted[i]);
    d = std::max({d, std::abs(static_cast<double>(i + 1) / n - F), std::abs(F - static_cast<double>(i) / n)});
  }
  return d;
}

double ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  // Once one sample is exhausted its ECDF is 1; the gap only shrinks afterwards.
  return d;
}

double joint_independence_report(std::span<const double> m1, std::span<const double> m2,
                                 std::span<const std::pair<double, double>> grid) {
  if (m1.size() != m2.size()) throw DomainError("joint_independence_report: paired samples differ in length");
  if (m1.empty()) throw DomainError("joint_independence_report: empty sample");
  const double n = static_cast<double>(m1.size());
  double d = 0.0;
  for (const auto& [x1, x2] : grid) {
    std::size_t c1 = 0, c2 = 0, both = 0;
    for (std::size_t r = 0; r < m1.size(); ++r) {
      const bool a = m1[r] <= x1;
      const bool b = m2[r] <= x2;
      c1 += a;
      c2 += b;
      both += a && b;
    }
    const double joint = static_cast<double>(both) / n;
    const double product = (static_cast<double>(c1) / n) * (static_cast<double>(c2) / n);
    d = std::max(d, std::abs(joint - product));
  }
  return d;
}

std::vector<std::pair<double, double>> gumbel_quantile_grid(std::span<const double> levels) {
  std::vector<double> q;
  for (double p : levels) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("gumbel_quantile_grid: levels must lie in (0, 1)");
    q.push_back(-std::log(-std::log(p)));
  }
  std::vector<std::pair<double, double>> grid;
  for (double a : q)
    for (double b : q) grid.emplace_back(a, b);
  return grid;
}

}  // namespace maxchaos
