#include "maxchaos/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "maxchaos/errors.hpp"

namespace maxchaos {

namespace {

constexpr double kQuadTol = 1e-10;

struct HermiteCell {
  double x0, h, y0, y1, m0, m1;

  // Fritsch-Carlson limiting keeps the cell monotone.
  void limit() {
    const double delta = (y1 - y0) / h;
    if (delta == 0.0) {
      m0 = m1 = 0.0;
      return;
    }
    const double a = m0 / delta;
    const double b = m1 / delta;
    if (a < 0.0) m0 = 0.0;
    if (b < 0.0) m1 = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m0 = tau * a * delta;
      m1 = tau * b * delta;
    }
  }

  double value(double t) const {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * m1;
  }

  double slope(double t) const {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * m0 + (-6 * t2 + 6 * t) * y1 +
            (3 * t2 - 2 * t) * h * m1) /
           h;
  }
};

Index locate(const StationaryCdf& cdf, double x, double& t) {
  if (!(x >= cdf.lower() && x <= cdf.upper())) {
    throw GridExtensionError("x = " + std::to_string(x) + " outside stationary grid [" +
                             std::to_string(cdf.lower()) + ", " + std::to_string(cdf.upper()) + "]");
  }
  const Index last = cdf.size() - 2;
  Index k = static_cast<Index>(std::floor((x - cdf.lower()) / cdf.step));
  k = std::clamp<Index>(k, 0, last);
  t = std::clamp((x - cdf.grid_x(k)) / cdf.step, 0.0, 1.0);
  return k;
}

HermiteCell cdf_cell(const StationaryCdf& cdf, Index k) {
  HermiteCell c{cdf.grid_x(k), cdf.step, cdf.F(k), cdf.F(k + 1), cdf.f(k), cdf.f(k + 1)};
  c.limit();
  return c;
}

double rk4_step(const DriftFunction& drift, double F, double h) {
  auto rhs = [&](double u) { return bfrak_balanced(drift, std::clamp(u, 0.0, 1.0)); };
  const double k1 = rhs(F);
  const double k2 = rhs(F + 0.5 * h * k1);
  const double k3 = rhs(F + 0.5 * h * k2);
  const double k4 = rhs(F + h * k3);
  return F + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

}  // namespace

double bfrak(const DriftFunction& drift, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("bfrak: u must lie in [0, 1]");
  return integrate_adaptive_simpson(drift.value, 0.0, u, kQuadTol);
}

double bfrak_balanced(const DriftFunction& drift, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("bfrak: u must lie in [0, 1]");
  if (u <= 0.5) return integrate_adaptive_simpson(drift.value, 0.0, u, kQuadTol);
  return -integrate_adaptive_simpson(drift.value, u, 1.0, kQuadTol);
}

double StationaryCdf::cdf(double x) const {
  double t = 0.0;
  const Index k = locate(*this, x, t);
  return cdf_cell(*this, k).value(t);
}

double StationaryCdf::density(double x) const {
  double t = 0.0;
  const Index k = locate(*this, x, t);
  HermiteCell c{grid_x(k), step, f(k), f(k + 1), fprime(k), fprime(k + 1)};
  return std::max(0.0, c.value(t));
}

double StationaryCdf::quantile(double u) const {
  if (!(u >= F(0) && u <= F(size() - 1))) {
    throw GridExtensionError("quantile level " + std::to_string(u) +
                             " outside resolved range of the stationary grid");
  }
  // First node with F > u; the answer lies in the preceding cell.
  const double* begin = F.data();
  const double* end = F.data() + F.size();
  Index k = static_cast<Index>(std::upper_bound(begin, end, u) - begin) - 1;
  k = std::clamp<Index>(k, 0, size() - 2);
  const HermiteCell c = cdf_cell(*this, k);
  if (c.y1 == c.y0) return c.x0;

  double lo = 0.0, hi = 1.0;
  double t = (u - c.y0) / (c.y1 - c.y0);
  for (int it = 0; it < 100; ++it) {
    const double r = c.value(t) - u;
    if (r > 0.0) hi = t; else lo = t;
    if (std::abs(r) <= 1e-16 || hi - lo < 1e-15) break;
    const double d = c.slope(t) * c.h;
    double next = d > 0.0 ? t - r / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return c.x0 + t * c.h;
}

StationaryCdf solve_stationary_cdf(const DriftFunction& drift, const GridSpec& spec) {
  if (!(spec.step > 0.0) || !(spec.tail > 0.0 && spec.tail < 0.5)) {
    throw ParameterError("grid spec needs step > 0 and tail in (0, 1/2)");
  }
  std::deque<double> values{0.5};
  const double h = spec.step;

  double F = 0.5;
  while (F <= 1.0 - spec.tail) {
    if (static_cast<Index>(values.size()) >= spec.max_points) {
      throw TailResolutionError("stationary grid budget exhausted before the upper tail resolved");
    }
    F = rk4_step(drift, F, h);
    values.push_back(std::min(F, 1.0));
  }
  Index left = 0;
  F = 0.5;
  while (F >= spec.tail) {
    if (static_cast<Index>(values.size()) >= spec.max_points) {
      throw TailResolutionError("stationary grid budget exhausted before the lower tail resolved");
    }
    F = rk4_step(drift, F, -h);
    values.push_front(std::max(F, 0.0));
    ++left;
  }

  StationaryCdf out;
  const Index n = static_cast<Index>(values.size());
  out.step = h;
  out.anchor = spec.anchor;
  out.grid_x.resize(n);
  out.F.resize(n);
  out.f.resize(n);
  out.fprime.resize(n);
  for (Index k = 0; k < n; ++k) {
    out.grid_x(k) = spec.anchor + static_cast<double>(k - left) * h;
    const double u = values[static_cast<std::size_t>(k)];
    out.F(k) = u;
    out.f(k) = std::max(0.0, bfrak_balanced(drift, u));
    out.fprime(k) = drift(u) * out.f(k);
  }
  return out;
}

double inverse_cdf_sample(const StationaryCdf& cdf, double u) { return cdf.quantile(u); }

double von_mises_ratio_at_level(const DriftFunction& drift, double u) {
  if (u >= 1.0 - 1e-12) throw TailDegeneracyError("von Mises ratio undefined as F -> 1");
  const double b = bfrak_balanced(drift, u);
  return (1.0 - u) * drift(u) / b;
}

double von_mises_limit(const StationaryCdf& cdf, const DriftFunction& drift, double x) {
  return von_mises_ratio_at_level(drift, cdf.cdf(x));
}

}  // namespace maxchaos
