#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace maxchaos {

/// Rank drift r -> B(r) on [0, 1] together with its derivative.
struct DriftFunction {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;

  double operator()(double r) const { return value(r); }
};

/// Polynomial drift sum_k coeffs[k] r^k.
DriftFunction polynomial_drift(std::vector<double> coeffs);

/// Registry lookup: "linear" (1 - 2r), "affine(c0,c1)", "poly(c0,c1,...)".
/// Throws ParameterError on anything else.
DriftFunction parse_drift(std::string_view spec);

/// sup |B'| over [0, 1], sampled on a uniform grid of `samples` points.
double sampled_lipschitz(const DriftFunction& drift, int samples = 10001);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth = 50);

}  // namespace maxchaos
