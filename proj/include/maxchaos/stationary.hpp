#pragma once

#include "maxchaos/drift.hpp"
#include "maxchaos/types.hpp"

namespace maxchaos {

/// Cumulative drift u -> int_0^u B(r) dr, adaptive Simpson to 1e-10.
/// Throws DomainError for u outside [0, 1].
double bfrak(const DriftFunction& drift, double u);

/// Same integral evaluated from the nearer endpoint, using int_0^1 B = 0 for
/// u > 1/2. Only meaningful for drifts that admit a stationary law; keeps
/// relative accuracy in both tails where the value is tiny.
double bfrak_balanced(const DriftFunction& drift, double u);

struct GridSpec {
  double step = 0.01;
  /// Integration stops once F < tail on the left and F > 1 - tail on the right.
  double tail = 1e-6;
  /// Location where F = 1/2.
  double anchor = 0.0;
  Index max_points = 4'000'000;
};

/// Gridded stationary distribution function of the rank-based McKean-Vlasov
/// equation, F' = bfrak(F), on a uniform grid. Values between nodes come from
/// monotone cubic Hermite interpolation using the exact nodal derivatives.
struct StationaryCdf {
  VecX grid_x;
  VecX F;
  VecX f;       ///< density bfrak(F)
  VecX fprime;  ///< B(F) * bfrak(F)
  double anchor = 0.0;
  double step = 0.0;

  double lower() const { return grid_x(0); }
  double upper() const { return grid_x(grid_x.size() - 1); }
  Index size() const { return grid_x.size(); }

  /// F(x); GridExtensionError outside [lower, upper].
  double cdf(double x) const;
  /// f(x); GridExtensionError outside [lower, upper].
  double density(double x) const;
  /// Inverse of cdf; GridExtensionError for u outside [F(lower), F(upper)].
  double quantile(double u) const;
};

/// Integrates F' = bfrak(F) from F(anchor) = 1/2 in both directions with
/// classic fixed-step RK4 until both tails fall below spec.tail.
/// Throws TailResolutionError when the grid budget is exhausted first.
StationaryCdf solve_stationary_cdf(const DriftFunction& drift, const GridSpec& spec = {});

/// Inverse-transform sample: cdf.quantile(u).
double inverse_cdf_sample(const StationaryCdf& cdf, double u);

/// Von Mises ratio (1 - F) F'' / F'^2 at x, with F'' = B(F) bfrak(F) taken
/// analytically. Throws TailDegeneracyError when F(x) >= 1 - 1e-12.
double von_mises_limit(const StationaryCdf& cdf, const DriftFunction& drift, double x);

/// The same ratio as a function of the level u = F(x).
double von_mises_ratio_at_level(const DriftFunction& drift, double u);

}  // namespace maxchaos
