#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxchaos/drift.hpp"
#include "maxchaos/rng.hpp"
#include "maxchaos/stationary.hpp"
#include "maxchaos/types.hpp"

namespace maxchaos {

/// How the empirical integral (1/N) sum_j g(t, X_i, X_j) is evaluated.
/// `linear_mean` (g = y_t) and `rank_indicator` (g = 1{y_t <= x_t}) have
/// O(N) and O(N log N) fast paths; `generic` calls g for all N^2 pairs.
enum class InteractionKind { generic, linear_mean, rank_indicator };

struct DeclaredBounds {
  double volatility = 0.0;    ///< sup |A|
  double drift_extra = 0.0;   ///< sup |C|
  double drift_deriv = 0.0;   ///< sup |dB/dr|
};

/// Closed interval used when probing coefficients on a grid.
struct Interval {
  double lo = -10.0;
  double hi = 10.0;
};

struct OUModelParams {
  double kappa = 1.0;
  double sigma = 1.0;
  double m0 = 0.0;
  double sigma0 = 1.0;
};

struct RankBasedModelParams {
  DriftFunction drift;
  /// Declared sup |B'| on [0, 1]; zero means "derive it by sampling".
  double lipschitz_bound = 0.0;
};

/// Coefficients of the interacting system
///   dX^i = A (B(t, X^i, int g(t, X^i, y) mu^N(dy)) dt + dW^i) + C dt
/// plus the closed-form law integral h(t, x) = int g(t, x, y) mu_t(dy) of the
/// limiting McKean-Vlasov equation and the moment envelope K(t).
/// Immutable once built; safe to share between threads.
struct DriftInteractionModel {
  std::string name;
  InteractionKind interaction = InteractionKind::generic;

  std::function<double(double, PathView)> volatility;
  std::function<double(double, PathView, double)> drift_shape;
  std::function<double(double, PathView)> drift_extra;
  std::function<double(double, PathView, PathView)> interaction_fn;
  std::function<double(double, PathView, double)> drift_shape_deriv;
  std::function<double(double)> moment_envelope;
  std::function<double(double, PathView)> mean_interaction;

  DeclaredBounds bounds;
  Interval path_probe;
  Interval r_probe;
  bool path_dependent = false;

  /// Fills `out` with i.i.d. draws from the initial law, using counter step 0
  /// of the given stream.
  std::function<void(const RngSpec&, std::span<double>)> sample_initial;

  std::optional<OUModelParams> ou;
  std::shared_ptr<const DriftFunction> rank_drift;
  std::shared_ptr<const StationaryCdf> stationary;
};

void validate(const OUModelParams& params);

DriftInteractionModel build_ou_model(const OUModelParams& params);

/// Throws ModelInvalidError unless B(0), B(1) != 0, bfrak > 0 on (0, 1) and
/// |bfrak(1)| <= 1e-8. The stationary law is solved with tails down to
/// 1e-12 so simulated particles stay on the grid.
DriftInteractionModel build_rank_model(const RankBasedModelParams& params);

/// sigma_t^2 = e^{-2 kappa t} sigma0^2 + (1 - e^{-2 kappa t}) sigma^2 / (2 kappa),
/// with the kappa = 0 limit sigma0^2 + sigma^2 t.
double ou_variance(const OUModelParams& params, double t);

/// Corr(X_s, X_t) for s <= t.
double ou_correlation(const OUModelParams& params, double s, double t);

struct BoundCheck {
  std::string name;
  double declared = 0.0;
  double observed = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::vector<BoundCheck> checks;
  std::vector<std::string> notes;
  bool passed() const;
};

/// Grid-sampled confirmation of the declared coefficient bounds and of the
/// continuity and sign of K on [0, horizon].
ValidationReport validate_assumptions(const DriftInteractionModel& model, double horizon);

}  // namespace maxchaos
