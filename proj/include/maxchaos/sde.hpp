#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxchaos/models.hpp"
#include "maxchaos/rng.hpp"
#include "maxchaos/types.hpp"

namespace maxchaos {

enum class Scheme { euler };

struct SimConfig {
  Index n_particles = 1;
  double dt = 0.01;
  double horizon = 1.0;
  Index n_reps = 1;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::euler;
};

/// Throws ParameterError unless all fields are positive, dt <= horizon and
/// horizon / dt is an integer to 1e-9 relative.
void validate(const SimConfig& cfg);

/// round(horizon / dt) for a validated config.
Index step_count(const SimConfig& cfg);

/// Step index whose time is t; t must sit on the dt grid (1e-9 relative).
Index step_index_of(const SimConfig& cfg, double t);

struct ParticleEnsemble {
  double time = 0.0;
  VecX values;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ParticleEnsemble> states;
};

/// Hat H_i = (1/N) sum_j g(t, X_i, X_j) for every particle.
void empirical_interaction(const DriftInteractionModel& model, double t,
                           const Eigen::Ref<const VecX>& values, Eigen::Ref<VecX> out);

/// Per-particle drift A B(t, X_i, Hat H_i) + C.
VecX interacting_drift(const DriftInteractionModel& model, double t, const Eigen::Ref<const VecX>& values);

/// One Euler-Maruyama step of the N-particle system driven by the given
/// standard normal draws. Throws NumericOverflowError on non-finite output.
ParticleEnsemble step_interacting(const DriftInteractionModel& model, const ParticleEnsemble& ensemble,
                                  double dt, std::span<const double> noise);

/// Full trajectory of one interacting system from i.i.d. initial draws.
/// Noise for step k, particle i comes from counter (k, i) of `rng`.
Trajectory simulate_interacting(const DriftInteractionModel& model, const SimConfig& cfg, const RngSpec& rng);

/// Same dynamics, keeping only the ensembles at the requested times.
std::vector<ParticleEnsemble> simulate_interacting_at(const DriftInteractionModel& model, const SimConfig& cfg,
                                                      const RngSpec& rng, std::span<const double> times);

/// n exact draws of the McKean-Vlasov OU marginal N(m0, sigma_t^2).
VecX simulate_iid_ou(const OUModelParams& params, Index n, double t, const RngSpec& rng);

/// n exact McKean-Vlasov OU paths observed at increasing times; row i is
/// particle i, column k is time k.
MatX simulate_iid_ou_joint(const OUModelParams& params, Index n, std::span<const double> times,
                           const RngSpec& rng);

/// n independent paths of dX = B(F(X)) dt + sqrt(2) dW started from the
/// stationary law, Euler-stepped to time t.
VecX simulate_iid_rank_stationary(const StationaryCdf& cdf, const DriftFunction& drift, Index n, double t,
                                  double dt, const RngSpec& rng);

/// As above, observed at several increasing times (multiples of dt).
MatX simulate_iid_rank_stationary_at(const StationaryCdf& cdf, const DriftFunction& drift, Index n,
                                     std::span<const double> times, double dt, const RngSpec& rng);

/// Per-time average of the ensemble values.
VecX empirical_mean_path(const Trajectory& traj);

}  // namespace maxchaos
