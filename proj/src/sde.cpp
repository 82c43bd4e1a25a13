#include "maxchaos/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "maxchaos/errors.hpp"

namespace maxchaos {

namespace {

// Particle i's recorded past, x_0 .. x_{k-1}, when the model reads history.
struct History {
  const MatX* values = nullptr;
  Index rows = 0;

  std::span<const double> of(Index i) const {
    if (values == nullptr || rows == 0) return {};
    return {values->col(i).data(), static_cast<std::size_t>(rows)};
  }
};

void interaction_values(const DriftInteractionModel& model, double t, const Eigen::Ref<const VecX>& x,
                        const History& hist, Eigen::Ref<VecX> out) {
  const Index n = x.size();
  switch (model.interaction) {
    case InteractionKind::linear_mean:
      out.setConstant(x.mean());
      return;
    case InteractionKind::rank_indicator: {
      // F^N(X_i) counts every j with X_j <= X_i, i itself and ties included,
      // so a run of tied values all get the position just past the run.
      std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = {x(i), i};
      std::sort(order.begin(), order.end());
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t lo = 0; lo < order.size();) {
        std::size_t hi = lo + 1;
        while (hi < order.size() && order[hi].first == order[lo].first) ++hi;
        for (std::size_t k = lo; k < hi; ++k) out(order[k].second) = static_cast<double>(hi) * inv_n;
        lo = hi;
      }
      return;
    }
    case InteractionKind::generic:
      for (Index i = 0; i < n; ++i) {
        const PathView xi{x(i), hist.of(i)};
        double acc = 0.0;
        for (Index j = 0; j < n; ++j) acc += model.interaction_fn(t, xi, PathView{x(j), hist.of(j)});
        out(i) = acc / static_cast<double>(n);
      }
      return;
  }
}

// drift(i) = A B(t, X_i, Hat H_i) + C and vol(i) = A.
void drift_and_volatility(const DriftInteractionModel& model, double t, const Eigen::Ref<const VecX>& x,
                          const History& hist, VecX& interaction, VecX& drift, VecX& vol) {
  const Index n = x.size();
  interaction.resize(n);
  drift.resize(n);
  vol.resize(n);
  interaction_values(model, t, x, hist, interaction);
  for (Index i = 0; i < n; ++i) {
    const PathView xi{x(i), hist.of(i)};
    const double a = model.volatility(t, xi);
    vol(i) = a;
    drift(i) = a * model.drift_shape(t, xi, interaction(i)) + model.drift_extra(t, xi);
  }
}

void euler_update(VecX& x, const VecX& drift, const VecX& vol, std::span<const double> noise, double dt,
                  Index step) {
  const double sqdt = std::sqrt(dt);
  for (Index i = 0; i < x.size(); ++i) {
    x(i) += drift(i) * dt + vol(i) * sqdt * noise[static_cast<std::size_t>(i)];
    if (!std::isfinite(x(i))) {
      std::ostringstream msg;
      msg << "non-finite particle state at step " << step << " (particle " << i << ")";
      throw NumericOverflowError(msg.str());
    }
  }
}

template <typename Observer>
void run_interacting(const DriftInteractionModel& model, const SimConfig& cfg, const RngSpec& rng,
                     Observer&& observe) {
  validate(cfg);
  const Index n = cfg.n_particles;
  const Index steps = step_count(cfg);

  VecX x(n);
  model.sample_initial(rng, std::span<double>(x.data(), static_cast<std::size_t>(n)));

  MatX past;
  if (model.path_dependent) {
    past.resize(steps + 1, n);
    past.row(0) = x.transpose();
  }
  observe(Index{0}, x);

  VecX noise(n), interaction, drift, vol;
  for (Index k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * cfg.dt;
    const History hist{model.path_dependent ? &past : nullptr, model.path_dependent ? k - 1 : 0};
    drift_and_volatility(model, t, x, hist, interaction, drift, vol);
    fill_normals(rng, static_cast<std::uint64_t>(k), std::span<double>(noise.data(), static_cast<std::size_t>(n)));
    euler_update(x, drift, vol, std::span<const double>(noise.data(), static_cast<std::size_t>(n)), cfg.dt, k);
    if (model.path_dependent) past.row(k) = x.transpose();
    observe(k, x);
  }
}

std::vector<Index> checked_time_steps(const SimConfig& cfg, std::span<const double> times) {
  std::vector<Index> out;
  out.reserve(times.size());
  for (double t : times) {
    const Index k = step_index_of(cfg, t);
    if (!out.empty() && k <= out.back()) throw DomainError("observation times must be strictly increasing");
    out.push_back(k);
  }
  return out;
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.n_particles <= 0) throw ParameterError("n_particles must be positive");
  if (cfg.n_reps <= 0) throw ParameterError("n_reps must be positive");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ParameterError("dt must be positive");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ParameterError("horizon must be positive");
  if (cfg.dt > cfg.horizon) throw ParameterError("dt must not exceed horizon");
  const double ratio = cfg.horizon / cfg.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ParameterError("horizon / dt must be an integer step count");
  }
}

Index step_count(const SimConfig& cfg) { return static_cast<Index>(std::llround(cfg.horizon / cfg.dt)); }

Index step_index_of(const SimConfig& cfg, double t) {
  if (!(t >= 0.0) || t > cfg.horizon * (1.0 + 1e-12)) {
    throw DomainError("observation time outside [0, horizon]");
  }
  const double ratio = t / cfg.dt;
  const double k = std::round(ratio);
  if (std::abs(ratio - k) > 1e-9 * std::max(1.0, ratio)) {
    throw DomainError("observation time is not a multiple of dt");
  }
  return static_cast<Index>(k);
}

void empirical_interaction(const DriftInteractionModel& model, double t, const Eigen::Ref<const VecX>& values,
                           Eigen::Ref<VecX> out) {
  if (out.size() != values.size()) throw DomainError("empirical_interaction: size mismatch");
  interaction_values(model, t, values, History{}, out);
}

VecX interacting_drift(const DriftInteractionModel& model, double t, const Eigen::Ref<const VecX>& values) {
  VecX interaction, drift, vol;
  drift_and_volatility(model, t, values, History{}, interaction, drift, vol);
  return drift;
}

ParticleEnsemble step_interacting(const DriftInteractionModel& model, const ParticleEnsemble& ensemble,
                                  double dt, std::span<const double> noise) {
  if (static_cast<Index>(noise.size()) != ensemble.values.size()) {
    throw DomainError("step_interacting: noise length must equal the number of particles");
  }
  if (!(dt > 0.0)) throw DomainError("step_interacting: dt must be positive");
  VecX interaction, drift, vol;
  drift_and_volatility(model, ensemble.time, ensemble.values, History{}, interaction, drift, vol);
  ParticleEnsemble next{ensemble.time + dt, ensemble.values};
  euler_update(next.values, drift, vol, noise, dt, 1);
  return next;
}

Trajectory simulate_interacting(const DriftInteractionModel& model, const SimConfig& cfg, const RngSpec& rng) {
  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(step_count(cfg) + 1));
  traj.states.reserve(traj.times.capacity());
  run_interacting(model, cfg, rng, [&](Index k, const VecX& x) {
    const double t = static_cast<double>(k) * cfg.dt;
    traj.times.push_back(t);
    traj.states.push_back({t, x});
  });
  return traj;
}

std::vector<ParticleEnsemble> simulate_interacting_at(const DriftInteractionModel& model, const SimConfig& cfg,
                                                      const RngSpec& rng, std::span<const double> times) {
  validate(cfg);
  const auto wanted = checked_time_steps(cfg, times);
  std::vector<ParticleEnsemble> out;
  out.reserve(wanted.size());
  std::size_t next = 0;
  SimConfig truncated = cfg;
  if (!wanted.empty()) truncated.horizon = static_cast<double>(std::max<Index>(wanted.back(), 1)) * cfg.dt;
  run_interacting(model, truncated, rng, [&](Index k, const VecX& x) {
    if (next < wanted.size() && wanted[next] == k) {
      out.push_back({static_cast<double>(k) * cfg.dt, x});
      ++next;
    }
  });
  return out;
}

MatX simulate_iid_ou_joint(const OUModelParams& params, Index n, std::span<const double> times,
                           const RngSpec& rng) {
  validate(params);
  if (n < 0) throw DomainError("simulate_iid_ou: n must be >= 0");
  MatX out(n, static_cast<Index>(times.size()));
  if (n == 0 || times.empty()) return out;
  VecX z(n);
  auto draw = [&](std::uint64_t step) { fill_normals(rng, step, std::span<double>(z.data(), static_cast<std::size_t>(n))); };

  double prev = times[0];
  draw(0);
  out.col(0) = (params.m0 + std::sqrt(ou_variance(params, prev)) * z.array()).matrix();
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double gap = times[k] - prev;
    if (gap < 0.0) throw DomainError("simulate_iid_ou: times must be nondecreasing");
    const double decay = std::exp(-params.kappa * gap);
    const double kick = params.sigma * std::sqrt(params.kappa == 0.0 ? gap : -std::expm1(-2.0 * params.kappa * gap) / (2.0 * params.kappa));
    draw(k);
    const auto c = static_cast<Index>(k);
    out.col(c) = (params.m0 + decay * (out.col(c - 1).array() - params.m0) + kick * z.array()).matrix();
    prev = times[k];
  }
  return out;
}

VecX simulate_iid_ou(const OUModelParams& params, Index n, double t, const RngSpec& rng) {
  const double times[] = {t};
  if (!(t >= 0.0)) throw DomainError("simulate_iid_ou: t must be >= 0");
  return simulate_iid_ou_joint(params, n, times, rng).col(0);
}

MatX simulate_iid_rank_stationary_at(const StationaryCdf& cdf, const DriftFunction& drift, Index n,
                                     std::span<const double> times, double dt, const RngSpec& rng) {
  if (n < 0) throw DomainError("simulate_iid_rank_stationary: n must be >= 0");
  if (!(dt > 0.0)) throw DomainError("simulate_iid_rank_stationary: dt must be positive");
  MatX out(n, static_cast<Index>(times.size()));
  if (n == 0 || times.empty()) return out;

  std::vector<Index> wanted;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("simulate_iid_rank_stationary: t must be >= 0");
    const double ratio = t / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw DomainError("simulate_iid_rank_stationary: t must be a multiple of dt");
    }
    const auto k = static_cast<Index>(std::llround(ratio));
    if (!wanted.empty() && k < wanted.back()) throw DomainError("times must be nondecreasing");
    wanted.push_back(k);
  }

  VecX x(n), z(n);
  fill_uniforms(rng, 0, std::span<double>(x.data(), static_cast<std::size_t>(n)));
  const double lo = cdf.F(0);
  const double hi = cdf.F(cdf.size() - 1);
  for (Index i = 0; i < n; ++i) x(i) = cdf.quantile(std::clamp(x(i), lo, hi));

  const double noise_scale = std::numbers::sqrt2 * std::sqrt(dt);
  std::size_t next = 0;
  auto record = [&](Index k) {
    while (next < wanted.size() && wanted[next] == k) out.col(static_cast<Index>(next++)) = x;
  };
  record(0);
  for (Index k = 1; next < wanted.size(); ++k) {
    fill_normals(rng, static_cast<std::uint64_t>(k), std::span<double>(z.data(), static_cast<std::size_t>(n)));
    for (Index i = 0; i < n; ++i) x(i) += drift(cdf.cdf(x(i))) * dt + noise_scale * z(i);
    record(k);
  }
  return out;
}

VecX simulate_iid_rank_stationary(const StationaryCdf& cdf, const DriftFunction& drift, Index n, double t,
                                  double dt, const RngSpec& rng) {
  const double times[] = {t};
  return simulate_iid_rank_stationary_at(cdf, drift, n, times, dt, rng).col(0);
}

VecX empirical_mean_path(const Trajectory& traj) {
  if (traj.states.empty()) throw DomainError("empirical_mean_path: empty trajectory");
  VecX out(static_cast<Index>(traj.states.size()));
  for (std::size_t k = 0; k < traj.states.size(); ++k) out(static_cast<Index>(k)) = traj.states[k].values.mean();
  return out;
}

}  // namespace maxchaos
