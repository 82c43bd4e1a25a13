#include "maxchaos/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "maxchaos/errors.hpp"

namespace maxchaos {

namespace {

// (1 - e^{-2 kappa t}) / (2 kappa), continuous at kappa = 0.
double relaxation_weight(double kappa, double t) {
  if (kappa == 0.0) return t;
  return -std::expm1(-2.0 * kappa * t) / (2.0 * kappa);
}

// (e^{2 kappa t} - 1) / (2 kappa), continuous at kappa = 0.
double growth_weight(double kappa, double t) {
  if (kappa == 0.0) return t;
  return std::expm1(2.0 * kappa * t) / (2.0 * kappa);
}

}  // namespace

void validate(const OUModelParams& p) {
  if (!std::isfinite(p.kappa) || !std::isfinite(p.m0)) {
    throw ParameterError("OU parameters kappa and m0 must be finite");
  }
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw ParameterError("OU sigma must be > 0");
  if (!(p.sigma0 > 0.0) || !std::isfinite(p.sigma0)) throw ParameterError("OU sigma0 must be > 0");
}

double ou_variance(const OUModelParams& p, double t) {
  if (!(t >= 0.0)) throw DomainError("ou_variance: t must be >= 0");
  if (std::isinf(t)) {
    if (p.kappa > 0.0) return p.sigma * p.sigma / (2.0 * p.kappa);
    throw DomainError("ou_variance: no stationary variance for kappa <= 0");
  }
  const double decay = std::exp(-2.0 * p.kappa * t);
  return decay * p.sigma0 * p.sigma0 + relaxation_weight(p.kappa, t) * p.sigma * p.sigma;
}

double ou_correlation(const OUModelParams& p, double s, double t) {
  if (!(s >= 0.0)) throw DomainError("ou_correlation: s must be >= 0");
  if (s > t) throw DomainError("ou_correlation: requires s <= t");
  if (s == t) return 1.0;
  // (alpha + e^{2 kappa u} - 1) / (2 kappa) with alpha = 2 kappa sigma0^2 / sigma^2.
  const double base = p.sigma0 * p.sigma0 / (p.sigma * p.sigma);
  return std::sqrt((base + growth_weight(p.kappa, s)) / (base + growth_weight(p.kappa, t)));
}

DriftInteractionModel build_ou_model(const OUModelParams& params) {
  validate(params);
  const OUModelParams p = params;
  DriftInteractionModel m;
  m.name = "ou";
  m.interaction = InteractionKind::linear_mean;
  m.volatility = [s = p.sigma](double, PathView) { return s; };
  m.drift_shape = [k = p.kappa, s = p.sigma](double, PathView x, double r) { return -k * (x.now - r) / s; };
  m.drift_extra = [](double, PathView) { return 0.0; };
  m.interaction_fn = [](double, PathView, PathView y) { return y.now; };
  m.drift_shape_deriv = [k = p.kappa, s = p.sigma](double, PathView, double) { return k / s; };
  // 2 (sigma_t^2 + m0^2) dominates the even Gaussian moments for m0 = 0 via
  // (2p - 1)!! <= 2^p p!; with m0 != 0 it is a working envelope only.
  m.moment_envelope = [p](double t) { return 2.0 * (ou_variance(p, t) + p.m0 * p.m0); };
  m.mean_interaction = [m0 = p.m0](double, PathView) { return m0; };

  m.bounds = {p.sigma, 0.0, std::abs(p.kappa) / p.sigma};
  const double spread = 10.0 * std::max(p.sigma0, p.sigma);
  m.path_probe = {p.m0 - spread, p.m0 + spread};
  m.r_probe = m.path_probe;
  m.sample_initial = [p](const RngSpec& rng, std::span<double> out) {
    fill_normals(rng, 0, out);
    for (double& v : out) v = p.m0 + p.sigma0 * v;
  };
  m.ou = p;
  return m;
}

DriftInteractionModel build_rank_model(const RankBasedModelParams& params) {
  const DriftFunction& drift = params.drift;
  if (!drift.value || !drift.derivative) throw ParameterError("rank model needs a drift function");
  if (params.lipschitz_bound < 0.0) throw ParameterError("lipschitz bound must be >= 0");

  if (drift(0.0) == 0.0 || drift(1.0) == 0.0) {
    throw ModelInvalidError("rank drift '" + drift.name + "' must satisfy B(0) != 0 and B(1) != 0");
  }
  const double total = bfrak(drift, 1.0);
  if (std::abs(total) > 1e-8) {
    std::ostringstream msg;
    msg << "rank drift '" << drift.name << "' has bfrak(1) = " << total << " != 0";
    throw ModelInvalidError(msg.str());
  }
  constexpr int kInterior = 999;
  for (int k = 1; k <= kInterior; ++k) {
    const double u = static_cast<double>(k) / (kInterior + 1);
    if (!(bfrak_balanced(drift, u) > 0.0)) {
      throw ModelInvalidError("rank drift '" + drift.name + "' has bfrak <= 0 inside (0, 1)");
    }
  }

  auto shared_drift = std::make_shared<const DriftFunction>(drift);
  GridSpec grid;
  grid.tail = 1e-12;
  auto cdf = std::make_shared<const StationaryCdf>(solve_stationary_cdf(drift, grid));

  DriftInteractionModel m;
  m.name = "rank";
  m.interaction = InteractionKind::rank_indicator;
  m.volatility = [](double, PathView) { return std::numbers::sqrt2; };
  // The particle drift is A * B = B(r) with A = sqrt 2, so the shape carries 1 / sqrt 2.
  m.drift_shape = [d = shared_drift](double, PathView, double r) { return (*d)(r) / std::numbers::sqrt2; };
  m.drift_extra = [](double, PathView) { return 0.0; };
  m.interaction_fn = [](double, PathView x, PathView y) { return y.now <= x.now ? 1.0 : 0.0; };
  m.drift_shape_deriv = [d = shared_drift](double, PathView, double r) {
    return d->derivative(r) / std::numbers::sqrt2;
  };
  m.moment_envelope = [](double) { return 1.0; };
  m.mean_interaction = [cdf](double, PathView x) { return cdf->cdf(x.now); };

  const double lip = params.lipschitz_bound > 0.0 ? params.lipschitz_bound : sampled_lipschitz(drift);
  m.bounds = {std::numbers::sqrt2, 0.0, lip / std::numbers::sqrt2};
  m.path_probe = {cdf->lower(), cdf->upper()};
  m.r_probe = {0.0, 1.0};
  // Levels are clamped to the resolved range; the clipped mass is below 1e-12.
  m.sample_initial = [cdf](const RngSpec& rng, std::span<double> out) {
    fill_uniforms(rng, 0, out);
    const double lo = cdf->F(0);
    const double hi = cdf->F(cdf->size() - 1);
    for (double& v : out) v = cdf->quantile(std::clamp(v, lo, hi));
  };
  m.rank_drift = shared_drift;
  m.stationary = cdf;
  return m;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

ValidationReport validate_assumptions(const DriftInteractionModel& model, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("validate_assumptions: horizon must be > 0");
  constexpr int kTimes = 101;
  constexpr int kPaths = 41;
  constexpr int kRates = 41;
  constexpr double kSlack = 1e-12;

  auto grid = [](const Interval& iv, int n, int k) { return iv.lo + (iv.hi - iv.lo) * k / (n - 1); };

  double sup_a = 0.0, sup_c = 0.0, sup_d = 0.0;
  for (int it = 0; it < kTimes; ++it) {
    const double t = horizon * it / (kTimes - 1);
    for (int ix = 0; ix < kPaths; ++ix) {
      const PathView x{grid(model.path_probe, kPaths, ix), {}};
      sup_a = std::max(sup_a, std::abs(model.volatility(t, x)));
      sup_c = std::max(sup_c, std::abs(model.drift_extra(t, x)));
      for (int ir = 0; ir < kRates; ++ir) {
        const double d = std::abs(model.drift_shape_deriv(t, x, grid(model.r_probe, kRates, ir)));
        sup_d = std::isfinite(d) ? std::max(sup_d, d) : INFINITY;
      }
    }
  }

  ValidationReport report;
  auto bound_check = [&](std::string name, double declared, double observed) {
    report.checks.push_back({std::move(name), declared, observed,
                             std::isfinite(observed) && observed <= declared * (1.0 + 1e-9) + kSlack});
  };
  bound_check("sup|A| (volatility)", model.bounds.volatility, sup_a);
  bound_check("sup|C| (drift_extra)", model.bounds.drift_extra, sup_c);
  bound_check("sup|dB/dr| (drift_shape_deriv)", model.bounds.drift_deriv, sup_d);

  // Continuity of K: the largest increment must shrink when the grid is refined.
  auto max_jump = [&](int n, double& min_value) {
    double jump = 0.0;
    double prev = model.moment_envelope(0.0);
    min_value = prev;
    for (int k = 1; k < n; ++k) {
      const double v = model.moment_envelope(horizon * k / (n - 1));
      jump = std::max(jump, std::isfinite(v) ? std::abs(v - prev) : INFINITY);
      min_value = std::min(min_value, v);
      prev = v;
    }
    return jump;
  };
  double min_coarse = 0.0, min_fine = 0.0;
  const double coarse = max_jump(1001, min_coarse);
  const double fine = max_jump(2001, min_fine);
  report.checks.push_back({"K continuous on [0, horizon]", coarse, fine,
                           std::isfinite(fine) && (fine <= 0.75 * coarse || fine <= 1e-9)});
  report.checks.push_back({"K >= 0", 0.0, std::min(min_coarse, min_fine),
                           std::min(min_coarse, min_fine) >= 0.0});

  if (model.ou) {
    report.notes.push_back(
        "moment bounds hold analytically: g(t,x,y) = y_t is Gaussian under the McKean-Vlasov law "
        "(sub-Gaussian centered interaction with bounded variance proxy)");
  } else if (model.stationary) {
    report.notes.push_back(
        "moment bounds hold analytically: g is an indicator bounded by 1 and the centered summands "
        "are pairwise i.i.d. given X^i (Hoeffding)");
  } else {
    report.notes.push_back("custom model: moment bounds on g are not verified analytically");
  }
  return report;
}

}  // namespace maxchaos
