#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxchaos/errors.hpp"
#include "maxchaos/lemmas.hpp"
#include "maxchaos/parallel.hpp"

namespace maxchaos {

namespace {

constexpr double kLogZCap = 700.0;

Index mc_steps(double dt, double horizon) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw ParameterError("Monte Carlo grid needs dt > 0 and horizon >= 0");
  const double ratio = horizon / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw ParameterError("Monte Carlo horizon must be a multiple of dt");
  }
  return static_cast<Index>(std::llround(ratio));
}

// N i.i.d. McKean-Vlasov particles under P, Euler-stepped with the law
// integral h in place of the empirical one. At every step the visitor sees
// the pre-step state, the Brownian increments and Delta B^{i,N}.
class IidSystem {
 public:
  IidSystem(const DriftInteractionModel& model, Index n, double dt, const RngSpec& rng)
      : model_(model), dt_(dt), sqdt_(std::sqrt(dt)), rng_(rng), x_(n), dw_(n), emp_(n), law_(n), delta_b_(n) {
    model_.sample_initial(rng_, std::span<double>(x_.data(), static_cast<std::size_t>(n)));
  }

  const VecX& state() const { return x_; }
  const VecX& increments() const { return dw_; }
  const VecX& delta_b() const { return delta_b_; }
  double time() const { return t_; }

  /// Draws the increments for step k (1-based) and computes Delta B at the
  /// current (left) point without moving the particles.
  void prepare(Index k) {
    const Index n = x_.size();
    fill_normals(rng_, static_cast<std::uint64_t>(k), std::span<double>(dw_.data(), static_cast<std::size_t>(n)));
    dw_ *= sqdt_;
    empirical_interaction(model_, t_, x_, emp_);
    for (Index i = 0; i < n; ++i) {
      const PathView xi{x_(i), {}};
      law_(i) = model_.mean_interaction(t_, xi);
      delta_b_(i) = model_.drift_shape(t_, xi, emp_(i)) - model_.drift_shape(t_, xi, law_(i));
    }
  }

  /// Moves every particle along its McKean-Vlasov Euler step.
  void advance(Index k) {
    for (Index i = 0; i < x_.size(); ++i) {
      const PathView xi{x_(i), {}};
      const double a = model_.volatility(t_, xi);
      x_(i) += (a * model_.drift_shape(t_, xi, law_(i)) + model_.drift_extra(t_, xi)) * dt_ + a * dw_(i);
      if (!std::isfinite(x_(i))) {
        throw NumericOverflowError("non-finite McKean-Vlasov state at step " + std::to_string(k));
      }
    }
    t_ = static_cast<double>(k) * dt_;
  }

  double law_integral(Index i) const { return law_(i); }

 private:
  const DriftInteractionModel& model_;
  double dt_, sqdt_;
  RngSpec rng_;
  double t_ = 0.0;
  VecX x_, dw_, emp_, law_, delta_b_;
};

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  Index count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double se() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

// Terminal (X^1_T, log Z_T) of one replicate.
struct Terminal {
  double x1 = 0.0;
  double log_z = 0.0;
  bool capped = false;
};

Terminal density_terminal(const DriftInteractionModel& model, Index n, const McConfig& cfg, const RngSpec& rng) {
  const Index steps = mc_steps(cfg.dt, cfg.horizon);
  IidSystem sys(model, n, cfg.dt, rng);
  double M = 0.0, Q = 0.0;
  bool capped = false;
  for (Index k = 1; k <= steps; ++k) {
    sys.prepare(k);
    M += sys.delta_b().dot(sys.increments());
    Q += sys.delta_b().squaredNorm() * cfg.dt;
    capped = capped || (M - 0.5 * Q > kLogZCap);
    sys.advance(k);
  }
  return {sys.state()(0), M - 0.5 * Q, capped};
}

void check_mc(const McConfig& cfg, Index n) {
  if (n < 1) throw ParameterError("Monte Carlo estimators need N >= 1");
  if (cfg.reps < 1) throw ParameterError("Monte Carlo estimators need reps >= 1");
}

}  // namespace

DensityPath simulate_density_process(const DriftInteractionModel& model, Index n, const McConfig& cfg,
                                     const RngSpec& rng) {
  check_mc(cfg, n);
  const Index steps = mc_steps(cfg.dt, cfg.horizon);
  DensityPath out;
  out.times = VecX::LinSpaced(steps + 1, 0.0, static_cast<double>(steps) * cfg.dt);
  out.M = VecX::Zero(steps + 1);
  out.quad_var = VecX::Zero(steps + 1);
  out.log_Z = VecX::Zero(steps + 1);
  out.Z = VecX::Ones(steps + 1);

  IidSystem sys(model, n, cfg.dt, rng);
  for (Index k = 1; k <= steps; ++k) {
    sys.prepare(k);
    out.M(k) = out.M(k - 1) + sys.delta_b().dot(sys.increments());
    out.quad_var(k) = out.quad_var(k - 1) + sys.delta_b().squaredNorm() * cfg.dt;
    out.log_Z(k) = out.M(k) - 0.5 * out.quad_var(k);
    out.capped = out.capped || out.log_Z(k) > kLogZCap;
    out.Z(k) = out.capped ? INFINITY : std::exp(out.log_Z(k));
    sys.advance(k);
  }
  return out;
}

MartingaleStats density_martingale_mc(const DriftInteractionModel& model, Index n, const McConfig& cfg) {
  check_mc(cfg, n);
  std::vector<Terminal> terminal(static_cast<std::size_t>(cfg.reps));
  parallel_for(terminal.size(), cfg.workers, [&](std::size_t r) {
    terminal[r] = density_terminal(model, n, cfg, make_stream(cfg.seed, StreamPurpose::density, r));
  });
  Accumulator acc;
  MartingaleStats out;
  for (const auto& t : terminal) {
    if (t.capped) {
      ++out.capped;
      continue;
    }
    acc.add(std::exp(t.log_z));
  }
  out.mean_Z = acc.mean();
  out.se = acc.se();
  out.reps_used = acc.count;
  return out;
}

GirsanovResult girsanov_consistency(const DriftInteractionModel& model, Index n,
                                    const std::function<double(double)>& observable, const McConfig& cfg) {
  check_mc(cfg, n);
  const auto reps = static_cast<std::size_t>(cfg.reps);
  std::vector<Terminal> weighted(reps);
  std::vector<double> direct(reps);

  SimConfig sim;
  sim.n_particles = n;
  sim.dt = cfg.dt;
  sim.horizon = cfg.horizon;
  sim.n_reps = cfg.reps;
  sim.seed = cfg.seed;
  const double final_time[] = {cfg.horizon};

  parallel_for(reps, cfg.workers, [&](std::size_t r) {
    weighted[r] = density_terminal(model, n, cfg, make_stream(cfg.seed, StreamPurpose::density, r));
    const auto snap = simulate_interacting_at(model, sim, make_stream(cfg.seed, StreamPurpose::direct, r), final_time);
    direct[r] = observable(snap.back().values(0));
  });

  GirsanovResult out;
  Accumulator lhs, rhs;
  for (std::size_t r = 0; r < reps; ++r) {
    rhs.add(direct[r]);
    if (weighted[r].capped) {
      ++out.capped;
      continue;
    }
    lhs.add(observable(weighted[r].x1) * std::exp(weighted[r].log_z));
  }
  out.lhs = lhs.mean();
  out.rhs = rhs.mean();
  out.lhs_se = lhs.se();
  out.rhs_se = rhs.se();
  out.se = std::hypot(out.lhs_se, out.rhs_se);
  return out;
}

GirsanovResult girsanov_consistency(const DriftInteractionModel& model, Index n, double threshold,
                                    const McConfig& cfg) {
  return girsanov_consistency(model, n, [threshold](double x) { return x > threshold ? 1.0 : 0.0; }, cfg);
}

double GProcessSpec::operator()(double t, PathView xi, PathView xj) const {
  const double h = model.mean_interaction(t, xi);
  return model.drift_shape_deriv(t, xi, h) * (model.interaction_fn(t, xi, xj) - h);
}

std::vector<McEstimate> zero_expectation_mc(const GProcessSpec& gspec, std::span<const IndexConfig> cfgs,
                                            std::span<const double> partition, double threshold,
                                            const McConfig& mc) {
  if (cfgs.empty()) return {};
  const int N = cfgs.front().n_particles;
  for (const auto& cfg : cfgs) {
    validate(cfg);
    if (cfg.n_particles != N) throw DomainError("zero_expectation_mc: configs must share N");
    if (cfg.total_length() > 3 || N > 6) throw BudgetError("zero_expectation_mc: requires S <= 3 and N <= 6");
    if (partition.size() != cfg.blocks.size() + 1) {
      throw DomainError("zero_expectation_mc: partition must have one more point than there are blocks");
    }
  }
  check_mc(mc, N);
  if (partition.front() != 0.0) throw DomainError("zero_expectation_mc: partition must start at 0");
  std::vector<Index> edges;
  for (double T : partition) {
    const Index k = mc_steps(mc.dt, T);
    if (!edges.empty() && k < edges.back()) throw DomainError("zero_expectation_mc: partition must be nondecreasing");
    edges.push_back(k);
  }
  const Index steps = edges.back();

  const std::size_t n_cfg = cfgs.size();
  const auto reps = static_cast<std::size_t>(mc.reps);
  std::vector<double> samples(reps * n_cfg);

  parallel_for(reps, mc.workers, [&](std::size_t r) {
    IidSystem sys(gspec.model, N, mc.dt, make_stream(mc.seed, StreamPurpose::lemma, r));
    // levels[c][l] holds the running inner integral at depth l of the block
    // currently being integrated for config c; products[c] the finished blocks.
    std::vector<std::vector<double>> levels(n_cfg);
    std::vector<double> products(n_cfg, 1.0);
    std::size_t block = 0;
    auto open_block = [&](std::size_t b) {
      for (std::size_t c = 0; c < n_cfg; ++c) levels[c].assign(cfgs[c].blocks[b].i.size(), 0.0);
    };
    auto close_block = [&] {
      for (std::size_t c = 0; c < n_cfg; ++c) products[c] *= levels[c].front();
    };
    open_block(0);
    // Empty leading blocks (T_{a-1} = T_a) contribute a zero integral.
    while (block + 1 < edges.size() - 1 && edges[block + 1] == 0) {
      close_block();
      open_block(++block);
    }
    for (Index k = 1; k <= steps; ++k) {
      sys.prepare(k);
      const double t = sys.time();
      const VecX& x = sys.state();
      const VecX& dw = sys.increments();
      for (std::size_t c = 0; c < n_cfg; ++c) {
        const auto& blk = cfgs[c].blocks[block];
        auto& lv = levels[c];
        const std::size_t depth = lv.size();
        // Update outer levels first so each uses the inner value at the left point.
        for (std::size_t l = 0; l < depth; ++l) {
          const int i = blk.i[l] - 1;
          const int j = blk.j[l] - 1;
          const double inner = (l + 1 < depth) ? lv[l + 1] : 1.0;
          lv[l] += gspec(t, PathView{x(i), {}}, PathView{x(j), {}}) * inner * dw(i);
        }
      }
      sys.advance(k);
      while (block + 1 < edges.size() - 1 && k == edges[block + 1]) {
        close_block();
        open_block(++block);
      }
    }
    close_block();

    const VecX& x = sys.state();
    for (std::size_t c = 0; c < n_cfg; ++c) {
      double psi = 1.0;
      for (int l : cfgs[c].K) psi *= x(l - 1) > threshold ? 1.0 : 0.0;
      samples[r * n_cfg + c] = psi * products[c];
    }
  });

  std::vector<McEstimate> out(n_cfg);
  for (std::size_t c = 0; c < n_cfg; ++c) {
    Accumulator acc;
    for (std::size_t r = 0; r < reps; ++r) acc.add(samples[r * n_cfg + c]);
    out[c] = {acc.mean(), acc.se()};
  }
  return out;
}

McEstimate zero_expectation_mc(const GProcessSpec& gspec, const IndexConfig& cfg, std::span<const double> partition,
                               double threshold, const McConfig& mc) {
  return zero_expectation_mc(gspec, std::span<const IndexConfig>(&cfg, 1), partition, threshold, mc).front();
}

double lp_bound_constant(const DriftInteractionModel& model, double T) {
  if (!(T >= 0.0)) throw DomainError("lp_bound_constant: T must be >= 0");
  double sup_k = 0.0;
  constexpr int kSamples = 1001;
  for (int k = 0; k < kSamples; ++k) sup_k = std::max(sup_k, model.moment_envelope(T * k / (kSamples - 1)));
  return 24.0 * model.bounds.drift_deriv * std::numbers::e * std::numbers::e * std::sqrt(sup_k);
}

LpEstimate iterated_lp_mc(const DriftInteractionModel& model, Index n, int m, int p, double s, double t,
                          const McConfig& mc) {
  if (m < 0 || m > 2) throw DomainError("iterated_lp_mc: m must lie in {0, 1, 2}");
  if (p < 1 || p > 2) throw DomainError("iterated_lp_mc: p must lie in {1, 2}");
  if (!(s >= 0.0 && s <= t)) throw DomainError("iterated_lp_mc: requires 0 <= s <= t");
  if (m == 0) return {1.0, 1.0};
  check_mc(mc, n);
  const Index first = mc_steps(mc.dt, s);
  const Index last = mc_steps(mc.dt, t);

  std::vector<double> moments(static_cast<std::size_t>(mc.reps));
  parallel_for(moments.size(), mc.workers, [&](std::size_t r) {
    IidSystem sys(model, n, mc.dt, make_stream(mc.seed, StreamPurpose::lemma, r));
    std::vector<double> lv(static_cast<std::size_t>(m), 0.0);
    for (Index k = 1; k <= last; ++k) {
      sys.prepare(k);
      if (k > first) {
        const double dM = sys.delta_b().dot(sys.increments());
        for (std::size_t l = 0; l < lv.size(); ++l) lv[l] += ((l + 1 < lv.size()) ? lv[l + 1] : 1.0) * dM;
      }
      sys.advance(k);
    }
    moments[r] = std::pow(std::abs(lv.front()), 2 * p);
  });

  double mean = 0.0;
  for (double v : moments) mean += v;
  mean /= static_cast<double>(moments.size());
  LpEstimate out;
  out.norm_estimate = std::pow(mean, 1.0 / (2.0 * p));
  out.bound = std::pow(lp_bound_constant(model, t) * p * std::sqrt(t - s), m);
  return out;
}

}  // namespace maxchaos
