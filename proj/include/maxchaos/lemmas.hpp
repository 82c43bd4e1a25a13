#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "maxchaos/models.hpp"
#include "maxchaos/sde.hpp"
#include "maxchaos/types.hpp"

namespace maxchaos {

// ---------------------------------------------------------------------------
// Index-set conditions for vanishing expectations and their counting bound.
// ---------------------------------------------------------------------------

/// One block alpha: the tuples i_alpha and j_alpha (1-based particle indices).
struct IndexBlock {
  std::vector<int> i;
  std::vector<int> j;
};

/// A subset K of [N] together with per-block index tuples.
struct IndexConfig {
  int n_particles = 1;
  std::vector<int> K;
  std::vector<IndexBlock> blocks;

  int total_length() const;  ///< S = k_1 + ... + k_n
};

/// Throws DomainError unless every index lies in [1, N], K is a nonempty set
/// and each block has equal, positive tuple lengths.
void validate(const IndexConfig& cfg);

/// Some i_{beta, l0} lies outside K, the earlier j's of its block and every
/// j of the later blocks.
bool condition1_holds(const IndexConfig& cfg);

/// The last j of the first block lies outside K, the other j's of that block
/// and every j of the later blocks.
bool condition2_holds(const IndexConfig& cfg);

/// Number of (K, i, j) choices with |K| = kappa for which both conditions
/// fail, by exhaustive enumeration. Throws BudgetError when
/// C(N, kappa) N^{2S} exceeds 1e8.
std::uint64_t enumerate_failing_configs(int n_particles, std::span<const int> block_sizes, int kappa);

/// C(N, kappa) kappa (kappa + 1) ... (kappa + S) N^{S - 1}; exact while it
/// fits in 128 bits, otherwise evaluated in log space (inf past DBL_MAX).
double counting_bound(int n_particles, int kappa, int S);
double log_counting_bound(int n_particles, int kappa, int S);

struct CountingRow {
  int n_particles = 0;
  std::vector<int> block_sizes;
  int kappa = 0;
  std::uint64_t count = 0;
  double bound = 0.0;
  bool holds() const { return static_cast<double>(count) <= bound; }
};

/// Every (N <= max_n, n <= max_blocks, k_alpha <= max_block_size, 1 <= kappa <= N).
std::vector<CountingRow> counting_sweep(int max_n, int max_blocks, int max_block_size, unsigned workers = 1);

struct Alg45Result {
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  bool holds = false;
};

/// sum_{kappa=1}^N C(N,kappa) kappa...(kappa+S) (C/N)^{kappa (1 - 1/ln N)}
/// against (S+2)(S+1)^{2(S+1)} e^{Ce} (Ce)^{S+1}, both sides in log space.
Alg45Result alg45_check(double C, int n_particles, int S);

// ---------------------------------------------------------------------------
// Monte Carlo checks on the density process Z = exp(M - <M>/2).
// All estimators simulate N i.i.d. McKean-Vlasov particles under P, using the
// closed-form law integral h(t, x) of the model.
// ---------------------------------------------------------------------------

/// Time grid and replicate budget for the Monte Carlo estimators.
struct McConfig {
  double dt = 0.005;
  double horizon = 0.5;
  Index reps = 1000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct DensityPath {
  VecX times;
  VecX M;
  VecX quad_var;
  VecX log_Z;
  VecX Z;
  /// log Z exceeded 700 somewhere; Z is +inf from that point on.
  bool capped = false;
};

/// One replicate of M^N, <M^N> and Z^N on the Euler grid.
DensityPath simulate_density_process(const DriftInteractionModel& model, Index n_particles, const McConfig& cfg,
                                     const RngSpec& rng);

struct MartingaleStats {
  double mean_Z = 0.0;
  double se = 0.0;
  Index reps_used = 0;
  Index capped = 0;
};

/// mean(Z_T) over cfg.reps replicates; capped paths are excluded and counted.
MartingaleStats density_martingale_mc(const DriftInteractionModel& model, Index n_particles, const McConfig& cfg);

struct GirsanovResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  Index capped = 0;
};

/// lhs = E_P[phi(X^1_T) Z_T] over i.i.d. paths; rhs = E[phi(X^{1,N}_T)] from a
/// direct interacting simulation; se combines both standard errors.
GirsanovResult girsanov_consistency(const DriftInteractionModel& model, Index n_particles,
                                    const std::function<double(double)>& observable, const McConfig& cfg);

/// The indicator observable 1{x > q}.
GirsanovResult girsanov_consistency(const DriftInteractionModel& model, Index n_particles, double threshold,
                                    const McConfig& cfg);

/// G^{ij}_t = dB/dr(t, X^i, h) (g(t, X^i, X^j) - h(t, X^i)), h the law integral.
struct GProcessSpec {
  DriftInteractionModel model;

  double operator()(double t, PathView xi, PathView xj) const;
};

struct McEstimate {
  double estimate = 0.0;
  double se = 0.0;
};

/// Estimates E[Psi prod_alpha I_{i_alpha, j_alpha}(T_{alpha-1}, T_alpha)] with
/// Psi = prod_{l in K} 1{X^l_T > threshold} and left-point Euler sums for the
/// iterated integrals. `partition` is T_0 = 0 <= ... <= T_n = T; the config
/// horizon is ignored. Guard: S <= 3 and N <= 6, else BudgetError.
McEstimate zero_expectation_mc(const GProcessSpec& gspec, const IndexConfig& cfg, std::span<const double> partition,
                               double threshold, const McConfig& mc);

/// Several configs over the same simulated paths (all must share N and the
/// block count of the partition).
std::vector<McEstimate> zero_expectation_mc(const GProcessSpec& gspec, std::span<const IndexConfig> cfgs,
                                            std::span<const double> partition, double threshold, const McConfig& mc);

/// 24 C e^2 sqrt(sup_{[0, T]} K) with C the declared bound on dB/dr.
double lp_bound_constant(const DriftInteractionModel& model, double T);

struct LpEstimate {
  double norm_estimate = 0.0;
  double bound = 0.0;
  bool holds() const { return norm_estimate <= bound; }
};

/// (E|I_m(s, t)|^{2p})^{1/2p} for the m-fold iterated integral of dM^N,
/// against (C(t) p sqrt(t - s))^m. m in {0, 1, 2}, p in {1, 2}.
LpEstimate iterated_lp_mc(const DriftInteractionModel& model, Index n_particles, int m, int p, double s, double t,
                          const McConfig& mc);

}  // namespace maxchaos
