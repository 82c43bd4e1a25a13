#include "maxchaos/lemmas.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "maxchaos/errors.hpp"
#include "maxchaos/parallel.hpp"

namespace maxchaos {

namespace {

using Mask = std::uint64_t;

inline Mask bit(int index) { return Mask{1} << (index - 1); }

Mask mask_of(std::span<const int> indices) {
  Mask m = 0;
  for (int v : indices) m |= bit(v);
  return m;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// log of kappa (kappa + 1) ... (kappa + S)
double log_rising(int kappa, int S) { return std::lgamma(kappa + S + 1.0) - std::lgamma(static_cast<double>(kappa)); }

bool mul_checked(unsigned __int128& acc, unsigned __int128 factor) {
  return !__builtin_mul_overflow(acc, factor, &acc);
}

}  // namespace

int IndexConfig::total_length() const {
  int s = 0;
  for (const auto& b : blocks) s += static_cast<int>(b.i.size());
  return s;
}

void validate(const IndexConfig& cfg) {
  if (cfg.n_particles < 1 || cfg.n_particles > 63) throw DomainError("index config: N must lie in [1, 63]");
  if (cfg.K.empty()) throw DomainError("index config: K must be nonempty");
  const std::set<int> unique(cfg.K.begin(), cfg.K.end());
  if (unique.size() != cfg.K.size()) throw DomainError("index config: K has repeated entries");
  auto in_range = [&](int v) { return v >= 1 && v <= cfg.n_particles; };
  if (!std::all_of(cfg.K.begin(), cfg.K.end(), in_range)) throw DomainError("index config: K outside [N]");
  if (cfg.blocks.empty()) throw DomainError("index config: needs at least one block");
  for (const auto& b : cfg.blocks) {
    if (b.i.empty() || b.i.size() != b.j.size()) throw DomainError("index config: tuples must be nonempty and paired");
    if (!std::all_of(b.i.begin(), b.i.end(), in_range) || !std::all_of(b.j.begin(), b.j.end(), in_range)) {
      throw DomainError("index config: tuple entry outside [N]");
    }
  }
}

bool condition1_holds(const IndexConfig& cfg) {
  validate(cfg);
  const Mask k_mask = mask_of(cfg.K);
  const auto n = cfg.blocks.size();
  Mask later = 0;  // j entries of blocks after beta
  for (std::size_t beta = n; beta-- > 0;) {
    const auto& blk = cfg.blocks[beta];
    Mask prefix = 0;  // j_{beta, 1..l0-1}
    for (std::size_t l = 0; l < blk.i.size(); ++l) {
      if (!(bit(blk.i[l]) & (k_mask | prefix | later))) return true;
      prefix |= bit(blk.j[l]);
    }
    later |= mask_of(blk.j);
  }
  return false;
}

bool condition2_holds(const IndexConfig& cfg) {
  validate(cfg);
  const auto& first = cfg.blocks.front();
  Mask excluded = mask_of(cfg.K);
  for (std::size_t l = 0; l + 1 < first.j.size(); ++l) excluded |= bit(first.j[l]);
  for (std::size_t a = 1; a < cfg.blocks.size(); ++a) excluded |= mask_of(cfg.blocks[a].j);
  return !(bit(first.j.back()) & excluded);
}

std::uint64_t enumerate_failing_configs(int N, std::span<const int> block_sizes, int kappa) {
  if (N < 1 || N > 20) throw DomainError("enumerate_failing_configs: N must lie in [1, 20]");
  if (kappa < 1 || kappa > N) throw DomainError("enumerate_failing_configs: kappa must lie in [1, N]");
  if (block_sizes.empty()) throw DomainError("enumerate_failing_configs: needs at least one block");
  int S = 0;
  for (int k : block_sizes) {
    if (k < 1) throw DomainError("enumerate_failing_configs: block sizes must be positive");
    S += k;
  }
  const double log_work = log_binomial(N, kappa) + 2.0 * S * std::log(static_cast<double>(N));
  if (log_work > std::log(1e8) + 1e-9) {
    throw BudgetError("enumerate_failing_configs: C(N, kappa) N^{2S} exceeds 1e8");
  }

  // Flattened positions: block index and offset for each of the S slots.
  std::vector<int> block_of, start_of(block_sizes.size() + 1, 0);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    start_of[b + 1] = start_of[b] + block_sizes[b];
    for (int l = 0; l < block_sizes[b]; ++l) block_of.push_back(static_cast<int>(b));
  }
  const int n_blocks = static_cast<int>(block_sizes.size());

  std::uint64_t failing = 0;
  std::vector<int> j(S), i(S);
  std::vector<Mask> forbidden(S), later(n_blocks + 1);

  auto next_tuple = [N](std::vector<int>& t) {
    for (auto& v : t) {
      if (++v <= N) return true;
      v = 1;
    }
    return false;
  };

  const Mask all = (N == 64) ? ~Mask{0} : (bit(N) << 1) - 1;
  for (Mask K = all; K; K = (K - 1) & all) {
    if (std::popcount(K) != kappa) continue;
    std::fill(j.begin(), j.end(), 1);
    do {
      later[n_blocks] = 0;
      for (int b = n_blocks - 1; b >= 0; --b) {
        Mask m = 0;
        for (int p = start_of[b]; p < start_of[b + 1]; ++p) m |= bit(j[p]);
        later[b] = later[b + 1] | m;
      }
      // Condition 2 depends on K and j only.
      Mask first_excluded = K | later[1];
      for (int p = 0; p + 1 < start_of[1]; ++p) first_excluded |= bit(j[p]);
      if (bit(j[start_of[1] - 1]) & ~first_excluded) continue;

      for (int b = 0; b < n_blocks; ++b) {
        Mask prefix = 0;
        for (int p = start_of[b]; p < start_of[b + 1]; ++p) {
          forbidden[p] = K | prefix | later[b + 1];
          prefix |= bit(j[p]);
        }
      }
      std::fill(i.begin(), i.end(), 1);
      do {
        bool cond1 = false;
        for (int p = 0; p < S && !cond1; ++p) cond1 = !(bit(i[p]) & forbidden[p]);
        failing += !cond1;
      } while (next_tuple(i));
    } while (next_tuple(j));
  }
  return failing;
}

double log_counting_bound(int N, int kappa, int S) {
  if (kappa < 1 || kappa > N || S < 1) throw DomainError("counting_bound: needs 1 <= kappa <= N and S >= 1");
  return log_binomial(N, kappa) + log_rising(kappa, S) + (S - 1) * std::log(static_cast<double>(N));
}

double counting_bound(int N, int kappa, int S) {
  if (kappa < 1 || kappa > N || S < 1) throw DomainError("counting_bound: needs 1 <= kappa <= N and S >= 1");
  unsigned __int128 acc = 1;
  bool ok = true;
  for (int t = 1; t <= kappa && ok; ++t) {
    // acc * (N - kappa + t) is divisible by t after t steps of C(N, kappa).
    ok = mul_checked(acc, static_cast<unsigned>(N - kappa + t));
    acc /= static_cast<unsigned>(t);
  }
  for (int r = 0; r <= S && ok; ++r) ok = mul_checked(acc, static_cast<unsigned>(kappa + r));
  for (int r = 0; r < S - 1 && ok; ++r) ok = mul_checked(acc, static_cast<unsigned>(N));
  if (ok) return static_cast<double>(acc);
  const double lg = log_counting_bound(N, kappa, S);
  return lg > std::log(std::numeric_limits<double>::max()) ? std::numeric_limits<double>::infinity() : std::exp(lg);
}

std::vector<CountingRow> counting_sweep(int max_n, int max_blocks, int max_block_size, unsigned workers) {
  std::vector<std::vector<int>> shapes;
  std::vector<int> shape;
  auto extend = [&](auto&& self, int depth) -> void {
    if (depth > 0) shapes.push_back(shape);
    if (depth == max_blocks) return;
    for (int k = 1; k <= max_block_size; ++k) {
      shape.push_back(k);
      self(self, depth + 1);
      shape.pop_back();
    }
  };
  extend(extend, 0);

  std::vector<CountingRow> rows;
  for (int N = 1; N <= max_n; ++N)
    for (const auto& s : shapes)
      for (int kappa = 1; kappa <= N; ++kappa) rows.push_back({N, s, kappa, 0, 0.0});

  parallel_for(rows.size(), workers, [&](std::size_t r) {
    auto& row = rows[r];
    int S = 0;
    for (int k : row.block_sizes) S += k;
    row.count = enumerate_failing_configs(row.n_particles, row.block_sizes, row.kappa);
    row.bound = counting_bound(row.n_particles, row.kappa, S);
  });
  return rows;
}

Alg45Result alg45_check(double C, int N, int S) {
  if (!(C > 1.0)) throw DomainError("alg45_check: C must exceed 1");
  if (N < 2) throw DomainError("alg45_check: N must be >= 2 so that ln N > 0");
  if (S < 1) throw DomainError("alg45_check: S must be >= 1");
  const double ln_n = std::log(static_cast<double>(N));
  const double log_ratio = std::log(C / N);

  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(N));
  for (int kappa = 1; kappa <= N; ++kappa) {
    terms.push_back(log_binomial(N, kappa) + log_rising(kappa, S) + kappa * (1.0 - 1.0 / ln_n) * log_ratio);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - peak);

  Alg45Result r;
  r.log_lhs = peak + std::log(acc);
  const double ce = C * std::numbers::e;
  r.log_rhs = std::log(S + 2.0) + 2.0 * (S + 1) * std::log(S + 1.0) + ce + (S + 1) * std::log(ce);
  r.lhs = std::exp(r.log_lhs);
  r.rhs = std::exp(r.log_rhs);
  r.holds = r.log_lhs <= r.log_rhs;
  return r;
}

}  // namespace maxchaos
