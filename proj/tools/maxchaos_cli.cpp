// Command-line front end: simulate, maxima, stationary, verify-lemmas,
// girsanov-check and plot.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "maxchaos/config.hpp"
#include "maxchaos/errors.hpp"
#include "maxchaos/experiment.hpp"
#include "maxchaos/io.hpp"
#include "maxchaos/lemmas.hpp"
#include "maxchaos/parallel.hpp"
#include "maxchaos/stationary.hpp"
#include "maxchaos/svg.hpp"

namespace mc = maxchaos;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericError = 3;
constexpr int kLemmaFailure = 4;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "experiment JSON file")->required();
  cmd->add_option("--out", c.out, "output directory (overrides output.directory)");
  cmd->add_option("--seed", c.seed, "master seed (overrides sim.seed)");
  cmd->add_option("--workers", c.workers, "worker threads (default: all cores)");
}

mc::ExperimentConfig load(const Common& c) {
  mc::ExperimentConfig cfg = mc::load_config(c.config);
  if (!c.out.empty()) cfg.output.directory = c.out;
  if (c.seed) cfg.sim.seed = *c.seed;
  cfg.workers = c.workers ? c.workers : mc::default_workers();
  return cfg;
}

void print_paths(const std::vector<std::filesystem::path>& paths) {
  for (const auto& p : paths) std::cout << p.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremes of mean-field interacting particle systems"};
  app.require_subcommand(1);

  Common sim_opts, max_opts, gir_opts;
  auto* simulate = app.add_subcommand("simulate", "simulate interacting systems and write particle states");
  add_common(simulate, sim_opts);

  auto* maxima = app.add_subcommand("maxima", "compare interacting and i.i.d. maxima");
  add_common(maxima, max_opts);

  auto* stationary = app.add_subcommand("stationary", "solve the stationary law of a rank-based model");
  std::string drift_name = "linear", stat_out = "out";
  double stat_step = 0.01, stat_tail = 1e-6;
  stationary->add_option("--drift", drift_name, "drift: linear, affine(c0,c1) or poly(c0,...)");
  stationary->add_option("--out", stat_out, "output directory");
  stationary->add_option("--step", stat_step, "RK4 step");
  stationary->add_option("--tail", stat_tail, "tail mass at which integration stops");

  auto* lemmas = app.add_subcommand("verify-lemmas", "check the combinatorial and stochastic lemmas");
  std::string lemma_name, lemma_out = "out/lemmas";
  mc::LemmaSuiteParams lp;
  unsigned lemma_workers = 0;
  lemmas->add_option("--lemma", lemma_name, "counting, alg45, zero-expectation or lp")->required();
  lemmas->add_option("--max-n", lp.max_n, "largest N in the counting sweep");
  lemmas->add_option("--max-blocks", lp.max_blocks, "largest block count in the counting sweep");
  lemmas->add_option("--max-block-size", lp.max_block_size, "largest block length in the counting sweep");
  lemmas->add_option("--grid", lp.grid, "alg45 grid name");
  lemmas->add_option("--reps", lp.reps, "Monte Carlo replicates");
  lemmas->add_option("--dt", lp.dt, "Monte Carlo time step");
  lemmas->add_option("--seed", lp.seed, "master seed");
  lemmas->add_option("--out", lemma_out, "report directory");
  lemmas->add_option("--workers", lemma_workers, "worker threads (default: all cores)");

  auto* girsanov = app.add_subcommand("girsanov-check", "reweighted i.i.d. estimate against direct simulation");
  add_common(girsanov, gir_opts);
  std::optional<double> threshold;
  girsanov->add_option("--threshold", threshold, "observable threshold q (default: sigma_T)");

  auto* plot = app.add_subcommand("plot", "render a CSV as SVG");
  std::string plot_csv, plot_kind = "ecdf_overlay", plot_out;
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--kind", plot_kind, "ecdf_overlay or ks_vs_n");
  plot->add_option("--out", plot_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) {
      print_paths(mc::run_simulation(load(sim_opts)));
    } else if (*maxima) {
      const auto cfg = load(max_opts);
      const auto result = mc::run_experiment(cfg);
      for (const auto& s : result.slices) {
        std::printf("t=%g a_n=%.6g b_n=%.6g ks_vs_limit=%.4f ks_two_sample=%.4f\n", s.time, s.report.constants.a,
                    s.report.constants.b, s.report.ks_vs_limit, s.report.ks_two_sample);
      }
      if (result.joint_independence_distance) {
        std::printf("joint_independence_distance=%.4f\n", *result.joint_independence_distance);
      }
      print_paths(mc::write_experiment_outputs(cfg, result));
    } else if (*stationary) {
      const auto drift = mc::parse_drift(drift_name);
      mc::build_rank_model({drift});  // rejects drifts without a stationary law
      mc::GridSpec spec;
      spec.step = stat_step;
      spec.tail = stat_tail;
      const auto cdf = mc::solve_stationary_cdf(drift, spec);
      const auto path = std::filesystem::path(stat_out) / "stationary.csv";
      mc::write_file(path, mc::stationary_csv(cdf));
      std::printf("grid [%g, %g], %lld points\n", cdf.lower(), cdf.upper(), static_cast<long long>(cdf.size()));
      std::cout << path.string() << '\n';
    } else if (*lemmas) {
      lp.workers = lemma_workers ? lemma_workers : mc::default_workers();
      const auto kind = mc::parse_lemma_kind(lemma_name);
      const auto cases = mc::run_lemma_suite(kind, lp);
      mc::write_lemma_reports(cases, lemma_out);
      std::size_t failed = 0;
      for (const auto& c : cases) {
        if (!c.holds) {
          ++failed;
          std::printf("FAIL %s\n", c.name.c_str());
        }
      }
      std::printf("%s: %zu cases, %zu failed; reports in %s\n", lemma_name.c_str(), cases.size(), failed,
                  lemma_out.c_str());
      return failed ? kLemmaFailure : kOk;
    } else if (*girsanov) {
      const auto cfg = load(gir_opts);
      const auto model = mc::build_model(cfg.model);
      const mc::McConfig mcc{cfg.sim.dt, cfg.sim.horizon, cfg.sim.n_reps, cfg.sim.seed, cfg.workers};
      double q = 0.0;
      if (threshold) {
        q = *threshold;
      } else if (model.ou) {
        q = std::sqrt(mc::ou_variance(*model.ou, cfg.sim.horizon));
      } else {
        q = model.stationary->quantile(0.5);
      }
      const auto mart = mc::density_martingale_mc(model, cfg.sim.n_particles, mcc);
      const auto res = mc::girsanov_consistency(model, cfg.sim.n_particles, q, mcc);
      const bool ok = std::abs(res.lhs - res.rhs) <= 3.0 * res.se && res.capped == 0;
      const nlohmann::json report = {
          {"model", mc::to_json(cfg.model)}, {"n_particles", cfg.sim.n_particles}, {"reps", cfg.sim.n_reps},
          {"seed", cfg.sim.seed},             {"dt", cfg.sim.dt},                  {"horizon", cfg.sim.horizon},
          {"threshold", q},                   {"lhs", res.lhs},                    {"rhs", res.rhs},
          {"se", res.se},                     {"capped", res.capped},              {"mean_Z", mart.mean_Z},
          {"mean_Z_se", mart.se},             {"holds", ok}};
      const auto path = std::filesystem::path(cfg.output.directory) / "girsanov.json";
      mc::write_file(path, mc::dump_json(report));
      std::printf("E_P[1{X>q} Z]=%.6f direct=%.6f se=%.6f mean(Z)=%.6f +- %.6f\n", res.lhs, res.rhs, res.se,
                  mart.mean_Z, mart.se);
      std::cout << path.string() << '\n';
      return ok ? kOk : kLemmaFailure;
    } else if (*plot) {
      mc::write_file(plot_out, mc::render_svg_file(plot_csv, mc::parse_plot_kind(plot_kind)));
      std::cout << plot_out << '\n';
    }
  } catch (const mc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mc::ParameterError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mc::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mc::ModelInvalidError& e) {
    std::cerr << "invalid model: " << e.what() << '\n';
    return kConfigError;
  } catch (const mc::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kConfigError;
  } catch (const mc::Error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumericError;
  }
  return kOk;
}
