#include "maxchaos/experiment.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>

#include "maxchaos/errors.hpp"
#include "maxchaos/io.hpp"
#include "maxchaos/parallel.hpp"
#include "maxchaos/svg.hpp"

namespace maxchaos {

using nlohmann::json;

namespace {

template <typename Fn>
auto with_replicate(std::size_t rep, Fn&& fn) {
  const std::string where = "replicate " + std::to_string(rep) + ": ";
  try {
    return fn();
  } catch (const NumericOverflowError& e) {
    throw NumericOverflowError(where + e.what());
  } catch (const GridExtensionError& e) {
    throw GridExtensionError(where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  }
}

std::string time_tag(std::size_t k) { return "t" + std::to_string(k); }

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

NormalizingConstants limit_constants(const DriftInteractionModel& model, Index n, double t) {
  if (model.ou) return gaussian_norm_constants(n, model.ou->m0, std::sqrt(ou_variance(*model.ou, t)));
  if (model.stationary) return norm_constants_from_cdf(*model.stationary, n);
  throw ParameterError("model has no known i.i.d. limit law");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, build_model(cfg.model)); }

ExperimentResult run_experiment(const ExperimentConfig& cfg, const DriftInteractionModel& model) {
  validate(cfg.sim);
  const auto& times = cfg.evt.times;
  const std::size_t reps = static_cast<std::size_t>(cfg.sim.n_reps);
  const std::size_t n_times = times.size();
  const Index N = cfg.sim.n_particles;

  MatX inter(reps, n_times), ref(reps, n_times);
  parallel_for(reps, cfg.workers, [&](std::size_t r) {
    with_replicate(r, [&] {
      const auto snaps =
          simulate_interacting_at(model, cfg.sim, make_stream(cfg.sim.seed, StreamPurpose::interacting, r), times);
      for (std::size_t k = 0; k < n_times; ++k) inter(r, k) = snaps[k].values.maxCoeff();

      const RngSpec iid = make_stream(cfg.sim.seed, StreamPurpose::iid, r);
      const MatX paths = model.ou ? simulate_iid_ou_joint(*model.ou, N, times, iid)
                                  : simulate_iid_rank_stationary_at(*model.stationary, *model.rank_drift, N, times,
                                                                    cfg.sim.dt, iid);
      ref.row(r) = paths.colwise().maxCoeff();
      return 0;
    });
  });

  ExperimentResult out;
  for (std::size_t k = 0; k < n_times; ++k) {
    TimeSlice s;
    s.time = times[k];
    const NormalizingConstants c = limit_constants(model, N, times[k]);
    s.interacting = normalize_maxima(inter.col(k), c);
    s.reference = normalize_maxima(ref.col(k), c);
    s.report.constants = c;
    s.report.n_particles = N;
    s.report.n_reps = cfg.sim.n_reps;
    s.report.limit_family = cfg.evt.limit_family;
    const LimitFamily family = cfg.evt.limit_family;
    s.report.ks_vs_limit =
        ks_one_sample(as_span(s.interacting.normalized), [family](double x) { return limit_cdf(family, x); });
    s.report.ks_two_sample = ks_two_sample(as_span(s.interacting.normalized), as_span(s.reference.normalized));
    out.slices.push_back(std::move(s));
  }
  if (n_times >= 2) {
    const double levels[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const auto grid = gumbel_quantile_grid(levels);
    out.joint_independence_distance = joint_independence_report(
        as_span(out.slices.front().interacting.normalized), as_span(out.slices.back().interacting.normalized), grid);
  }
  return out;
}

json report_json(const ExperimentConfig& cfg, const TimeSlice& slice, std::optional<double> joint) {
  return {
      {"model", to_json(cfg.model)},
      {"n_particles", cfg.sim.n_particles},
      {"n_reps", cfg.sim.n_reps},
      {"seed", cfg.sim.seed},
      {"dt", cfg.sim.dt},
      {"horizon", cfg.sim.horizon},
      {"time", slice.time},
      {"a_n", slice.report.constants.a},
      {"b_n", slice.report.constants.b},
      {"limit_family", to_string(slice.report.limit_family)},
      {"ks_vs_limit", slice.report.ks_vs_limit},
      {"ks_two_sample", slice.report.ks_two_sample},
      {"joint_independence_distance", nullable(joint)},
  };
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  const std::filesystem::path dir = cfg.output.directory;
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& contents) {
    write_file(dir / name, contents);
    written.push_back(dir / name);
  };
  for (std::size_t k = 0; k < result.slices.size(); ++k) {
    const TimeSlice& s = result.slices[k];
    const std::string tag = time_tag(k);
    const std::string maxima = maxima_csv(s.interacting);
    if (cfg.output.wants("csv")) {
      emit("maxima_" + tag + ".csv", maxima);
      emit("reference_maxima_" + tag + ".csv", maxima_csv(s.reference));
    }
    if (cfg.output.wants("json")) emit("report_" + tag + ".json", dump_json(report_json(cfg, s, result.joint_independence_distance)));
    if (cfg.output.wants("svg")) emit("ecdf_" + tag + ".svg", render_svg(parse_csv(maxima), PlotKind::ecdf_overlay));
  }
  if (cfg.output.wants("json") && !result.slices.empty()) {
    emit("report.json", dump_json(report_json(cfg, result.slices.back(), result.joint_independence_distance)));
  }
  return written;
}

std::vector<std::filesystem::path> run_simulation(const ExperimentConfig& cfg) {
  validate(cfg.sim);
  const DriftInteractionModel model = build_model(cfg.model);
  const std::size_t reps = static_cast<std::size_t>(cfg.sim.n_reps);
  std::vector<Trajectory> traj(reps);
  std::vector<VecX> finals(reps);
  std::vector<double> times = cfg.evt.times;
  if (times.back() < cfg.sim.horizon * (1.0 - 1e-12)) times.push_back(cfg.sim.horizon);

  parallel_for(reps, cfg.workers, [&](std::size_t r) {
    with_replicate(r, [&] {
      auto snaps = simulate_interacting_at(model, cfg.sim, make_stream(cfg.sim.seed, StreamPurpose::interacting, r), times);
      finals[r] = snaps.back().values;
      for (std::size_t k = 0; k < cfg.evt.times.size(); ++k) {
        traj[r].times.push_back(snaps[k].time);
        traj[r].states.push_back(std::move(snaps[k]));
      }
      return 0;
    });
  });

  std::vector<std::filesystem::path> written;
  const std::filesystem::path dir = cfg.output.directory;
  if (cfg.output.wants("csv")) {
    write_file(dir / "final_state.csv", final_state_csv(finals));
    write_file(dir / "trajectory.csv", trajectory_csv(traj));
    written = {dir / "final_state.csv", dir / "trajectory.csv"};
  }
  return written;
}

LemmaKind parse_lemma_kind(const std::string& name) {
  if (name == "counting") return LemmaKind::counting;
  if (name == "alg45") return LemmaKind::alg45;
  if (name == "zero-expectation") return LemmaKind::zero_expectation;
  if (name == "lp") return LemmaKind::lp;
  throw ParameterError("unknown lemma '" + name + "' (expected counting, alg45, zero-expectation or lp)");
}

std::string to_string(LemmaKind kind) {
  switch (kind) {
    case LemmaKind::counting: return "counting";
    case LemmaKind::alg45: return "alg45";
    case LemmaKind::zero_expectation: return "zero-expectation";
    case LemmaKind::lp: return "lp";
  }
  return "?";
}

std::vector<IndexConfig> zero_expectation_configs() {
  auto one = [](std::vector<int> i, std::vector<int> j) { return IndexConfig{3, {1}, {{std::move(i), std::move(j)}}}; };
  auto two = [](int i1, int j1, int i2, int j2) { return IndexConfig{3, {1}, {{{i1}, {j1}}, {{i2}, {j2}}}}; };
  return {
      one({2}, {1}), one({2, 1}, {3, 1}), two(3, 1, 2, 1),  // first condition only
      one({1}, {2}), one({1, 1}, {3, 2}), two(1, 2, 1, 3),  // second condition only
  };
}

namespace {

json base_report(LemmaKind kind, json params) {
  return {{"lemma", to_string(kind)}, {"params", std::move(params)}, {"lhs", nullptr},      {"rhs", nullptr},
          {"holds", false},           {"count", nullptr},           {"bound", nullptr},    {"estimate", nullptr},
          {"se", nullptr},            {"reps", nullptr},            {"seed", nullptr}};
}

std::string join(const std::vector<int>& v, char sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? std::string(1, sep) : "") + std::to_string(v[k]);
  return s;
}

json config_json(const IndexConfig& c) {
  json blocks = json::array();
  for (const auto& b : c.blocks) blocks.push_back({{"i", b.i}, {"j", b.j}});
  return {{"n_particles", c.n_particles}, {"K", c.K}, {"blocks", blocks}};
}

}  // namespace

std::vector<LemmaCase> run_lemma_suite(LemmaKind which, const LemmaSuiteParams& p) {
  std::vector<LemmaCase> cases;
  switch (which) {
    case LemmaKind::counting: {
      for (const CountingRow& row : counting_sweep(p.max_n, p.max_blocks, p.max_block_size, p.workers)) {
        json r = base_report(which, {{"n_particles", row.n_particles}, {"block_sizes", row.block_sizes}, {"kappa", row.kappa}});
        r["count"] = row.count;
        r["bound"] = row.bound;
        r["lhs"] = static_cast<double>(row.count);
        r["rhs"] = row.bound;
        r["holds"] = row.holds();
        cases.push_back({"counting_N" + std::to_string(row.n_particles) + "_k" + join(row.block_sizes, '-') + "_kappa" +
                             std::to_string(row.kappa),
                         r, row.holds()});
      }
      break;
    }
    case LemmaKind::alg45: {
      if (p.grid != "default") throw ParameterError("unknown alg45 grid '" + p.grid + "' (expected default)");
      for (const double C : {1.5, 2.0, 5.0}) {
        for (int N = 2; N <= 200; ++N) {
          for (int S = 1; S <= 3; ++S) {
            const Alg45Result res = alg45_check(C, N, S);
            json r = base_report(which, {{"C", C}, {"n_particles", N}, {"S", S}});
            r["lhs"] = res.lhs;
            r["rhs"] = res.rhs;
            r["log_lhs"] = res.log_lhs;
            r["log_rhs"] = res.log_rhs;
            r["holds"] = res.holds;
            cases.push_back({"alg45_C" + format_sig(C, 3) + "_N" + std::to_string(N) + "_S" + std::to_string(S), r,
                             res.holds});
          }
        }
      }
      break;
    }
    case LemmaKind::zero_expectation: {
      const OUModelParams ou{};
      const GProcessSpec gspec{build_ou_model(ou)};
      const double T = 0.5;
      const int N = 3;
      const double threshold =
          ou.m0 + std::sqrt(ou_variance(ou, T)) * boost::math::quantile(boost::math::normal(), 1.0 - 1.0 / N);
      const McConfig mc{p.dt, T, p.reps, p.seed, p.workers};
      const auto all = zero_expectation_configs();
      for (std::size_t n_blocks : {1u, 2u}) {
        std::vector<IndexConfig> group;
        std::vector<std::size_t> ids;
        for (std::size_t c = 0; c < all.size(); ++c) {
          if (all[c].blocks.size() == n_blocks) {
            group.push_back(all[c]);
            ids.push_back(c);
          }
        }
        std::vector<double> partition{0.0};
        for (std::size_t a = 1; a <= n_blocks; ++a) partition.push_back(T * a / n_blocks);
        const auto est = zero_expectation_mc(gspec, group, partition, threshold, mc);
        for (std::size_t c = 0; c < group.size(); ++c) {
          const bool ok = std::abs(est[c].estimate) <= 4.0 * est[c].se;
          json params = config_json(group[c]);
          params["partition"] = partition;
          params["threshold"] = threshold;
          params["dt"] = p.dt;
          params["condition1"] = condition1_holds(group[c]);
          params["condition2"] = condition2_holds(group[c]);
          json r = base_report(which, params);
          r["estimate"] = est[c].estimate;
          r["se"] = est[c].se;
          r["lhs"] = std::abs(est[c].estimate);
          r["rhs"] = 4.0 * est[c].se;
          r["holds"] = ok;
          r["reps"] = p.reps;
          r["seed"] = p.seed;
          cases.push_back({"zero_expectation_config" + std::to_string(ids[c] + 1), r, ok});
        }
      }
      break;
    }
    case LemmaKind::lp: {
      const DriftInteractionModel model = build_ou_model({});
      const McConfig mc{p.dt, 0.1, p.reps, p.seed, p.workers};
      for (int m = 1; m <= 2; ++m) {
        for (int q = 1; q <= 2; ++q) {
          const LpEstimate est = iterated_lp_mc(model, 10, m, q, 0.0, 0.1, mc);
          json r = base_report(which, {{"n_particles", 10}, {"m", m}, {"p", q}, {"s", 0.0}, {"t", 0.1}, {"dt", p.dt}});
          r["estimate"] = est.norm_estimate;
          r["lhs"] = est.norm_estimate;
          r["rhs"] = est.bound;
          r["bound"] = est.bound;
          r["holds"] = est.holds();
          r["reps"] = p.reps;
          r["seed"] = p.seed;
          cases.push_back({"lp_m" + std::to_string(m) + "_p" + std::to_string(q), r, est.holds()});
        }
      }
      break;
    }
  }
  return cases;
}

std::vector<std::filesystem::path> write_lemma_reports(const std::vector<LemmaCase>& cases,
                                                       const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> written;
  for (const auto& c : cases) {
    const auto path = directory / (c.name + ".json");
    write_file(path, dump_json(c.report));
    written.push_back(path);
  }
  return written;
}

}  // namespace maxchaos
