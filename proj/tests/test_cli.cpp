#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "maxchaos/config.hpp"
#include "maxchaos/errors.hpp"
#include "maxchaos/experiment.hpp"
#include "maxchaos/io.hpp"
#include "maxchaos/svg.hpp"

using namespace maxchaos;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maxchaos_test_" + name);
  fs::remove_all(p);
  return p;
}

json make_ou_doc(const fs::path& out) {
  json doc = json::parse(R"({
    "model": {"type": "ou", "params": {"kappa": 1, "sigma": 1, "m0": 0, "sigma0": 1}},
    "sim": {"n_particles": 200, "dt": 0.05, "horizon": 1.0, "n_reps": 40, "seed": 42},
    "evt": {"times": [0.5, 1.0], "limit_family": "gumbel"},
    "output": {"directory": "", "formats": ["csv", "json", "svg"]}
  })");
  doc["output"]["directory"] = out.string();
  return doc;
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MAXCHAOS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, RoundTrip) {
  const auto cfg = parse_config(make_ou_doc("out"));
  EXPECT_EQ(cfg.sim.n_particles, 200);
  EXPECT_EQ(cfg.evt.times.size(), 2u);
  const auto again = parse_config(to_json(cfg));
  EXPECT_TRUE(again == cfg);
  EXPECT_EQ(to_json(again), to_json(cfg));

  json rank = make_ou_doc("out");
  rank["model"] = {{"type", "rank"}, {"params", {{"drift", "affine(3,-6)"}}}};
  const auto rcfg = parse_config(rank);
  EXPECT_EQ(rcfg.model.drift, "affine(3,-6)");
  EXPECT_TRUE(parse_config(to_json(rcfg)) == rcfg);
}

TEST(Config, KeyPathDiagnostics) {
  json doc = make_ou_doc("out");
  doc["sim"]["n_reps"] = 0;
  EXPECT_NE(config_error(doc).find("sim.n_reps"), std::string::npos);

  doc = make_ou_doc("out");
  doc.erase("evt");
  EXPECT_NE(config_error(doc).find("evt"), std::string::npos);

  doc = make_ou_doc("out");
  doc["evt"]["times"] = {0.5, 1.5};
  EXPECT_NE(config_error(doc).find("evt.times[1]"), std::string::npos);

  doc = make_ou_doc("out");
  doc["evt"]["times"] = {0.0};
  EXPECT_NE(config_error(doc).find("evt.times[0]"), std::string::npos);

  doc = make_ou_doc("out");
  doc["output"]["formats"] = {"csv", "xlsx"};
  EXPECT_NE(config_error(doc).find("output.formats[1]"), std::string::npos);

  doc = make_ou_doc("out");
  doc["model"]["type"] = "heston";
  EXPECT_NE(config_error(doc).find("model.type"), std::string::npos);

  doc = make_ou_doc("out");
  doc["model"]["params"]["sigma"] = -1;
  EXPECT_NE(config_error(doc).find("model.params"), std::string::npos);

  doc = make_ou_doc("out");
  doc["sim"]["dt"] = "fast";
  EXPECT_NE(config_error(doc).find("sim.dt"), std::string::npos);
}

TEST(Csv, FormatsAndParse) {
  VecX raw(2);
  raw << 1.5, 0.1;
  const auto m = normalize_maxima(raw, {0.5, 1.0, 10});
  const std::string text = maxima_csv(m);
  EXPECT_EQ(text.substr(0, text.find('\n')), "rep,raw_max,norm_max");
  const auto table = parse_csv(text);
  EXPECT_EQ(table.rows, 2u);
  EXPECT_EQ(table.column("raw_max")[1], 0.1);  // 17 digits round-trip
  EXPECT_EQ(table.column("norm_max")[0], 1.0);
  try {
    table.column("ks");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("ks"), std::string::npos);
  }
  EXPECT_THROW(parse_csv("a,b\n1\n"), FormatError);
  EXPECT_THROW(parse_csv("a,b\n1,x\n"), FormatError);

  Trajectory t;
  t.times = {0.0, 0.1};
  t.states = {{0.0, VecX::Constant(2, 1.0)}, {0.1, VecX::Constant(2, 2.0)}};
  const std::string traj = trajectory_csv({t});
  EXPECT_EQ(traj, "rep,time,particle,value\n0,0,0,1\n0,0,1,1\n0,0.1,0,2\n0,0.1,1,2\n");
  EXPECT_EQ(final_state_csv({VecX::Constant(1, 0.25)}), "rep,particle,value\n0,0,0.25\n");
}

TEST(Svg, DeterministicAndSchemaChecked) {
  VecX raw(50);
  for (Index i = 0; i < 50; ++i) raw(i) = std::sin(0.7 * i) * 2;
  const auto table = parse_csv(maxima_csv(normalize_maxima(raw, {1.0, 0.0, 10})));
  const std::string a = render_svg(table, PlotKind::ecdf_overlay);
  const std::string b = render_svg(parse_csv(maxima_csv(normalize_maxima(raw, {1.0, 0.0, 10}))), PlotKind::ecdf_overlay);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("width=\"800\" height=\"600\""), std::string::npos);
  EXPECT_NE(a.find("Gumbel"), std::string::npos);

  const auto ks = parse_csv("n,ks\n100,0.06\n1000,0.045\n10000,0.035\n");
  EXPECT_NE(render_svg(ks, PlotKind::ks_vs_n).find("<circle"), std::string::npos);

  try {
    render_svg(ks, PlotKind::ecdf_overlay);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("norm_max"), std::string::npos);
  }
  EXPECT_THROW(render_svg(parse_csv("rep,raw_max,norm_max\n"), PlotKind::ecdf_overlay), FormatError);
  EXPECT_THROW(parse_plot_kind("histogram"), ParameterError);
}

TEST(Experiment, OuRunPopulatesReportAndFiles) {
  const fs::path dir = scratch("ou");
  const auto cfg = parse_config(make_ou_doc(dir));
  const auto result = run_experiment(cfg);
  ASSERT_EQ(result.slices.size(), 2u);
  ASSERT_TRUE(result.joint_independence_distance.has_value());
  for (const auto& s : result.slices) {
    EXPECT_EQ(s.interacting.raw.size(), 40);
    EXPECT_GT(s.report.ks_vs_limit, 0.0);
    EXPECT_LE(s.report.ks_vs_limit, 1.0);
    EXPECT_LE(s.report.ks_two_sample, 1.0);
  }
  const auto files = write_experiment_outputs(cfg, result);
  EXPECT_EQ(files.size(), 9u);
  for (const auto& f : files) {
    EXPECT_TRUE(fs::exists(f));
    EXPECT_EQ(f.parent_path(), dir);
  }
  const json report = json::parse(read_file(dir / "report.json"));
  for (const char* key : {"model", "n_particles", "n_reps", "seed", "dt", "horizon", "a_n", "b_n", "limit_family",
                          "ks_vs_limit", "ks_two_sample", "joint_independence_distance"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
  EXPECT_FALSE(report["joint_independence_distance"].is_null());
  const auto table = read_csv(dir / "maxima_t1.csv");
  EXPECT_EQ(table.rows, 40u);
  fs::remove_all(dir);
}

TEST(Experiment, FormatGatingAndWorkerInvariance) {
  const fs::path d1 = scratch("gate1"), d3 = scratch("gate3");
  json doc = make_ou_doc(d1);
  doc["output"]["formats"] = {"json"};
  auto cfg = parse_config(doc);
  cfg.workers = 1;
  write_experiment_outputs(cfg, run_experiment(cfg));
  for (const auto& e : fs::directory_iterator(d1)) EXPECT_EQ(e.path().extension(), ".json");

  doc["output"]["formats"] = {"csv"};
  doc["output"]["directory"] = d1.string();
  cfg = parse_config(doc);
  cfg.workers = 1;
  write_experiment_outputs(cfg, run_experiment(cfg));
  doc["output"]["directory"] = d3.string();
  auto cfg3 = parse_config(doc);
  cfg3.workers = 3;
  write_experiment_outputs(cfg3, run_experiment(cfg3));
  for (const char* f : {"maxima_t0.csv", "maxima_t1.csv", "reference_maxima_t1.csv"}) {
    EXPECT_EQ(read_file(d1 / f), read_file(d3 / f)) << f;
  }
  fs::remove_all(d1);
  fs::remove_all(d3);
}

TEST(Experiment, SimulationOutputs) {
  const fs::path dir = scratch("sim");
  json doc = make_ou_doc(dir);
  doc["sim"]["n_reps"] = 3;
  doc["sim"]["n_particles"] = 5;
  const auto files = run_simulation(parse_config(doc));
  ASSERT_EQ(files.size(), 2u);
  const auto finals = read_csv(dir / "final_state.csv");
  EXPECT_EQ(finals.rows, 15u);
  const auto traj = read_csv(dir / "trajectory.csv");
  EXPECT_EQ(traj.rows, 30u);  // 3 reps x 2 times x 5 particles
  fs::remove_all(dir);
}

TEST(LemmaSuite, CountingAndAlg45) {
  LemmaSuiteParams p;
  const auto counting = run_lemma_suite(LemmaKind::counting, p);
  EXPECT_EQ(counting.size(), 60u);
  for (const auto& c : counting) EXPECT_TRUE(c.holds);
  for (const char* key : {"lemma", "params", "lhs", "rhs", "holds", "count", "bound", "estimate", "se", "reps", "seed"}) {
    EXPECT_TRUE(counting.front().report.contains(key)) << key;
  }
  const auto alg = run_lemma_suite(LemmaKind::alg45, p);
  EXPECT_EQ(alg.size(), 3u * 199u * 3u);
  for (const auto& c : alg) ASSERT_TRUE(c.holds) << c.name;
  p.grid = "huge";
  EXPECT_THROW(run_lemma_suite(LemmaKind::alg45, p), ParameterError);
  EXPECT_THROW(parse_lemma_kind("lemma44"), ParameterError);

  const fs::path dir = scratch("lemma");
  const auto files = write_lemma_reports({counting.begin(), counting.begin() + 2}, dir);
  ASSERT_EQ(files.size(), 2u);
  const std::string text = read_file(files[0]);
  EXPECT_EQ(text, dump_json(json::parse(text)));
  EXPECT_LT(text.find("\"bound\""), text.find("\"count\""));  // sorted keys
  fs::remove_all(dir);
}

TEST(LemmaSuite, ZeroExpectationConfigsSplitByCondition) {
  const auto cfgs = zero_expectation_configs();
  ASSERT_EQ(cfgs.size(), 6u);
  for (std::size_t c = 0; c < 6; ++c) {
    EXPECT_EQ(cfgs[c].n_particles, 3);
    EXPECT_LE(cfgs[c].total_length(), 2);
    EXPECT_EQ(condition1_holds(cfgs[c]), c < 3) << c;
    EXPECT_EQ(condition2_holds(cfgs[c]), c >= 3) << c;
  }
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  json doc = make_ou_doc(dir / "out");
  doc["sim"]["n_reps"] = 5;
  doc["sim"]["n_particles"] = 20;
  write_file(dir / "ok.json", doc.dump());
  doc["sim"]["n_reps"] = 0;
  write_file(dir / "bad.json", doc.dump());
  write_file(dir / "broken.json", "{ not json");

  EXPECT_EQ(run_cli("maxima --config " + (dir / "ok.json").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_EQ(run_cli("maxima --config " + (dir / "ok.json").string() + " --out " + (dir / "o2").string() + " --seed 9"), 0);
  EXPECT_NE(read_file(dir / "out" / "maxima_t0.csv"), read_file(dir / "o2" / "maxima_t0.csv"));
  EXPECT_EQ(run_cli("simulate --config " + (dir / "ok.json").string()), 0);
  EXPECT_EQ(run_cli("maxima --config " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(run_cli("maxima --config " + (dir / "broken.json").string()), 2);
  EXPECT_EQ(run_cli("maxima --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("maxima"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("verify-lemmas --lemma counting --max-n 4 --out " + (dir / "lem").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "lem" / "counting_N2_k1_kappa1.json"));
  EXPECT_EQ(run_cli("verify-lemmas --lemma alg45 --grid default --out " + (dir / "lem").string()), 0);
  EXPECT_EQ(run_cli("verify-lemmas --lemma lemma44"), 2);
  EXPECT_EQ(run_cli("stationary --drift linear --out " + (dir / "st").string()), 0);
  EXPECT_EQ(read_csv(dir / "st" / "stationary.csv").header, (std::vector<std::string>{"x", "F", "f"}));
  EXPECT_EQ(run_cli("stationary --drift 'affine(1,0)' --out " + (dir / "st").string()), 2);
  EXPECT_EQ(run_cli("plot --csv " + (dir / "out" / "maxima_t0.csv").string() + " --kind ecdf_overlay --out " +
                    (dir / "p.svg").string()),
            0);
  EXPECT_EQ(run_cli("plot --csv " + (dir / "out" / "maxima_t0.csv").string() + " --kind ks_vs_n --out " +
                    (dir / "p2.svg").string()),
            2);

  // A drift that explodes turns into a numeric failure.
  json blow = make_ou_doc(dir / "blow");
  blow["model"]["params"]["kappa"] = -1e100;
  blow["sim"]["n_reps"] = 1;
  write_file(dir / "blow.json", blow.dump());
  EXPECT_EQ(run_cli("simulate --config " + (dir / "blow.json").string()), 3);
  fs::remove_all(dir);
}
