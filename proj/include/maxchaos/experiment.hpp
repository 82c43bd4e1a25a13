#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxchaos/config.hpp"
#include "maxchaos/evt.hpp"
#include "maxchaos/lemmas.hpp"

namespace maxchaos {

/// Maxima of the interacting systems and of the matched i.i.d. reference at
/// one evaluation time.
struct TimeSlice {
  double time = 0.0;
  MaximaSample interacting;
  MaximaSample reference;
  EvtReport report;
};

struct ExperimentResult {
  std::vector<TimeSlice> slices;
  /// Distance between the interacting maxima at the first and last time.
  std::optional<double> joint_independence_distance;
};

/// Normalizing constants of the i.i.d. limit at time t: Gaussian for the OU
/// model, the von Mises convention on the stationary law for rank models.
NormalizingConstants limit_constants(const DriftInteractionModel& model, Index n, double t);

/// Simulates n_reps interacting systems and n_reps i.i.d. references on an
/// independent stream, then compares their normalized maxima at every
/// evaluation time.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const DriftInteractionModel& model);

/// Report for one slice (keys sorted by nlohmann's ordered map).
nlohmann::json report_json(const ExperimentConfig& cfg, const TimeSlice& slice,
                           std::optional<double> joint_independence_distance);

/// maxima_t<k>.csv, reference_maxima_t<k>.csv, report_t<k>.json,
/// ecdf_t<k>.svg and report.json (last time), gated by output.formats.
/// Returns the written paths.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Runs n_reps interacting systems to the horizon and writes final_state.csv
/// plus trajectory.csv sampled at the evaluation times.
std::vector<std::filesystem::path> run_simulation(const ExperimentConfig& cfg);

enum class LemmaKind { counting, alg45, zero_expectation, lp };

LemmaKind parse_lemma_kind(const std::string& name);
std::string to_string(LemmaKind kind);

struct LemmaSuiteParams {
  int max_n = 4;
  int max_blocks = 2;
  int max_block_size = 2;
  std::string grid = "default";
  Index reps = 20000;
  std::uint64_t seed = 0;
  double dt = 0.002;
  unsigned workers = 1;
};

struct LemmaCase {
  std::string name;  ///< file stem
  nlohmann::json report;
  bool holds = true;
};

/// One report per lemma case with keys lemma, params, lhs, rhs, holds,
/// count, bound, estimate, se, reps, seed (null where not applicable).
std::vector<LemmaCase> run_lemma_suite(LemmaKind which, const LemmaSuiteParams& params);

/// Writes one pretty-printed JSON file per case into `directory`.
std::vector<std::filesystem::path> write_lemma_reports(const std::vector<LemmaCase>& cases,
                                                       const std::filesystem::path& directory);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

/// The six index configurations (N = 3, one evaluation index) used for the
/// vanishing-expectation check: three meet only the first condition, three
/// only the second.
std::vector<IndexConfig> zero_expectation_configs();

}  // namespace maxchaos
