#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "maxchaos/evt.hpp"
#include "maxchaos/models.hpp"
#include "maxchaos/sde.hpp"

namespace maxchaos {

struct ModelSection {
  std::string type = "ou";  ///< "ou" or "rank"
  OUModelParams ou;
  std::string drift = "linear";  ///< rank drift registry entry
  double lipschitz_bound = 0.0;
};

struct EvtSection {
  std::vector<double> times;
  LimitFamily limit_family = LimitFamily::gumbel;
};

struct OutputSection {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json", "svg"};

  bool wants(const std::string& format) const;
};

/// One JSON experiment file: model, sim, evt and output sections.
struct ExperimentConfig {
  ModelSection model;
  SimConfig sim;
  unsigned workers = 1;
  EvtSection evt;
  OutputSection output;
};

/// Throws ConfigError naming the offending key path, e.g. "sim.n_reps".
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const ModelSection& model);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Builds the model named by the section.
DriftInteractionModel build_model(const ModelSection& section);

}  // namespace maxchaos
