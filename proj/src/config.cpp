#include "maxchaos/config.hpp"

#include <algorithm>
#include <cmath>

#include "maxchaos/errors.hpp"
#include "maxchaos/io.hpp"

namespace maxchaos {

using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key + ": missing required key");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

long long positive_integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer() || v.get<long long>() <= 0) {
    throw ConfigError(path + "." + key + ": expected a positive integer");
  }
  return v.get<long long>();
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

ModelSection parse_model(const json& m) {
  ModelSection out;
  out.type = text(m, "type", "model");
  const json& params = m.contains("params") ? m.at("params") : json::object();
  if (!params.is_object()) throw ConfigError("model.params: expected an object");
  if (out.type == "ou") {
    out.ou.kappa = number_or(params, "kappa", "model.params", out.ou.kappa);
    out.ou.sigma = number_or(params, "sigma", "model.params", out.ou.sigma);
    out.ou.m0 = number_or(params, "m0", "model.params", out.ou.m0);
    out.ou.sigma0 = number_or(params, "sigma0", "model.params", out.ou.sigma0);
    try {
      validate(out.ou);
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("model.params: ") + e.what());
    }
  } else if (out.type == "rank") {
    if (params.contains("drift")) out.drift = text(params, "drift", "model.params");
    out.lipschitz_bound = number_or(params, "lipschitz_bound", "model.params", 0.0);
    try {
      parse_drift(out.drift);
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("model.params.drift: ") + e.what());
    }
  } else {
    throw ConfigError("model.type: expected \"ou\" or \"rank\"");
  }
  return out;
}

}  // namespace

bool OutputSection::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$: expected a JSON object");
  ExperimentConfig cfg;
  cfg.model = parse_model(require(doc, "model", "$"));

  const json& sim = require(doc, "sim", "$");
  cfg.sim.n_particles = positive_integer(sim, "n_particles", "sim");
  cfg.sim.n_reps = positive_integer(sim, "n_reps", "sim");
  cfg.sim.dt = number(sim, "dt", "sim");
  cfg.sim.horizon = number(sim, "horizon", "sim");
  const json& seed = require(sim, "seed", "sim");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    throw ConfigError("sim.seed: expected a nonnegative integer");
  }
  cfg.sim.seed = seed.get<std::uint64_t>();
  if (sim.contains("scheme") && text(sim, "scheme", "sim") != "euler") {
    throw ConfigError("sim.scheme: only \"euler\" is supported");
  }
  if (sim.contains("workers")) cfg.workers = static_cast<unsigned>(positive_integer(sim, "workers", "sim"));
  try {
    validate(cfg.sim);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("sim: ") + e.what());
  }

  const json& evt = require(doc, "evt", "$");
  const json& times = require(evt, "times", "evt");
  if (!times.is_array() || times.empty()) throw ConfigError("evt.times: expected a nonempty array");
  for (std::size_t k = 0; k < times.size(); ++k) {
    const std::string path = "evt.times[" + std::to_string(k) + "]";
    if (!times[k].is_number()) throw ConfigError(path + ": expected a number");
    const double t = times[k].get<double>();
    if (!(t > 0.0) || t > cfg.sim.horizon * (1.0 + 1e-12)) throw ConfigError(path + ": must lie in (0, horizon]");
    try {
      step_index_of(cfg.sim, t);
    } catch (const DomainError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (!cfg.evt.times.empty() && t <= cfg.evt.times.back()) throw ConfigError(path + ": times must increase");
    cfg.evt.times.push_back(t);
  }
  if (evt.contains("limit_family")) {
    try {
      cfg.evt.limit_family = parse_limit_family(text(evt, "limit_family", "evt"));
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("evt.limit_family: ") + e.what());
    }
  }

  const json& output = require(doc, "output", "$");
  cfg.output.directory = text(output, "directory", "output");
  if (output.contains("formats")) {
    const json& formats = output.at("formats");
    if (!formats.is_array()) throw ConfigError("output.formats: expected an array");
    cfg.output.formats.clear();
    for (std::size_t k = 0; k < formats.size(); ++k) {
      const std::string path = "output.formats[" + std::to_string(k) + "]";
      if (!formats[k].is_string()) throw ConfigError(path + ": expected a string");
      const auto f = formats[k].get<std::string>();
      if (f != "csv" && f != "json" && f != "svg") throw ConfigError(path + ": expected csv, json or svg");
      cfg.output.formats.push_back(f);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string contents;
  try {
    contents = read_file(path);
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ModelSection& m) {
  json params;
  if (m.type == "ou") {
    params = {{"kappa", m.ou.kappa}, {"sigma", m.ou.sigma}, {"m0", m.ou.m0}, {"sigma0", m.ou.sigma0}};
  } else {
    params = {{"drift", m.drift}, {"lipschitz_bound", m.lipschitz_bound}};
  }
  return {{"type", m.type}, {"params", params}};
}

json to_json(const ExperimentConfig& cfg) {
  return {
      {"model", to_json(cfg.model)},
      {"sim",
       {{"n_particles", cfg.sim.n_particles},
        {"n_reps", cfg.sim.n_reps},
        {"dt", cfg.sim.dt},
        {"horizon", cfg.sim.horizon},
        {"seed", cfg.sim.seed},
        {"scheme", "euler"},
        {"workers", cfg.workers}}},
      {"evt", {{"times", cfg.evt.times}, {"limit_family", to_string(cfg.evt.limit_family)}}},
      {"output", {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}}},
  };
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) { return to_json(a) == to_json(b); }

DriftInteractionModel build_model(const ModelSection& section) {
  if (section.type == "ou") return build_ou_model(section.ou);
  if (section.type == "rank") return build_rank_model({parse_drift(section.drift), section.lipschitz_bound});
  throw ConfigError("model.type: expected \"ou\" or \"rank\"");
}

}  // namespace maxchaos
