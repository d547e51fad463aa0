#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "imsparkle/signal_sim.hpp"

namespace imsparkle {

namespace {

using nlohmann::json;

// Sections a harness config may carry next to the scenario itself.
const std::set<std::string> kScenarioKeys = {
    "center_frequency", "sweep_time", "bandwidth", "lpf_cutoff", "lpf_stopband",
    "sampling_rate",    "sweep_direction", "targets", "interferers", "snr_db",
    "target_sinr0_db",  "seed"};
const std::set<std::string> kIgnoredKeys = {"description", "solver", "rpca", "montecarlo",
                                            "duration_sweep"};

double require_number(const json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("scenario: missing field '") + key + "'");
  if (!j.at(key).is_number()) {
    throw std::invalid_argument(std::string("scenario: field '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

double optional_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return require_number(j, key);
}

// Accepts a number or the strings "inf" / "+inf".
double parse_snr(const json& j) {
  if (!j.contains("snr_db")) return std::numeric_limits<double>::infinity();
  const json& v = j.at("snr_db");
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v == "inf" || v == "+inf")) return std::numeric_limits<double>::infinity();
  throw std::invalid_argument("scenario: snr_db must be a number or \"inf\"");
}

}  // namespace

FmcwScenario scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("scenario: top level must be an object");
  for (const auto& item : j.items()) {
    if (!kScenarioKeys.count(item.key()) && !kIgnoredKeys.count(item.key())) {
      throw std::invalid_argument("scenario: unknown field '" + item.key() + "'");
    }
  }

  FmcwScenario s;
  s.center_frequency = require_number(j, "center_frequency");
  s.sweep_time = require_number(j, "sweep_time");
  s.bandwidth = require_number(j, "bandwidth");
  s.lpf_cutoff = require_number(j, "lpf_cutoff");
  if (j.contains("lpf_stopband")) s.lpf_stopband = require_number(j, "lpf_stopband");
  s.sampling_rate = require_number(j, "sampling_rate");
  const std::string direction = j.value("sweep_direction", std::string("up"));
  if (direction == "up") {
    s.sweep_direction = SweepDirection::kUp;
  } else if (direction == "down") {
    s.sweep_direction = SweepDirection::kDown;
  } else {
    throw std::invalid_argument("scenario: sweep_direction must be \"up\" or \"down\"");
  }
  s.snr_db = parse_snr(j);
  if (j.contains("target_sinr0_db")) s.target_sinr0_db = require_number(j, "target_sinr0_db");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw std::invalid_argument("scenario: seed must be a nonnegative integer");
    }
    s.seed = j.at("seed").get<std::uint64_t>();
  }

  for (const auto& t : j.value("targets", json::array())) {
    TargetSpec spec;
    spec.range = require_number(t, "range");
    spec.amplitude_magnitude = optional_number(t, "amplitude_magnitude", 1.0);
    spec.amplitude_phase = optional_number(t, "amplitude_phase", 0.0);
    s.targets.push_back(spec);
  }
  for (const auto& it : j.value("interferers", json::array())) {
    InterfererSpec spec;
    spec.slope_multiple = require_number(it, "slope_multiple");
    spec.center_time = require_number(it, "center_time");
    spec.amplitude_magnitude = optional_number(it, "amplitude_magnitude", 1.0);
    spec.amplitude_phase = optional_number(it, "amplitude_phase", 0.0);
    s.interferers.push_back(spec);
  }
  s.validate();
  return s;
}

FmcwScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json_text(buffer.str());
}

std::string scenario_to_json_text(const FmcwScenario& s) {
  json j;
  j["center_frequency"] = s.center_frequency;
  j["sweep_time"] = s.sweep_time;
  j["bandwidth"] = s.bandwidth;
  j["lpf_cutoff"] = s.lpf_cutoff;
  if (s.lpf_stopband) j["lpf_stopband"] = *s.lpf_stopband;
  j["sampling_rate"] = s.sampling_rate;
  j["sweep_direction"] = s.sweep_direction == SweepDirection::kUp ? "up" : "down";
  if (std::isinf(s.snr_db)) {
    j["snr_db"] = "inf";
  } else {
    j["snr_db"] = s.snr_db;
  }
  if (s.target_sinr0_db) j["target_sinr0_db"] = *s.target_sinr0_db;
  j["seed"] = s.seed;
  j["targets"] = json::array();
  for (const auto& t : s.targets) {
    j["targets"].push_back({{"range", t.range},
                            {"amplitude_magnitude", t.amplitude_magnitude},
                            {"amplitude_phase", t.amplitude_phase}});
  }
  j["interferers"] = json::array();
  for (const auto& it : s.interferers) {
    j["interferers"].push_back({{"slope_multiple", it.slope_multiple},
                                {"center_time", it.center_time},
                                {"amplitude_magnitude", it.amplitude_magnitude},
                                {"amplitude_phase", it.amplitude_phase}});
  }
  return j.dump(2);
}

}  // namespace imsparkle
