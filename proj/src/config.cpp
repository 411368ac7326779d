// Copyright 2026 The wpsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpsum/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "wpsum/csv.hpp"
#include "wpsum/errors.hpp"
#include "wpsum/spectral_core.hpp"
#include "wpsum/whittle.hpp"

namespace wpsum {
namespace {

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"simulate", Command::kSimulate}, {"qform", Command::kQform},
      {"mc", Command::kMc},             {"bounds", Command::kBounds},
      {"counterexample", Command::kCounterexample},
      {"whittle", Command::kWhittle},   {"prop2", Command::kProp2}};
  return names;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& what, int line) {
  if (line > 0) throw ParseError(line, "key '" + key + "': " + what);
  throw ValidationError(key, what);
}

double to_double(const std::string& key, const std::string& v, int line) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end || !std::isfinite(x)) {
    bad_value(key, "expected a finite number, got '" + v + "'", line);
  }
  return x;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& v, int line) {
  Int x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (v.empty() || ec != std::errc() || ptr != end) {
    bad_value(key, "expected an integer, got '" + v + "'", line);
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, "expected true or false, got '" + v + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> items;
  if (trim(v).empty()) return items;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) items.push_back(trim(item));
  return items;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item, line));
  return out;
}

template <typename Fn>
auto named(const std::string& key, const std::string& v, int line, Fn parse) {
  try {
    return parse(v);
  } catch (const DomainError& e) {
    bad_value(key, e.what(), line);
  }
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += csv::format_double(xs[i]);
  }
  return out;
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [name, value] : command_names()) {
    if (value == c) return name;
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  const auto it = command_names().find(name);
  if (it == command_names().end()) throw DomainError("unknown command: " + name);
  return it->second;
}

ModelSpec ExperimentConfig::model_spec() const {
  ModelSpec spec;
  spec.kind = model;
  spec.d = d;
  spec.ar = ar;
  spec.ma = ma;
  spec.short_coeffs = short_coeffs;
  spec.truncation = truncation;
  return spec;
}

WeightScheme ExperimentConfig::weight_scheme(std::size_t for_n) const {
  switch (weights) {
    case WeightKind::kUniform:
      return WeightScheme::uniform();
    case WeightKind::kIndicator:
      return WeightScheme::indicator(weight_threshold);
    case WeightKind::kCosine:
      return WeightScheme::cosine(weight_lag);
    case WeightKind::kKernelAt:
      return WeightScheme::kernel_at(kernel_center, kernel_bandwidth);
    case WeightKind::kLocalWhittle:
      return WeightScheme::local_whittle(lw_m ? lw_m : default_whittle_bandwidth(for_n));
    case WeightKind::kCounterexample:
      return WeightScheme::counterexample(counterexample_d);
    case WeightKind::kCustom:
      return WeightScheme::from_csv(weights_file);
  }
  return WeightScheme::uniform();
}

MCStudyConfig ExperimentConfig::study_config(unsigned threads) const {
  MCStudyConfig c;
  c.model = model_spec();
  c.innovation = InnovationSpec::of(innovation);
  c.scheme = weight_scheme(sizes().back());
  c.n_grid = sizes();
  c.replications = replications;
  c.master_seed = seed;
  c.statistic = statistic;
  c.include_nyquist = include_nyquist;
  c.theta_band = theta_band;
  c.threads = threads;
  return c;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (key == "command") {
    c.command = named(key, v, line, parse_command);
  } else if (key == "model") {
    c.model = named(key, v, line, parse_model_kind);
  } else if (key == "d") {
    c.d = to_double(key, v, line);
  } else if (key == "ar") {
    c.ar = to_doubles(key, v, line);
  } else if (key == "ma") {
    c.ma = to_doubles(key, v, line);
  } else if (key == "short_coeffs") {
    c.short_coeffs = to_doubles(key, v, line);
  } else if (key == "truncation") {
    c.truncation = to_integer<std::size_t>(key, v, line);
  } else if (key == "innovation") {
    c.innovation = named(key, v, line, parse_innovation_family);
  } else if (key == "weights") {
    c.weights = named(key, v, line, parse_weight_kind);
  } else if (key == "weight_threshold") {
    c.weight_threshold = to_double(key, v, line);
  } else if (key == "weight_lag") {
    c.weight_lag = to_integer<long>(key, v, line);
  } else if (key == "kernel_center") {
    c.kernel_center = to_double(key, v, line);
  } else if (key == "kernel_bandwidth") {
    c.kernel_bandwidth = to_double(key, v, line);
  } else if (key == "lw_m") {
    c.lw_m = to_integer<std::size_t>(key, v, line);
  } else if (key == "counterexample_d") {
    c.counterexample_d = to_double(key, v, line);
  } else if (key == "weights_file") {
    c.weights_file = v;
  } else if (key == "n") {
    c.n = to_integer<std::size_t>(key, v, line);
  } else if (key == "n_grid") {
    c.n_grid.clear();
    for (const auto& item : split_list(v)) c.n_grid.push_back(to_integer<std::size_t>(key, item, line));
  } else if (key == "replications") {
    c.replications = to_integer<std::size_t>(key, v, line);
  } else if (key == "seed") {
    c.seed = to_integer<std::uint64_t>(key, v, line);
  } else if (key == "statistic") {
    c.statistic = named(key, v, line, parse_statistic);
  } else if (key == "include_nyquist") {
    c.include_nyquist = to_bool(key, v, line);
  } else if (key == "theta_band") {
    if (v.empty()) {
      c.theta_band.reset();
    } else {
      c.theta_band = to_double(key, v, line);
    }
  } else if (key == "input") {
    c.input = v;
  } else if (key == "whittle_m") {
    c.whittle_m = to_integer<std::size_t>(key, v, line);
  } else if (key == "prop2_j_fraction") {
    c.prop2_j_fraction = to_double(key, v, line);
  } else if (key == "prop2_j_offset") {
    c.prop2_j_offset = to_integer<long>(key, v, line);
  } else if (key == "prop2_k_fraction") {
    c.prop2_k_fraction = to_double(key, v, line);
  } else if (key == "prop2_k_offset") {
    c.prop2_k_offset = to_integer<long>(key, v, line);
  } else if (key == "out") {
    c.out = v;
  } else {
    bad_value(key, "unknown key", line);
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    if (key.empty()) throw ParseError(line, "missing key");
    apply_setting(c, key, content.substr(eq + 1), line);
  }
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c = parse_config_text(text);
  validate(c);
  return c;
}

void validate(const ExperimentConfig& c) {
  if (std::abs(c.d) >= 0.5) throw ValidationError("d", "require |d| < 1/2");
  try {
    check_causal(c.ar);
  } catch (const DomainError& e) {
    throw ValidationError("ar", e.what());
  }
  if (c.model == ModelKind::kMovingAverage && c.ma.empty()) {
    throw ValidationError("ma", "a moving average needs coefficients a_0..a_q");
  }
  if (c.model == ModelKind::kFractionalOfShortMemory && c.short_coeffs.empty()) {
    throw ValidationError("short_coeffs", "the short-memory filter needs coefficients");
  }
  try {
    c.model_spec().validate();
  } catch (const DomainError& e) {
    throw ValidationError("model", e.what());
  }

  const auto sizes = c.sizes();
  const bool study = c.command == Command::kMc || c.command == Command::kBounds ||
                     c.command == Command::kCounterexample;
  const std::string size_key = c.n_grid.empty() ? "n" : "n_grid";
  for (std::size_t n : sizes) {
    if (n < 8) throw ValidationError(size_key, "sample size must be at least 8");
    if (study && n < 64) throw ValidationError(size_key, "studies need n >= 64");
  }
  if (study && c.replications < 100) {
    throw ValidationError("replications", "studies need at least 100 replications");
  }
  if (c.command == Command::kBounds &&
      (sizes.size() < 3 || 10 * sizes.front() > sizes.back())) {
    throw ValidationError("n_grid", "bound studies need at least three sizes spanning a decade");
  }
  if (c.theta_band && !(*c.theta_band > 0.0 && *c.theta_band <= 0.5)) {
    throw ValidationError("theta_band", "require 0 < theta <= 1/2");
  }
  if (c.command == Command::kCounterexample &&
      !(c.counterexample_d > 0.25 && c.counterexample_d < 0.5)) {
    throw ValidationError("counterexample_d", "require 1/4 < d < 1/2");
  }

  static const std::map<WeightKind, std::string> weight_keys{
      {WeightKind::kUniform, "weights"},          {WeightKind::kIndicator, "weight_threshold"},
      {WeightKind::kCosine, "weight_lag"},        {WeightKind::kKernelAt, "kernel_center"},
      {WeightKind::kLocalWhittle, "lw_m"},        {WeightKind::kCounterexample, "counterexample_d"},
      {WeightKind::kCustom, "weights_file"}};
  if (c.command != Command::kSimulate && c.command != Command::kWhittle &&
      c.command != Command::kProp2 && c.command != Command::kCounterexample) {
    const std::string& key = weight_keys.at(c.weights);
    if (c.weights == WeightKind::kCustom && c.weights_file.empty()) {
      throw ValidationError(key, "custom weights need a weights_file");
    }
    try {
      for (std::size_t n : sizes) generate_weights(c.weight_scheme(n), n, c.include_nyquist);
    } catch (const DomainError& e) {
      throw ValidationError(key, e.what());
    } catch (const IoError& e) {
      throw ValidationError(key, e.what());
    }
  }

  if (c.command == Command::kWhittle && c.input.empty()) {
    const std::size_t m = c.whittle_m ? c.whittle_m : default_whittle_bandwidth(c.n);
    if (m < 8 || m > summation_limit(c.n)) {
      throw ValidationError("whittle_m", "require 8 <= m <= floor(n/2) - 1");
    }
  }
  if (c.command == Command::kProp2) {
    for (const auto& [key, f] : {std::pair{"prop2_j_fraction", c.prop2_j_fraction},
                                 std::pair{"prop2_k_fraction", c.prop2_k_fraction}}) {
      if (!(f > 0.0 && f < 0.5)) throw ValidationError(key, "require 0 < fraction < 1/2");
    }
  }
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto put = [&os](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  put("command", to_string(c.command));
  put("model", to_string(c.model));
  put("d", csv::format_double(c.d));
  put("ar", join(c.ar));
  put("ma", join(c.ma));
  put("short_coeffs", join(c.short_coeffs));
  put("truncation", std::to_string(c.truncation));
  put("innovation", to_string(c.innovation));
  put("weights", to_string(c.weights));
  put("weight_threshold", csv::format_double(c.weight_threshold));
  put("weight_lag", std::to_string(c.weight_lag));
  put("kernel_center", csv::format_double(c.kernel_center));
  put("kernel_bandwidth", csv::format_double(c.kernel_bandwidth));
  put("lw_m", std::to_string(c.lw_m));
  put("counterexample_d", csv::format_double(c.counterexample_d));
  put("weights_file", c.weights_file);
  put("n", std::to_string(c.n));
  put("n_grid", join(c.n_grid));
  put("replications", std::to_string(c.replications));
  put("seed", std::to_string(c.seed));
  put("statistic", to_string(c.statistic));
  put("include_nyquist", c.include_nyquist ? "true" : "false");
  put("theta_band", c.theta_band ? csv::format_double(*c.theta_band) : "");
  put("input", c.input);
  put("whittle_m", std::to_string(c.whittle_m));
  put("prop2_j_fraction", csv::format_double(c.prop2_j_fraction));
  put("prop2_j_offset", std::to_string(c.prop2_j_offset));
  put("prop2_k_fraction", csv::format_double(c.prop2_k_fraction));
  put("prop2_k_offset", std::to_string(c.prop2_k_offset));
  put("out", c.out);
  return os.str();
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  j["model"] = to_string(c.model);
  j["d"] = c.d;
  j["ar"] = c.ar;
  j["ma"] = c.ma;
  j["short_coeffs"] = c.short_coeffs;
  j["truncation"] = c.truncation;
  j["innovation"] = to_string(c.innovation);
  j["weights"] = to_string(c.weights);
  j["weight_threshold"] = c.weight_threshold;
  j["weight_lag"] = c.weight_lag;
  j["kernel_center"] = c.kernel_center;
  j["kernel_bandwidth"] = c.kernel_bandwidth;
  j["lw_m"] = c.lw_m;
  j["counterexample_d"] = c.counterexample_d;
  j["weights_file"] = c.weights_file;
  j["n"] = c.n;
  j["n_grid"] = c.sizes();
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["statistic"] = to_string(c.statistic);
  j["include_nyquist"] = c.include_nyquist;
  j["theta_band"] = c.theta_band ? nlohmann::json(*c.theta_band) : nlohmann::json(nullptr);
  j["input"] = c.input;
  j["whittle_m"] = c.whittle_m;
  j["prop2_j_fraction"] = c.prop2_j_fraction;
  j["prop2_j_offset"] = c.prop2_j_offset;
  j["prop2_k_fraction"] = c.prop2_k_fraction;
  j["prop2_k_offset"] = c.prop2_k_offset;
  j["out"] = c.out;
  return j;
}

}  // namespace wpsum
