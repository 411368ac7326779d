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

#ifndef WPSUM_CONFIG_HPP_
#define WPSUM_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpsum/mc_harness.hpp"

namespace wpsum {

enum class Command { kSimulate, kQform, kMc, kBounds, kCounterexample, kWhittle, kProp2 };

std::string to_string(Command c);
Command parse_command(const std::string& name);

// Resolved experiment description. Text form: one `key = value` per line,
// `#` starts a comment, lists are comma separated. Defaults:
//
//   command = qform            model = white_noise       d = 0
//   ar =                       ma =                      short_coeffs =
//   truncation = 0             innovation = gaussian     weights = uniform
//   weight_threshold = pi      weight_lag = 1            kernel_center = 0
//   kernel_bandwidth = 0       lw_m = 0                  counterexample_d = 0.3
//   weights_file =             n = 1024                  n_grid =
//   replications = 1000        seed = 1                  statistic = std_s
//   include_nyquist = false    theta_band =              input =
//   whittle_m = 0              prop2_j_fraction = 0.125  prop2_j_offset = 0
//   prop2_k_fraction = 0.125   prop2_k_offset = 0        out = out
//
// Zero for truncation, lw_m and whittle_m selects the size-dependent default;
// an empty n_grid means {n}.
struct ExperimentConfig {
  Command command = Command::kQform;
  ModelKind model = ModelKind::kWhiteNoise;
  double d = 0.0;
  std::vector<double> ar;
  std::vector<double> ma;
  std::vector<double> short_coeffs;
  std::size_t truncation = 0;
  InnovationFamily innovation = InnovationFamily::kGaussian;
  WeightKind weights = WeightKind::kUniform;
  double weight_threshold = 3.141592653589793;
  long weight_lag = 1;
  double kernel_center = 0.0;
  double kernel_bandwidth = 0.0;
  std::size_t lw_m = 0;
  double counterexample_d = 0.3;
  std::string weights_file;
  std::size_t n = 1024;
  std::vector<std::size_t> n_grid;
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  Statistic statistic = Statistic::kStdS;
  bool include_nyquist = false;
  std::optional<double> theta_band;
  std::string input;
  std::size_t whittle_m = 0;
  double prop2_j_fraction = 0.125;
  long prop2_j_offset = 0;
  double prop2_k_fraction = 0.125;
  long prop2_k_offset = 0;
  std::string out = "out";

  bool operator==(const ExperimentConfig&) const = default;

  std::vector<std::size_t> sizes() const { return n_grid.empty() ? std::vector<std::size_t>{n} : n_grid; }
  ModelSpec model_spec() const;
  WeightScheme weight_scheme(std::size_t for_n) const;
  MCStudyConfig study_config(unsigned threads) const;
};

// Applies one key/value pair. Throws ParseError (line > 0) or
// ValidationError for unknown keys and malformed values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value,
                   int line = 0);

// Parses without cross-field validation.
ExperimentConfig parse_config_text(const std::string& text);
/// Parses and validates. Throws ParseError with the line number for
/// malformed lines and ValidationError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
void validate(const ExperimentConfig& config);

std::string serialize_config(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace wpsum

#endif  // WPSUM_CONFIG_HPP_
