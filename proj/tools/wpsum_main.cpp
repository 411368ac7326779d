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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "wpsum/cli.hpp"
#include "wpsum/config.hpp"
#include "wpsum/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wpsum::IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted periodogram sums: simulation, quadratic forms and Monte Carlo studies"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  unsigned threads = 0;
  std::vector<std::string> settings;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--threads", threads, "worker threads (0: all cores); results do not depend on it");
  app.add_option("--set", settings, "override a configuration key, as key=value");

  // Shorthand flags, applied after the file in this order.
  const std::vector<std::pair<std::string, std::string>> shorthands{
      {"seed", "master seed"},          {"out", "output directory"},
      {"n", "sample size"},             {"n_grid", "comma separated sample sizes"},
      {"replications", "Monte Carlo replications"},
      {"model", "white_noise, ma, arfima or fractional_short"},
      {"d", "memory parameter"},        {"ar", "AR coefficients"},
      {"ma", "MA coefficients"},        {"innovation", "innovation law"},
      {"weights", "weight scheme"},     {"statistic", "std_s, std_q, residual, bias_s or bias_q"},
      {"input", "series CSV"},          {"whittle_m", "local Whittle bandwidth"},
      {"counterexample_d", "memory parameter of the counterexample"}};
  std::vector<std::string> shorthand_values(shorthands.size());
  for (std::size_t i = 0; i < shorthands.size(); ++i) {
    std::string flag = "--" + shorthands[i].first;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    app.add_option(flag, shorthand_values[i], shorthands[i].second);
  }

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "simulate one path; writes series.csv and innovations.csv"},
      {"qform", "weighted periodogram sums of one path or --input series"},
      {"mc", "Monte Carlo normality study of a standardized statistic"},
      {"bounds", "residual moments against the bound shapes over n_grid"},
      {"counterexample", "normality study with the power-law counterexample weights"},
      {"whittle", "local Whittle estimate of d and its objective curve"},
      {"prop2", "exact DFT cross-covariance decay over n_grid"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  wpsum::ExperimentConfig config;
  try {
    config = wpsum::parse_config_text(config_path.empty() ? std::string() : read_file(config_path));
    config.command = wpsum::parse_command(command);
    for (std::size_t i = 0; i < shorthands.size(); ++i) {
      if (!shorthand_values[i].empty()) wpsum::apply_setting(config, shorthands[i].first, shorthand_values[i]);
    }
    for (const auto& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw wpsum::ValidationError(s, "expected key=value");
      wpsum::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
  } catch (const wpsum::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const wpsum::Error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  }
  return wpsum::execute(config, wpsum::RunOptions{threads}, std::cout, std::cerr);
}
