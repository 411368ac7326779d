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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "wpsum/cli.hpp"
#include "wpsum/config.hpp"
#include "wpsum/errors.hpp"

using namespace wpsum;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wpsum_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("empty configuration gives the documented defaults") {
  const auto c = parse_config("");
  CHECK(c.model == ModelKind::kWhiteNoise);
  CHECK(c.innovation == InnovationFamily::kGaussian);
  CHECK(c.weights == WeightKind::kUniform);
  CHECK(c.n == 1024);
  CHECK(c.replications == 1000);
  CHECK(c.seed == 1);
  CHECK(c.command == Command::kQform);
  CHECK_FALSE(c.theta_band.has_value());
  CHECK(c.sizes() == std::vector<std::size_t>{1024});
}

TEST_CASE("validation names the offending key") {
  try {
    parse_config("d = 0.6\n");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "d");
    CHECK(std::string(e.what()).find("|d| < 1/2") != std::string::npos);
  }
  try {
    parse_config("command = whittle\nn = 256\nwhittle_m = 200\n");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "whittle_m");
  }
  try {
    parse_config("model = arfima\nar = 1.2\n");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "ar");
  }
  CHECK_THROWS_AS(parse_config("command = mc\nreplications = 50\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("command = bounds\nn_grid = 256, 512\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("weights = local_whittle\nlw_m = 600\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("theta_band = 0.7\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("command = counterexample\ncounterexample_d = 0.1\n"), ValidationError);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config("# comment\nn = 512\n\nbogus_key = 3\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  try {
    parse_config("n = 512\nthis line has no equals sign\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  try {
    parse_config("n = 512\nd = abc\n");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("model = garch\n"), ParseError);
}

TEST_CASE("serialization round trip") {
  const auto text =
      "command = mc  # trailing comment\n"
      "model = arfima\nd = -0.3\nar = 0.5, -0.1\nma = 0.25\ntruncation = 5000\n"
      "innovation = centered_exponential\nweights = kernel\nkernel_center = 0.7\n"
      "kernel_bandwidth = 0.15\nn_grid = 256,1024\nreplications = 400\nseed = 18446744073709551615\n"
      "statistic = std_q\ninclude_nyquist = true\ntheta_band = 0.3\nout = /tmp/somewhere\n"
      "weight_threshold = 0.1\nprop2_k_offset = -2\n";
  const auto c = parse_config(text);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.ar == std::vector<double>{0.5, -0.1});
  CHECK(c.theta_band == 0.3);
  const auto again = parse_config(serialize_config(c));
  CHECK(again == c);
  CHECK(serialize_config(again) == serialize_config(c));
  const auto d = parse_config("");
  CHECK(parse_config(serialize_config(d)) == d);
}

TEST_CASE("resolved configuration is logged") {
  const auto j = to_json(parse_config("seed = 9\n"));
  CHECK(j["seed"] == 9);
  CHECK(j["model"] == "white_noise");
  CHECK(j["replications"] == 1000);
  CHECK(j["theta_band"].is_null());
}

TEST_CASE("simulate writes a reproducible series") {
  const auto dir = scratch("simulate");
  auto c = parse_config("command = simulate\nmodel = arfima\nd = 0.3\nn = 300\nseed = 5\n");
  c.out = (dir / "a").string();
  const auto r = run(c);
  CHECK(r.summary["schema_version"] == 1);
  CHECK(r.summary["config"]["seed"] == 5);
  c.out = (dir / "b").string();
  run(c);
  const auto a = slurp(dir / "a" / "series.csv");
  CHECK(a == slurp(dir / "b" / "series.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 301);
  CHECK(a.find('\r') == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("mc output files") {
  const auto dir = scratch("mc");
  auto c = parse_config("command = mc\nn = 256\nreplications = 200\n");
  c.out = dir.string();
  std::ostringstream out, err;
  CHECK(execute(c, RunOptions{1}, out, err) == 0);
  CHECK(out.str().rfind("mc:", 0) == 0);
  CHECK(first_line(dir / "detail.csv") == "rep_index,n,statistic");
  CHECK(first_line(dir / "qq.csv") == "theoretical_quantile,empirical_quantile");
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.contains("clt_rejected"));
  CHECK(summary["schema_version"] == 1);
  fs::remove_all(dir);
}

TEST_CASE("bounds csv schema") {
  const auto dir = scratch("bounds");
  auto c = parse_config("command = bounds\nn_grid = 64,128,640\nreplications = 100\n");
  c.out = dir.string();
  run(c, RunOptions{1});
  CHECK(first_line(dir / "bounds.csv") == "n,residual_msq,bound_bn2log3,bound_bnBn,bias_abs,bound_bnlog2");
  CHECK(first_line(dir / "bounds_long.csv") == "n,quantity,value");
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  std::ostringstream out, err;
  ExperimentConfig bad;
  bad.d = 0.7;
  bad.out = dir.string();
  CHECK(execute(bad, {}, out, err) == 2);
  ExperimentConfig missing;
  missing.command = Command::kWhittle;
  missing.input = (dir / "does_not_exist.csv").string();
  missing.out = dir.string();
  CHECK(execute(missing, {}, out, err) == 3);
  fs::remove_all(dir);
}
