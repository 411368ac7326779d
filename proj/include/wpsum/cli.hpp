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

#ifndef WPSUM_CLI_HPP_
#define WPSUM_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpsum/config.hpp"
#include "wpsum/mc_harness.hpp"

namespace wpsum {

struct RunOptions {
  unsigned threads = 0;  // 0 picks the hardware concurrency
};

struct RunResult {
  nlohmann::json summary;  // also written to <out>/summary.json
  std::string line;        // one-line human-readable summary
};

/// Executes config.command and writes its outputs under config.out. Throws
/// the library's error types on failure.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

// Validates, runs, prints the summary line to `out` and maps failures to
// exit codes: 0 success, 2 invalid configuration, 3 runtime failure.
int execute(const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
            std::ostream& err);

// Plot data. CLT: rep_index,n,statistic. QQ: theoretical_quantile,empirical_quantile
// at 200 points. Bounds: one row per n, and a long form n,quantity,value.
void write_detail_csv(const std::string& path, const MCStudySummary& study);
void write_qq_csv(const std::string& path, const std::vector<double>& values);
void write_bounds_csv(const std::string& path, const BoundStudy& study);
void write_bounds_long_csv(const std::string& path, const BoundStudy& study);

}  // namespace wpsum

#endif  // WPSUM_CLI_HPP_
