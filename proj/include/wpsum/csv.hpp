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

#ifndef WPSUM_CSV_HPP_
#define WPSUM_CSV_HPP_

#include <string>
#include <vector>

namespace wpsum::csv {

// Shortest text that parses back to the same double.
std::string format_double(double x);

// Reads the first column of a CSV file as doubles. A leading non-numeric
// line is treated as a header and skipped. Throws IoError.
std::vector<double> read_column(const std::string& path);

// Writes `values` one per line under `header`. Throws IoError.
void write_column(const std::string& path, const std::string& header,
                  const std::vector<double>& values);

}  // namespace wpsum::csv

#endif  // WPSUM_CSV_HPP_
