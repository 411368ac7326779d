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

#include "wpsum/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wpsum/errors.hpp"

namespace wpsum::csv {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

bool parse_double(const std::string& text, double& out) {
  std::size_t b = text.find_first_not_of(" \t\r");
  std::size_t e = text.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  const char* first = text.data() + b;
  const char* last = text.data() + e + 1;
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

std::vector<double> read_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string field = line.substr(0, line.find(','));
    if (field.find_first_not_of(" \t\r") == std::string::npos) continue;
    double v = 0.0;
    if (!parse_double(field, v)) {
      if (line_no == 1) continue;  // header
      throw IoError(path + ":" + std::to_string(line_no) + ": not a number: " + field);
    }
    values.push_back(v);
  }
  return values;
}

void write_column(const std::string& path, const std::string& header,
                  const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << header << '\n';
  for (double v : values) out << format_double(v) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace wpsum::csv
