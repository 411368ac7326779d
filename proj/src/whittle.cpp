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

#include "wpsum/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "wpsum/errors.hpp"
#include "wpsum/quad_forms.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

namespace {

constexpr double kLower = -0.49;
constexpr double kUpper = 0.49;
constexpr int kGridPoints = 981;
constexpr double kTolerance = 1e-6;

// Log-frequencies and periodogram ordinates of the lowest m Fourier
// frequencies, ordinates rescaled by their mean. The rescaling only shifts
// the objective by a constant and makes the minimizer invariant under
// power-of-two rescaling of the series bit for bit.
struct LowBand {
  std::vector<double> log_u;
  std::vector<double> scaled;
  double mean_log_u = 0.0;
  double log_mean = 0.0;
};

LowBand low_band(const Periodogram& pgram, std::size_t m) {
  const std::size_t nu = summation_limit(pgram.n);
  if (m < 1 || m > nu) throw DomainError("bandwidth must satisfy 1 <= m <= nu");
  LowBand band;
  band.log_u.resize(m);
  band.scaled.resize(m);
  CompensatedSum total, logs;
  for (std::size_t j = 1; j <= m; ++j) {
    const double ij = pgram.ordinates[j];
    if (!(ij > 0.0)) throw DegeneratePeriodogram("periodogram ordinate " + std::to_string(j) + " is zero");
    total += ij;
    band.log_u[j - 1] = std::log(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(pgram.n));
    logs += band.log_u[j - 1];
  }
  const double mean = total.value() / static_cast<double>(m);
  for (std::size_t j = 1; j <= m; ++j) band.scaled[j - 1] = pgram.ordinates[j] / mean;
  band.mean_log_u = logs.value() / static_cast<double>(m);
  band.log_mean = std::log(mean);
  return band;
}

// R(d) - log(mean I_j).
double reduced_objective(double d, const LowBand& band) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < band.scaled.size(); ++j) acc += std::exp(2.0 * d * band.log_u[j]) * band.scaled[j];
  return std::log(acc.value() / static_cast<double>(band.scaled.size())) - 2.0 * d * band.mean_log_u;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kTolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> lw_weights(std::size_t n, std::size_t m) {
  const std::size_t nu = summation_limit(n);
  if (m < 1 || m > nu) throw DomainError("bandwidth must satisfy 1 <= m <= nu = " + std::to_string(nu));
  std::vector<double> w = generate_weights(WeightScheme::local_whittle(m), n);
  w.resize(m);
  return w;
}

double lw_objective(double d, const Periodogram& pgram, std::size_t m) {
  if (!(std::abs(d) < 0.5)) throw DomainError("local Whittle objective needs |d| < 1/2");
  const LowBand band = low_band(pgram, m);
  return reduced_objective(d, band) + band.log_mean;
}

std::size_t default_whittle_bandwidth(std::size_t n) {
  return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.65)));
}

WhittleResult estimate_d(std::span<const double> series, std::size_t m) {
  const Periodogram pgram = periodogram(series);
  const std::size_t nu = summation_limit(pgram.n);
  if (m < 8 || m > nu) throw DomainError("bandwidth must satisfy 8 <= m <= nu = " + std::to_string(nu));
  const LowBand band = low_band(pgram, m);
  const auto objective = [&](double d) { return reduced_objective(d, band); };

  WhittleResult result;
  result.m = m;
  result.std_error = 1.0 / (2.0 * std::sqrt(static_cast<double>(m)));
  std::vector<double> grid(kGridPoints), values(kGridPoints);
  const double step = (kUpper - kLower) / (kGridPoints - 1);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = kLower + step * i;
    values[i] = objective(grid[i]);
    result.objective_curve.emplace_back(grid[i], values[i] + band.log_mean);
  }
  const auto best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  bool unimodal = true;
  for (int i = 1; i < kGridPoints; ++i) {
    if (i <= best && values[i] > values[i - 1]) unimodal = false;
    if (i > best && values[i] < values[i - 1]) unimodal = false;
  }
  double lo = kLower, hi = kUpper;
  if (!unimodal) {
    lo = grid[std::max(best - 1, 0)];
    hi = grid[std::min(best + 1, kGridPoints - 1)];
  }
  double d_hat = golden_section(objective, lo, hi);
  if (objective(d_hat) > values[best]) d_hat = grid[best];
  result.d_hat = d_hat;
  return result;
}

}  // namespace wpsum
