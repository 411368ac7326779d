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

#include "wpsum/normality.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "wpsum/errors.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

MomentSummary describe(std::span<const double> samples) {
  MomentSummary s;
  s.count = samples.size();
  if (samples.empty()) return s;
  const double r = static_cast<double>(samples.size());
  s.mean = compensated_sum(samples) / r;
  CompensatedSum m2, m3, m4;
  for (double x : samples) {
    const double dev = x - s.mean;
    const double sq = dev * dev;
    m2 += sq;
    m3 += sq * dev;
    m4 += sq * sq;
  }
  const double c2 = m2.value() / r;
  const double c3 = m3.value() / r;
  const double c4 = m4.value() / r;
  s.variance = samples.size() > 1 ? m2.value() / (r - 1.0) : 0.0;
  s.skewness = c2 > 0.0 ? c3 / std::pow(c2, 1.5) : 0.0;
  s.excess_kurtosis = c2 > 0.0 ? c4 / (c2 * c2) - 3.0 : 0.0;
  s.se_mean = std::sqrt(s.variance / r);
  s.se_variance = std::sqrt(std::max(0.0, c4 - c2 * c2) / r);
  s.se_skewness = std::sqrt(6.0 / r);
  s.se_kurtosis = std::sqrt(24.0 / r);
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  if (lambda < 1.0) {
    // P(K <= x) = sqrt(2 pi) / x sum_k exp(-(2k - 1)^2 pi^2 / (8 x^2))
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    for (int k = 1; k <= 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      sum += std::exp(-odd * odd * c);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double r = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Handle ties as one jump of the empirical CDF.
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / r));
    d = std::max(d, std::abs(static_cast<double>(j) / r - f));
    i = j;
  }
  return d;
}

NormalityResult normality_tests(std::span<const double> samples) {
  if (samples.size() < 100) {
    throw InsufficientSamples("normality tests need >= 100 samples, got " +
                              std::to_string(samples.size()));
  }
  const MomentSummary m = describe(samples);
  const double sd = std::sqrt(m.variance);
  auto cdf = [&](double x) {
    if (sd == 0.0) return x < m.mean ? 0.0 : (x > m.mean ? 1.0 : 0.5);
    return normal_cdf((x - m.mean) / sd);
  };
  NormalityResult res;
  res.ks_stat = ks_statistic(samples, cdf);
  res.ks_pvalue = kolmogorov_survival(std::sqrt(static_cast<double>(samples.size())) * res.ks_stat);
  res.skewness = m.skewness;
  res.excess_kurtosis = m.excess_kurtosis;
  res.se_skewness = m.se_skewness;
  res.se_kurtosis = m.se_kurtosis;
  return res;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> samples, int points) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, double>> out;
  if (sorted.empty()) return out;
  const double r = static_cast<double>(sorted.size());
  for (int i = 1; i <= points; ++i) {
    const double p = (static_cast<double>(i) - 0.5) / points;
    // Linear interpolation between order statistics at position p (R - 1).
    const double pos = p * (r - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    out.emplace_back(normal_quantile(p), sorted[lo] + frac * (sorted[hi] - sorted[lo]));
  }
  return out;
}

}  // namespace wpsum
