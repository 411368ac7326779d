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

#ifndef WPSUM_NORMALITY_HPP_
#define WPSUM_NORMALITY_HPP_

#include <functional>
#include <span>
#include <vector>

namespace wpsum {

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;  // g1
  double excess_kurtosis = 0.0;  // g2
  double se_mean = 0.0;
  double se_variance = 0.0;  // sqrt((m4 - m2^2) / R)
  double se_skewness = 0.0;  // sqrt(6 / R)
  double se_kurtosis = 0.0;  // sqrt(24 / R)
  std::size_t count = 0;
};

MomentSummary describe(std::span<const double> samples);

struct NormalityResult {
  double ks_stat = 0.0;
  double ks_pvalue = 1.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_skewness = 0.0;
  double se_kurtosis = 0.0;
};

double normal_cdf(double x);
double normal_quantile(double p);

// P(K > lambda) for the Kolmogorov distribution, series truncated at 100 terms.
double kolmogorov_survival(double lambda);

// sup_x |F_R(x) - cdf(x)| for the empirical CDF of the samples.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// One-sample Kolmogorov-Smirnov test against N(mean, variance) of the
/// samples themselves, with sample skewness and excess kurtosis.
/// Throws InsufficientSamples below 100 samples.
NormalityResult normality_tests(std::span<const double> samples);

// Empirical quantiles of the samples at `points` probabilities
// (i - 1/2) / points, paired with standard normal quantiles.
std::vector<std::pair<double, double>> qq_points(std::span<const double> samples, int points = 200);

}  // namespace wpsum

#endif  // WPSUM_NORMALITY_HPP_
