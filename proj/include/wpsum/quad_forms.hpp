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

#ifndef WPSUM_QUAD_FORMS_HPP_
#define WPSUM_QUAD_FORMS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "wpsum/fft.hpp"
#include "wpsum/process_models.hpp"
#include "wpsum/spectral_core.hpp"

namespace wpsum {

enum class WeightKind {
  kUniform,
  kIndicator,       // 1{u_j <= y}
  kCosine,          // cos(lag * u_j)
  kKernelAt,        // Epanechnikov bump around u0
  kLocalWhittle,    // centered log(j/m) for j <= m
  kCounterexample,  // 4 pi (2 pi j)^{-2d}
  kCustom,
};

std::string to_string(WeightKind kind);
WeightKind parse_weight_kind(const std::string& name);

// Rule producing the triangular array b_{n,j}, j = 1..nu, for any n.
struct WeightScheme {
  WeightKind kind = WeightKind::kUniform;
  double threshold = 0.0;    // kIndicator
  long lag = 0;              // kCosine
  double center = 0.0;       // kKernelAt
  double bandwidth = 0.0;    // kKernelAt; 0 selects n^{-1/5}
  std::size_t m = 0;         // kLocalWhittle
  double d = 0.0;            // kCounterexample
  std::vector<double> custom;

  static WeightScheme uniform() { return {}; }
  static WeightScheme indicator(double y);
  static WeightScheme cosine(long lag);
  static WeightScheme kernel_at(double u0, double bandwidth = 0.0);
  static WeightScheme local_whittle(std::size_t m);
  static WeightScheme counterexample(double d);
  static WeightScheme from_values(std::vector<double> values);
  static WeightScheme from_csv(const std::string& path);

  std::string description() const;
};

/// b_{n,1..limit} with limit = nu, or floor(n/2) with include_nyquist.
/// Throws DomainError for invalid parameters (m > nu, y outside (0, pi], ...).
std::vector<double> generate_weights(const WeightScheme& scheme, std::size_t n,
                                     bool include_nyquist = false);

// Zeroes b_{n,j} for j > floor(theta n).
void apply_band_limit(std::vector<double>& weights, std::size_t n, double theta);

// f_X(u_j) for j = 1..limit.
std::vector<double> spectral_values(const LinearProcessModel& model, std::size_t n,
                                    std::size_t limit);

struct WeightConstants {
  double b_n = 0.0;     // max_j |b_j|
  double B_n = 0.0;     // (sum b_j^2)^{1/2}
  double sum_b = 0.0;   // sum b_j
  double q_n_sq = 0.0;  // B_n^2 + Cum4 sum_b^2 / n
  double b_fn = 0.0;    // max_j |b_j f_j|
  double B_fn = 0.0;    // (sum (b_j f_j)^2)^{1/2}
  double sum_bf = 0.0;  // sum b_j f_j
  double v_n_sq = 0.0;  // B_fn^2 + Cum4 sum_bf^2 / n
};

WeightConstants weight_constants(std::span<const double> weights, std::span<const double> f_vals,
                                 const InnovationSpec& innovation, std::size_t n);

struct LindebergRatios {
  double plain = 0.0;  // b_n / B_n
  double f = 0.0;      // b_fn / B_fn
};

// Throws DegenerateWeights when every weight (or weight * f) is zero.
LindebergRatios lindeberg_ratios(std::span<const double> weights, std::span<const double> f_vals);

// S_{n,X} = sum b_j I_{X,j} / f_j. Throws DomainError if any f_j <= 0.
double s_n_x(const Periodogram& pgram, std::span<const double> f_vals,
             std::span<const double> weights);
// S_{n,z} = 2 pi sum b_j I_{z,j}.
double s_n_zeta(std::span<const double> innovations, std::span<const double> weights);
// Q_{n,X} = sum b_j I_{X,j}.
double q_n_x(const Periodogram& pgram, std::span<const double> weights);
// Q_{n,z} = 2 pi sum b_j f_j I_{z,j}.
double q_n_zeta(std::span<const double> innovations, std::span<const double> f_vals,
                std::span<const double> weights);
// R_n = S_{n,X} - S_{n,z}. Throws MissingInnovations without an innovation record.
double bartlett_residual(const SamplePath& path, std::span<const double> f_vals,
                         std::span<const double> weights);

struct QuadFormReport {
  double S_nX = 0.0;
  double S_nZeta = 0.0;
  double R_n = 0.0;
  double Q_nX = 0.0;
  double Q_nZeta = 0.0;
  WeightConstants constants;
  double standardized_S = 0.0;  // (S_nX - sum_b) / q_n
  double standardized_Q = 0.0;  // (Q_nX - sum_bf) / v_n
};

// Statistics from a series and its in-sample innovations z_1..z_n.
QuadFormReport quad_form_report(std::span<const double> series, std::span<const double> innovations,
                                std::span<const double> f_vals, std::span<const double> weights,
                                const InnovationSpec& innovation);

nlohmann::json to_json(const WeightConstants& c);
nlohmann::json to_json(const QuadFormReport& r);

// c_n(t) = n^{-1} sum_j b_j cos(t u_j), t = 0..n-1; C_n = (c_n(t - s)).
struct ToeplitzForm {
  std::vector<double> c;
  std::size_t n = 0;
};

ToeplitzForm toeplitz_form(std::span<const double> weights, std::size_t n);

// ||C_n||^2 = sum_{t,s} c_n(t - s)^2, summed over lags with multiplicities.
double frobenius_norm_sq(const ToeplitzForm& form);

// Matrix-vector products with C_n through a circulant embedding.
class ToeplitzOperator {
 public:
  explicit ToeplitzOperator(const ToeplitzForm& form);

  std::size_t size() const { return n_; }
  std::vector<double> apply(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::shared_ptr<const fft::RealPlan> plan_;
  std::vector<fft::Complex> eigenvalues_;
};

// sum_{t,s} c_n(t - s) x_t x_s by direct O(n^2) summation.
double toeplitz_quadratic_form(const ToeplitzForm& form, std::span<const double> x);

/// Largest singular value of C_n by Lanczos iteration with a random start.
/// Stops when the Ritz residual of the extreme value falls below tol times
/// that value; throws NoConvergence after max_iterations steps (never when
/// max_iterations >= n).
double spectral_norm(const ToeplitzForm& form, double tol, int max_iterations = 10000);

}  // namespace wpsum

#endif  // WPSUM_QUAD_FORMS_HPP_
