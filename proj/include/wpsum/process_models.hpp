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

#ifndef WPSUM_PROCESS_MODELS_HPP_
#define WPSUM_PROCESS_MODELS_HPP_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wpsum/fft.hpp"
#include "wpsum/rng.hpp"

namespace wpsum {

enum class InnovationFamily { kGaussian, kCenteredExponential, kUniform, kRademacher };

// A standardized i.i.d. innovation law (mean 0, variance 1) together with
// the two higher-moment constants the variance formulas need.
struct InnovationSpec {
  InnovationFamily family = InnovationFamily::kGaussian;
  double fourth_cumulant = 0.0;  // E z^4 - 3
  double var_zeta_sq = 2.0;      // Var(z^2) = fourth_cumulant + 2

  static InnovationSpec of(InnovationFamily family);
  static InnovationSpec gaussian() { return of(InnovationFamily::kGaussian); }
};

std::string to_string(InnovationFamily family);
InnovationFamily parse_innovation_family(const std::string& name);

std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t count,
                                       std::uint64_t seed);
std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t count,
                                       const StreamKey& key);
// Fills `out` from an already positioned generator.
void sample_innovations(const InnovationSpec& spec, CounterRng& rng, std::span<double> out);

enum class ModelKind { kWhiteNoise, kMovingAverage, kArfima, kFractionalOfShortMemory };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// MA(inf) truncation used when none is requested: max(100 n, 2^17).
std::size_t default_truncation(std::size_t n);

/// Coefficients a_0..a_K of (1-B)^{-d} theta(B) / phi(B) with
/// phi(B) = 1 - ar_1 B - ... and theta(B) = 1 + ma_1 B + ....
/// Throws DomainError when |d| >= 1/2 and NonCausalAR when phi has a root in
/// the closed unit disk.
std::vector<double> arfima_ma_coeffs(double d, std::span<const double> ar,
                                     std::span<const double> ma, std::size_t truncation);

// Fractional-integration weights psi_k = psi_{k-1} (k - 1 + d) / k, psi_0 = 1.
std::vector<double> fractional_weights(double d, std::size_t truncation);

// Throws NonCausalAR unless every root of 1 - ar_1 z - ... - ar_p z^p lies
// strictly outside the unit circle.
void check_causal(std::span<const double> ar);

// A realized linear process X_t = sum_k a_k z_{t-k} with a finite coefficient
// record. Immutable and cheap to copy; safe to share between threads.
class LinearProcessModel {
 public:
  static LinearProcessModel white_noise();
  // coeffs = (a_0, ..., a_q).
  static LinearProcessModel moving_average(std::vector<double> coeffs);
  static LinearProcessModel arfima(double d, std::vector<double> ar, std::vector<double> ma,
                                   std::size_t truncation);
  // X = (1-B)^{-d} Y with Y_t = sum_k b_k z_{t-k}, b finite.
  static LinearProcessModel fractional_of_short_memory(double d, std::vector<double> short_coeffs,
                                                       std::size_t truncation);

  ModelKind kind() const { return kind_; }
  double d() const { return d_; }
  std::span<const double> ar() const { return ar_; }
  std::span<const double> ma() const { return ma_; }
  std::span<const double> short_coeffs() const { return short_; }
  std::span<const double> coeffs() const { return *coeffs_; }
  std::size_t truncation() const { return coeffs_->size() - 1; }
  bool fractional() const {
    return kind_ == ModelKind::kArfima || kind_ == ModelKind::kFractionalOfShortMemory;
  }
  std::string id() const;

 private:
  LinearProcessModel() = default;

  ModelKind kind_ = ModelKind::kWhiteNoise;
  double d_ = 0.0;
  std::vector<double> ar_;
  std::vector<double> ma_;
  std::vector<double> short_;
  std::shared_ptr<const std::vector<double>> coeffs_;
};

// Unrealized model description; the truncation may be left to depend on n.
struct ModelSpec {
  ModelKind kind = ModelKind::kWhiteNoise;
  double d = 0.0;
  std::vector<double> ar;
  std::vector<double> ma;            // theta_1..theta_q, or a_0..a_q for kMovingAverage
  std::vector<double> short_coeffs;  // b_0..b_L for kFractionalOfShortMemory
  std::size_t truncation = 0;        // 0: default_truncation(n)

  LinearProcessModel build(std::size_t n) const;
  void validate() const;
};

/// Transfer function A_X(u). Closed form for the fractional kinds (principal
/// branch of (1 - e^{-iu})^{-d}), the finite coefficient sum otherwise.
/// Throws DomainError unless 0 < u <= pi.
std::complex<double> transfer_function(const LinearProcessModel& model, double u);
// sum_{k} a_k e^{-iku} over the truncated record.
std::complex<double> truncated_transfer(std::span<const double> coeffs, double u);
// f_X(u) = |A_X(u)|^2 / (2 pi), unit innovation variance.
double spectral_density(const LinearProcessModel& model, double u);
// g(u) = u^{2d} f_X(u).
double short_memory_g(const LinearProcessModel& model, double u);

struct SamplePath {
  std::vector<double> values;       // X_1..X_n
  std::vector<double> innovations;  // z_{1-K}..z_n, K the last nonzero lag; empty when not retained
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string model_id;

  // z_1..z_n.
  std::span<const double> in_sample_innovations() const;
};

// Computes X_t = sum_{k=0}^K a_k z_{t-k}, t = 1..n, from z_{1-K}..z_n.
std::vector<double> apply_linear_filter(std::span<const double> coeffs,
                                        std::span<const double> innovations, std::size_t n);

// Reusable simulator for one (model, innovation law, n): the coefficient
// spectrum is computed once and shared by every replication. Trailing zero
// coefficients are dropped, so the pre-sample record has length equal to the
// last nonzero lag.
class Simulator {
 public:
  Simulator(LinearProcessModel model, InnovationSpec innovation, std::size_t n);

  const LinearProcessModel& model() const { return model_; }
  std::size_t n() const { return n_; }

  SamplePath run(const StreamKey& key) const;
  // Writes X_1..X_n and z_1..z_n without keeping the pre-sample record.
  void run(const StreamKey& key, std::vector<double>& values,
           std::vector<double>& in_sample) const;

 private:
  std::vector<double> filter(std::span<const double> innovations) const;

  LinearProcessModel model_;
  InnovationSpec innovation_;
  std::size_t n_;
  std::size_t order_ = 0;
  bool direct_;
  std::shared_ptr<const fft::RealPlan> plan_;
  std::vector<fft::Complex> coeff_spectrum_;
};

SamplePath simulate(const LinearProcessModel& model, const InnovationSpec& innovation,
                    std::size_t n, std::uint64_t seed);

}  // namespace wpsum

#endif  // WPSUM_PROCESS_MODELS_HPP_
