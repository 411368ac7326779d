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

#ifndef WPSUM_SPECTRAL_CORE_HPP_
#define WPSUM_SPECTRAL_CORE_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wpsum {

// Fourier frequencies u_j = 2 pi j / n for j = 0..floor(n/2). Weighted sums
// run over j = 1..nu with nu = floor(n/2) - 1.
struct FourierGrid {
  std::size_t n = 0;
  std::size_t nu = 0;
  std::vector<double> frequencies;

  double u(std::size_t j) const { return frequencies.at(j); }
};

FourierGrid fourier_grid(std::size_t n);

// Upper summation index: nu, or floor(n/2) when the Nyquist ordinate is kept.
std::size_t summation_limit(std::size_t n, bool include_nyquist = false);

struct DftVector {
  std::vector<std::complex<double>> coefficients;  // w_0..w_{floor(n/2)}
  std::size_t source_n = 0;
};

struct Periodogram {
  std::vector<double> ordinates;  // I_0..I_{floor(n/2)}
  std::size_t n = 0;

  // I_1..I_limit as a view.
  std::span<const double> band(std::size_t limit) const {
    return std::span<const double>(ordinates).subspan(1, limit);
  }
};

/// w_j = (2 pi n)^{-1/2} sum_{k=1}^n e^{i u_j k} X_k for j = 0..floor(n/2).
DftVector dft(std::span<const double> series);
Periodogram periodogram(std::span<const double> series);
// I_j for every j = 0..n-1 (the full grid, used by the total-power identity).
std::vector<double> full_periodogram(std::span<const double> series);

void write_periodogram_csv(const std::string& path, const Periodogram& pgram);

// gamma_XY(m) = sum_l a_{l+m} b_l for m = -max_lag..max_lag; entry m sits at
// index m + max_lag.
std::vector<double> cross_covariances(std::span<const double> coeffs_x,
                                      std::span<const double> coeffs_y, std::size_t max_lag);

/// E[w_{X,j} conj(w_{Y,k})] for X = sum a_l z_{t-l}, Y = sum b_l z_{t-l}
/// driven by the same unit-variance noise. Exact up to rounding: the sum over
/// (t, s) is regrouped by lag t - s and the inner sum over s is a closed-form
/// geometric series, so the cost is O(n) once the covariances are known.
/// The O(n^2) double sum is kept as a reference implementation.
/// Throws DomainError if j or k exceeds floor(n/2).
std::complex<double> exact_dft_cross_cov(std::span<const double> coeffs_x,
                                         std::span<const double> coeffs_y, std::size_t n,
                                         std::size_t j, std::size_t k);
std::complex<double> exact_dft_cross_cov_double_sum(std::span<const double> coeffs_x,
                                                    std::span<const double> coeffs_y,
                                                    std::size_t n, std::size_t j, std::size_t k);
std::complex<double> exact_dft_cross_cov_by_lag(std::span<const double> coeffs_x,
                                                std::span<const double> coeffs_y, std::size_t n,
                                                std::size_t j, std::size_t k);

}  // namespace wpsum

#endif  // WPSUM_SPECTRAL_CORE_HPP_
