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

#ifndef WPSUM_WHITTLE_HPP_
#define WPSUM_WHITTLE_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wpsum/spectral_core.hpp"

namespace wpsum {

struct WhittleResult {
  double d_hat = 0.0;
  std::size_t m = 0;
  std::vector<std::pair<double, double>> objective_curve;  // (d, R(d)) on the search grid
  double std_error = 0.0;                                  // 1 / (2 sqrt m)
};

// nu_{n,j} = log(j/m) - m^{-1} sum_k log(k/m), j = 1..m. Throws DomainError
// unless 1 <= m <= floor(n/2) - 1.
std::vector<double> lw_weights(std::size_t n, std::size_t m);

/// Concentrated local Whittle objective
///   R(d) = log(m^{-1} sum_{j<=m} u_j^{2d} I_j) - 2d m^{-1} sum_{j<=m} log u_j.
/// Throws DegeneratePeriodogram if some I_j, j <= m, is zero.
double lw_objective(double d, const Periodogram& pgram, std::size_t m);

// Default bandwidth floor(n^0.65).
std::size_t default_whittle_bandwidth(std::size_t n);

/// Minimizes R(d) over [-0.49, 0.49]: a 981-point grid checks unimodality,
/// then golden-section search to 1e-6 runs on the whole interval (unimodal)
/// or on the grid cell pair around the grid minimum. Requires 8 <= m <= nu.
WhittleResult estimate_d(std::span<const double> series, std::size_t m);

}  // namespace wpsum

#endif  // WPSUM_WHITTLE_HPP_
