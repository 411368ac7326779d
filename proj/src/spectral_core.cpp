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

#include "wpsum/spectral_core.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "wpsum/csv.hpp"
#include "wpsum/errors.hpp"
#include "wpsum/fft.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_length(std::size_t n) {
  if (n < 8) throw DomainError("series length must be >= 8, got " + std::to_string(n));
}

double frequency(std::size_t j, std::size_t n) {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(n);
}

// e^{i 2 pi r / n} with r reduced mod n first.
std::complex<double> root_of_unity(long long r, std::size_t n) {
  const long long nn = static_cast<long long>(n);
  r %= nn;
  if (r < 0) r += nn;
  const double angle = kTwoPi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

FourierGrid fourier_grid(std::size_t n) {
  check_length(n);
  FourierGrid grid;
  grid.n = n;
  grid.nu = n / 2 - 1;
  grid.frequencies.resize(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) grid.frequencies[j] = frequency(j, n);
  return grid;
}

std::size_t summation_limit(std::size_t n, bool include_nyquist) {
  return include_nyquist ? n / 2 : n / 2 - 1;
}

DftVector dft(std::span<const double> series) {
  const std::size_t n = series.size();
  check_length(n);
  // sum_{k=1}^n e^{i u_j k} X_k = e^{i u_j} sum_{m=0}^{n-1} e^{+2 pi i j m / n} X_{m+1}
  std::vector<std::complex<double>> sums;
  if (fft::is_power_of_two(n)) {
    const auto spectrum = fft::real_plan(n)->forward(series);
    sums.resize(n / 2 + 1);
    for (std::size_t j = 0; j <= n / 2; ++j) sums[j] = std::conj(spectrum[j]);
  } else {
    std::vector<std::complex<double>> input(series.begin(), series.end());
    sums = fft::dft_any(input, +1);
    sums.resize(n / 2 + 1);
  }
  const double scale = 1.0 / std::sqrt(kTwoPi * static_cast<double>(n));
  DftVector out;
  out.source_n = n;
  out.coefficients.resize(n / 2 + 1);
  for (std::size_t j = 0; j <= n / 2; ++j) {
    out.coefficients[j] = root_of_unity(static_cast<long long>(j), n) * sums[j] * scale;
  }
  return out;
}

Periodogram periodogram(std::span<const double> series) {
  const DftVector w = dft(series);
  Periodogram p;
  p.n = w.source_n;
  p.ordinates.resize(w.coefficients.size());
  for (std::size_t j = 0; j < w.coefficients.size(); ++j) p.ordinates[j] = std::norm(w.coefficients[j]);
  return p;
}

std::vector<double> full_periodogram(std::span<const double> series) {
  const std::size_t n = series.size();
  check_length(n);
  std::vector<std::complex<double>> input(series.begin(), series.end());
  const auto sums = fft::dft_any(input, +1);
  std::vector<double> out(n);
  const double scale = 1.0 / (kTwoPi * static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) out[j] = std::norm(sums[j]) * scale;
  return out;
}

void write_periodogram_csv(const std::string& path, const Periodogram& pgram) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "j,u_j,I_j\n";
  for (std::size_t j = 0; j < pgram.ordinates.size(); ++j) {
    out << j << ',' << csv::format_double(frequency(j, pgram.n)) << ','
        << csv::format_double(pgram.ordinates[j]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<double> cross_covariances(std::span<const double> coeffs_x,
                                      std::span<const double> coeffs_y, std::size_t max_lag) {
  const std::size_t width = 2 * max_lag + 1;
  std::vector<double> gamma(width, 0.0);
  if (coeffs_x.empty() || coeffs_y.empty()) return gamma;
  const std::size_t lx = coeffs_x.size();
  const std::size_t ly = coeffs_y.size();
  if (width * std::min(lx, ly) <= (std::size_t{1} << 24)) {
    for (std::size_t idx = 0; idx < width; ++idx) {
      const long long m = static_cast<long long>(idx) - static_cast<long long>(max_lag);
      // sum over l with 0 <= l < ly and 0 <= l + m < lx
      const long long lo = std::max<long long>(0, -m);
      const long long hi = std::min<long long>(static_cast<long long>(ly), static_cast<long long>(lx) - m);
      CompensatedSum acc;
      for (long long l = lo; l < hi; ++l) acc += coeffs_x[static_cast<std::size_t>(l + m)] * coeffs_y[static_cast<std::size_t>(l)];
      gamma[idx] = acc.value();
    }
    return gamma;
  }
  // sum_l a_{l+m} b_l = (a * reversed b)[m + ly - 1]
  std::vector<double> reversed(coeffs_y.rbegin(), coeffs_y.rend());
  const auto corr = fft::convolve(coeffs_x, reversed);
  for (std::size_t idx = 0; idx < width; ++idx) {
    const long long pos = static_cast<long long>(idx) - static_cast<long long>(max_lag) +
                          static_cast<long long>(ly) - 1;
    if (pos >= 0 && pos < static_cast<long long>(corr.size())) gamma[idx] = corr[static_cast<std::size_t>(pos)];
  }
  return gamma;
}

namespace {

void check_indices(std::size_t n, std::size_t j, std::size_t k) {
  check_length(n);
  if (j > n / 2 || k > n / 2) {
    throw DomainError("frequency index out of range 0..floor(n/2)");
  }
}

}  // namespace

std::complex<double> exact_dft_cross_cov_double_sum(std::span<const double> coeffs_x,
                                                    std::span<const double> coeffs_y,
                                                    std::size_t n, std::size_t j, std::size_t k) {
  check_indices(n, j, k);
  const auto gamma = cross_covariances(coeffs_x, coeffs_y, n - 1);
  std::vector<std::complex<double>> ej(n + 1), ek(n + 1);
  for (std::size_t t = 1; t <= n; ++t) {
    ej[t] = root_of_unity(static_cast<long long>(j * t), n);
    ek[t] = std::conj(root_of_unity(static_cast<long long>(k * t), n));
  }
  CompensatedSum re, im;
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t s = 1; s <= n; ++s) {
      const double g = gamma[t - s + n - 1];
      if (g == 0.0) continue;
      const std::complex<double> term = ej[t] * ek[s] * g;
      re += term.real();
      im += term.imag();
    }
  }
  return std::complex<double>(re.value(), im.value()) / (kTwoPi * static_cast<double>(n));
}

std::complex<double> exact_dft_cross_cov_by_lag(std::span<const double> coeffs_x,
                                                std::span<const double> coeffs_y, std::size_t n,
                                                std::size_t j, std::size_t k) {
  check_indices(n, j, k);
  const auto gamma = cross_covariances(coeffs_x, coeffs_y, n - 1);
  const long long nn = static_cast<long long>(n);
  const long long jj = static_cast<long long>(j);
  const long long dk = jj - static_cast<long long>(k);
  CompensatedSum re, im;
  for (long long m = -(nn - 1); m <= nn - 1; ++m) {
    const double g = gamma[static_cast<std::size_t>(m + nn - 1)];
    if (g == 0.0) continue;
    // s runs over [max(1, 1-m), min(n, n-m)] with t = s + m.
    const long long s0 = std::max<long long>(1, 1 - m);
    const long long s1 = std::min<long long>(nn, nn - m);
    const long long count = s1 - s0 + 1;
    std::complex<double> inner;
    if (dk == 0) {
      inner = static_cast<double>(count);
    } else {
      // geometric sum of r^s, r = e^{i 2 pi dk / n}, s = s0..s1
      const std::complex<double> r = root_of_unity(dk, n);
      inner = root_of_unity(dk * s0, n) * (1.0 - root_of_unity(dk * count, n)) / (1.0 - r);
    }
    const std::complex<double> term = root_of_unity(jj * m, n) * inner * g;
    re += term.real();
    im += term.imag();
  }
  // Divide by n first so the white-noise diagonal lands exactly on 1/(2 pi).
  const double dn = static_cast<double>(n);
  return {re.value() / dn / kTwoPi, im.value() / dn / kTwoPi};
}

std::complex<double> exact_dft_cross_cov(std::span<const double> coeffs_x,
                                         std::span<const double> coeffs_y, std::size_t n,
                                         std::size_t j, std::size_t k) {
  return exact_dft_cross_cov_by_lag(coeffs_x, coeffs_y, n, j, k);
}

}  // namespace wpsum
