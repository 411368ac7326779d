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

#ifndef WPSUM_FFT_HPP_
#define WPSUM_FFT_HPP_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wpsum::fft {

using Complex = std::complex<double>;

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// In-place iterative radix-2 transform of a fixed power-of-two length.
// Plans are immutable after construction and may be shared between threads.
class Plan {
 public:
  explicit Plan(std::size_t n);

  std::size_t size() const { return n_; }
  // X_k = sum_m x_m exp(-2 pi i k m / n), unnormalized.
  void forward(std::span<Complex> data) const;
  // x_m = sum_k X_k exp(+2 pi i k m / n), unnormalized.
  void backward(std::span<Complex> data) const;

 private:
  void transform(std::span<Complex> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  // Stage with half-length h stores exp(-i pi j / h), j < h, at offset h.
  std::vector<Complex> twiddles_;
};

// Real-input transform of power-of-two length n via a half-length complex
// transform.
class RealPlan {
 public:
  explicit RealPlan(std::size_t n);

  std::size_t size() const { return n_; }
  // Returns X_0..X_{n/2} of the unnormalized forward transform.
  std::vector<Complex> forward(std::span<const double> x) const;
  // Inverse of forward(): recovers x (normalized by 1/n).
  std::vector<double> backward(std::span<const Complex> spectrum) const;

 private:
  std::size_t n_;
  std::shared_ptr<const Plan> half_;
  std::vector<Complex> rotation_;  // exp(-2 pi i k / n), k <= n/2
};

// Cached plans, keyed by length. Thread-safe.
std::shared_ptr<const Plan> plan(std::size_t n);
std::shared_ptr<const RealPlan> real_plan(std::size_t n);

// Discrete Fourier transform of any length (Bluestein for non powers of two).
// sign = -1 gives the forward kernel exp(-2 pi i k m / n), +1 the backward one.
std::vector<Complex> dft_any(std::span<const Complex> input, int sign);

// Full linear convolution of two real sequences.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

}  // namespace wpsum::fft

#endif  // WPSUM_FFT_HPP_
