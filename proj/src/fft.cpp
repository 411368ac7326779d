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

#include "wpsum/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wpsum::fft {

namespace {

// Plain complex multiply; std::complex operator* carries NaN/inf recovery
// code that is measurably slower in the butterfly loop.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

inline Complex unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Plan::Plan(std::size_t n) : n_(n), bitrev_(n), twiddles_(n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("fft::Plan: length must be a power of two");
  int bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    }
    bitrev_[i] = r;
  }
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t j = 0; j < h; ++j) {
      twiddles_[h + j] = unit(-std::numbers::pi * static_cast<double>(j) / static_cast<double>(h));
    }
  }
}

void Plan::forward(std::span<Complex> data) const { transform(data, false); }
void Plan::backward(std::span<Complex> data) const { transform(data, true); }

void Plan::transform(std::span<Complex> data, bool inverse) const {
  if (data.size() != n_) throw std::invalid_argument("fft::Plan: size mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (i < r) std::swap(data[i], data[r]);
  }
  Complex* d = data.data();
  for (std::size_t h = 1; h < n_; h <<= 1) {
    const Complex* tw = twiddles_.data() + h;
    for (std::size_t i = 0; i < n_; i += 2 * h) {
      for (std::size_t j = 0; j < h; ++j) {
        const Complex w = inverse ? std::conj(tw[j]) : tw[j];
        const Complex u = d[i + j];
        const Complex v = mul(d[i + j + h], w);
        d[i + j] = {u.real() + v.real(), u.imag() + v.imag()};
        d[i + j + h] = {u.real() - v.real(), u.imag() - v.imag()};
      }
    }
  }
}

RealPlan::RealPlan(std::size_t n) : n_(n), rotation_(n / 2 + 1) {
  if (!is_power_of_two(n) || n < 2) throw std::invalid_argument("fft::RealPlan: length must be a power of two >= 2");
  half_ = plan(n / 2);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    rotation_[k] = unit(-2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  }
}

std::vector<Complex> RealPlan::forward(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("fft::RealPlan: size mismatch");
  const std::size_t m = n_ / 2;
  std::vector<Complex> z(m);
  for (std::size_t k = 0; k < m; ++k) z[k] = {x[2 * k], x[2 * k + 1]};
  half_->forward(z);
  std::vector<Complex> out(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const Complex zk = z[k % m];
    const Complex zc = std::conj(z[(m - k) % m]);
    const Complex even = {0.5 * (zk.real() + zc.real()), 0.5 * (zk.imag() + zc.imag())};
    // (zk - zc) / (2i)
    const Complex odd = {0.5 * (zk.imag() - zc.imag()), -0.5 * (zk.real() - zc.real())};
    const Complex rot = mul(rotation_[k], odd);
    out[k] = {even.real() + rot.real(), even.imag() + rot.imag()};
  }
  return out;
}

std::vector<double> RealPlan::backward(std::span<const Complex> spectrum) const {
  const std::size_t m = n_ / 2;
  if (spectrum.size() != m + 1) throw std::invalid_argument("fft::RealPlan: spectrum size mismatch");
  std::vector<Complex> z(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Complex xk = spectrum[k];
    const Complex xc = std::conj(spectrum[m - k]);
    const Complex even = {0.5 * (xk.real() + xc.real()), 0.5 * (xk.imag() + xc.imag())};
    const Complex diff = {0.5 * (xk.real() - xc.real()), 0.5 * (xk.imag() - xc.imag())};
    const Complex odd = mul(diff, std::conj(rotation_[k]));
    // even + i * odd
    z[k] = {even.real() - odd.imag(), even.imag() + odd.real()};
  }
  half_->backward(z);
  std::vector<double> x(n_);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[2 * k] = z[k].real() * scale;
    x[2 * k + 1] = z[k].imag() * scale;
  }
  return x;
}

namespace {

template <typename T>
std::shared_ptr<const T> cached(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const T>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const T>(n);
  return slot;
}

}  // namespace

std::shared_ptr<const Plan> plan(std::size_t n) { return cached<Plan>(n); }
std::shared_ptr<const RealPlan> real_plan(std::size_t n) { return cached<RealPlan>(n); }

std::vector<Complex> dft_any(std::span<const Complex> input, int sign) {
  const std::size_t n = input.size();
  std::vector<Complex> out(input.begin(), input.end());
  if (n <= 1) return out;
  if (is_power_of_two(n)) {
    const auto p = plan(n);
    if (sign < 0) {
      p->forward(out);
    } else {
      p->backward(out);
    }
    return out;
  }
  // Bluestein: km = (k^2 + m^2 - (k-m)^2) / 2. Chirp phases use m^2 mod 2n
  // so the argument of cos/sin stays below 2 pi.
  const double s = sign < 0 ? -1.0 : 1.0;
  std::vector<Complex> chirp(n);
  const std::size_t two_n = 2 * n;
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t sq = static_cast<std::size_t>((static_cast<unsigned __int128>(m) * m) % two_n);
    chirp[m] = unit(s * std::numbers::pi * static_cast<double>(sq) / static_cast<double>(n));
  }
  const std::size_t big = next_power_of_two(2 * n - 1);
  const auto p = plan(big);
  std::vector<Complex> a(big), b(big);
  for (std::size_t m = 0; m < n; ++m) a[m] = mul(input[m], chirp[m]);
  b[0] = std::conj(chirp[0]);
  for (std::size_t m = 1; m < n; ++m) {
    b[m] = std::conj(chirp[m]);
    b[big - m] = std::conj(chirp[m]);
  }
  p->forward(a);
  p->forward(b);
  for (std::size_t k = 0; k < big; ++k) a[k] = mul(a[k], b[k]);
  p->backward(a);
  const double scale = 1.0 / static_cast<double>(big);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex v = {a[k].real() * scale, a[k].imag() * scale};
    out[k] = mul(v, chirp[k]);
  }
  return out;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  std::vector<double> out(len, 0.0);
  if (a.size() * b.size() <= 8192 || std::min(a.size(), b.size()) <= 16) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  const std::size_t big = std::max<std::size_t>(2, next_power_of_two(len));
  const auto p = real_plan(big);
  std::vector<double> pa(big, 0.0), pb(big, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  auto fa = p->forward(pa);
  const auto fb = p->forward(pb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] = mul(fa[k], fb[k]);
  auto full = p->backward(fa);
  std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(len), out.begin());
  return out;
}

}  // namespace wpsum::fft
