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

#include "wpsum/quad_forms.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wpsum/csv.hpp"
#include "wpsum/errors.hpp"
#include "wpsum/rng.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kDirectToeplitzLimit = 512;

double fourier_frequency(std::size_t j, std::size_t n) {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(n);
}

// cos(2 pi r / n) with r reduced mod n.
double cos_grid(unsigned long long r, std::size_t n) {
  return std::cos(kTwoPi * static_cast<double>(r % n) / static_cast<double>(n));
}

void require_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": length mismatch");
}

}  // namespace

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::kUniform:
      return "uniform";
    case WeightKind::kIndicator:
      return "indicator";
    case WeightKind::kCosine:
      return "cosine";
    case WeightKind::kKernelAt:
      return "kernel";
    case WeightKind::kLocalWhittle:
      return "local_whittle";
    case WeightKind::kCounterexample:
      return "counterexample";
    case WeightKind::kCustom:
      return "custom";
  }
  return "unknown";
}

WeightKind parse_weight_kind(const std::string& name) {
  for (auto k : {WeightKind::kUniform, WeightKind::kIndicator, WeightKind::kCosine,
                 WeightKind::kKernelAt, WeightKind::kLocalWhittle, WeightKind::kCounterexample,
                 WeightKind::kCustom}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown weight scheme '" + name + "'");
}

WeightScheme WeightScheme::indicator(double y) {
  WeightScheme s;
  s.kind = WeightKind::kIndicator;
  s.threshold = y;
  return s;
}

WeightScheme WeightScheme::cosine(long lag) {
  WeightScheme s;
  s.kind = WeightKind::kCosine;
  s.lag = lag;
  return s;
}

WeightScheme WeightScheme::kernel_at(double u0, double bandwidth) {
  WeightScheme s;
  s.kind = WeightKind::kKernelAt;
  s.center = u0;
  s.bandwidth = bandwidth;
  return s;
}

WeightScheme WeightScheme::local_whittle(std::size_t m) {
  WeightScheme s;
  s.kind = WeightKind::kLocalWhittle;
  s.m = m;
  return s;
}

WeightScheme WeightScheme::counterexample(double d) {
  WeightScheme s;
  s.kind = WeightKind::kCounterexample;
  s.d = d;
  return s;
}

WeightScheme WeightScheme::from_values(std::vector<double> values) {
  WeightScheme s;
  s.kind = WeightKind::kCustom;
  s.custom = std::move(values);
  return s;
}

WeightScheme WeightScheme::from_csv(const std::string& path) {
  return from_values(csv::read_column(path));
}

std::string WeightScheme::description() const {
  switch (kind) {
    case WeightKind::kUniform:
      return "uniform";
    case WeightKind::kIndicator:
      return "indicator(y=" + csv::format_double(threshold) + ")";
    case WeightKind::kCosine:
      return "cosine(k=" + std::to_string(lag) + ")";
    case WeightKind::kKernelAt:
      return "kernel(u0=" + csv::format_double(center) +
             ",h=" + (bandwidth > 0 ? csv::format_double(bandwidth) : std::string("n^-0.2")) + ")";
    case WeightKind::kLocalWhittle:
      return "local_whittle(m=" + std::to_string(m) + ")";
    case WeightKind::kCounterexample:
      return "counterexample(d=" + csv::format_double(d) + ")";
    case WeightKind::kCustom:
      return "custom(" + std::to_string(custom.size()) + " values)";
  }
  return "unknown";
}

std::vector<double> generate_weights(const WeightScheme& scheme, std::size_t n,
                                     bool include_nyquist) {
  if (n < 8) throw DomainError("weights need n >= 8");
  const std::size_t limit = summation_limit(n, include_nyquist);
  const std::size_t nu = summation_limit(n, false);
  std::vector<double> b(limit, 0.0);
  switch (scheme.kind) {
    case WeightKind::kUniform:
      std::fill(b.begin(), b.end(), 1.0);
      break;
    case WeightKind::kIndicator:
      if (!(scheme.threshold > 0.0 && scheme.threshold <= kPi)) {
        throw DomainError("indicator threshold must lie in (0, pi]");
      }
      for (std::size_t j = 1; j <= limit; ++j) b[j - 1] = fourier_frequency(j, n) <= scheme.threshold ? 1.0 : 0.0;
      break;
    case WeightKind::kCosine:
      for (std::size_t j = 1; j <= limit; ++j) {
        const long long lag = scheme.lag < 0 ? -scheme.lag : scheme.lag;
        b[j - 1] = cos_grid(static_cast<unsigned long long>(lag) * j, n);
      }
      break;
    case WeightKind::kKernelAt: {
      if (!(scheme.center >= 0.0 && scheme.center <= kPi)) {
        throw DomainError("kernel centre must lie in [0, pi]");
      }
      if (scheme.bandwidth < 0.0) throw DomainError("kernel bandwidth must be positive");
      const double nn = static_cast<double>(n);
      const double h = scheme.bandwidth > 0.0 ? scheme.bandwidth : std::pow(nn, -0.2);
      for (std::size_t j = 1; j <= limit; ++j) {
        const double x = (fourier_frequency(j, n) - scheme.center) / h;
        b[j - 1] = std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) / (nn * h) : 0.0;
      }
      break;
    }
    case WeightKind::kLocalWhittle: {
      if (scheme.m < 1 || scheme.m > nu) {
        throw DomainError("local Whittle bandwidth must satisfy 1 <= m <= nu = " + std::to_string(nu));
      }
      const double mm = static_cast<double>(scheme.m);
      CompensatedSum mean_log;
      for (std::size_t k = 1; k <= scheme.m; ++k) mean_log += std::log(static_cast<double>(k) / mm);
      const double centre = mean_log.value() / mm;
      for (std::size_t j = 1; j <= scheme.m; ++j) b[j - 1] = std::log(static_cast<double>(j) / mm) - centre;
      break;
    }
    case WeightKind::kCounterexample:
      if (!(std::abs(scheme.d) < 0.5)) throw DomainError("counterexample needs |d| < 1/2");
      for (std::size_t j = 1; j <= limit; ++j) {
        b[j - 1] = 4.0 * kPi * std::pow(kTwoPi * static_cast<double>(j), -2.0 * scheme.d);
      }
      break;
    case WeightKind::kCustom:
      if (scheme.custom.size() != limit) {
        throw DomainError("custom weights have " + std::to_string(scheme.custom.size()) +
                          " values, expected " + std::to_string(limit));
      }
      b = scheme.custom;
      break;
  }
  return b;
}

void apply_band_limit(std::vector<double>& weights, std::size_t n, double theta) {
  if (!(theta > 0.0)) throw DomainError("band fraction must be positive");
  const auto cutoff = static_cast<std::size_t>(std::floor(theta * static_cast<double>(n)));
  for (std::size_t j = cutoff + 1; j <= weights.size(); ++j) weights[j - 1] = 0.0;
}

std::vector<double> spectral_values(const LinearProcessModel& model, std::size_t n,
                                    std::size_t limit) {
  std::vector<double> f(limit);
  for (std::size_t j = 1; j <= limit; ++j) f[j - 1] = spectral_density(model, fourier_frequency(j, n));
  return f;
}

WeightConstants weight_constants(std::span<const double> weights, std::span<const double> f_vals,
                                 const InnovationSpec& innovation, std::size_t n) {
  require_lengths(weights.size(), f_vals.size(), "weight_constants");
  WeightConstants c;
  CompensatedSum sum_b, sum_b2, sum_bf, sum_bf2;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double b = weights[j];
    const double bf = b * f_vals[j];
    c.b_n = std::max(c.b_n, std::abs(b));
    c.b_fn = std::max(c.b_fn, std::abs(bf));
    sum_b += b;
    sum_b2 += b * b;
    sum_bf += bf;
    sum_bf2 += bf * bf;
  }
  const double nn = static_cast<double>(n);
  c.sum_b = sum_b.value();
  c.B_n = std::sqrt(sum_b2.value());
  c.q_n_sq = sum_b2.value() + innovation.fourth_cumulant * c.sum_b * c.sum_b / nn;
  c.sum_bf = sum_bf.value();
  c.B_fn = std::sqrt(sum_bf2.value());
  c.v_n_sq = sum_bf2.value() + innovation.fourth_cumulant * c.sum_bf * c.sum_bf / nn;
  return c;
}

LindebergRatios lindeberg_ratios(std::span<const double> weights, std::span<const double> f_vals) {
  require_lengths(weights.size(), f_vals.size(), "lindeberg_ratios");
  const WeightConstants c = weight_constants(weights, f_vals, InnovationSpec::gaussian(), 1);
  if (c.B_n == 0.0 || c.B_fn == 0.0) throw DegenerateWeights("all weights are zero");
  return {c.b_n / c.B_n, c.b_fn / c.B_fn};
}

namespace {

// f_z = 1 / (2 pi). Dividing by it (rather than multiplying by 2 pi) keeps
// S_{n,X} and S_{n,z} bit-identical for white noise, where f_X == f_z.
constexpr double kNoiseDensity = 1.0 / kTwoPi;

// sum_j b_j (I_j / f_j) over j = 1..weights.size().
double rescaled_sum(std::span<const double> ordinates, std::span<const double> f_vals,
                    std::span<const double> weights) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(f_vals[j] > 0.0)) throw DomainError("spectral density values must be positive");
    acc += weights[j] * (ordinates[j + 1] / f_vals[j]);
  }
  return acc.value();
}

double noise_rescaled_sum(std::span<const double> ordinates, std::span<const double> weights) {
  CompensatedSum acc;
  for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * (ordinates[j + 1] / kNoiseDensity);
  return acc.value();
}

void require_band(const Periodogram& pgram, std::size_t count, const char* what) {
  if (pgram.ordinates.size() < count + 1) throw DomainError(std::string(what) + ": periodogram too short");
}

}  // namespace

double s_n_x(const Periodogram& pgram, std::span<const double> f_vals,
             std::span<const double> weights) {
  require_lengths(weights.size(), f_vals.size(), "s_n_x");
  require_band(pgram, weights.size(), "s_n_x");
  return rescaled_sum(pgram.ordinates, f_vals, weights);
}

double q_n_x(const Periodogram& pgram, std::span<const double> weights) {
  require_band(pgram, weights.size(), "q_n_x");
  CompensatedSum acc;
  for (std::size_t j = 0; j < weights.size(); ++j) acc += weights[j] * pgram.ordinates[j + 1];
  return acc.value();
}

double s_n_zeta(std::span<const double> innovations, std::span<const double> weights) {
  const Periodogram pz = periodogram(innovations);
  require_band(pz, weights.size(), "s_n_zeta");
  return noise_rescaled_sum(pz.ordinates, weights);
}

double q_n_zeta(std::span<const double> innovations, std::span<const double> f_vals,
                std::span<const double> weights) {
  require_lengths(weights.size(), f_vals.size(), "q_n_zeta");
  std::vector<double> bf(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) bf[j] = weights[j] * f_vals[j];
  return s_n_zeta(innovations, bf);
}

double bartlett_residual(const SamplePath& path, std::span<const double> f_vals,
                         std::span<const double> weights) {
  const auto innovations = path.in_sample_innovations();
  return s_n_x(periodogram(path.values), f_vals, weights) - s_n_zeta(innovations, weights);
}

QuadFormReport quad_form_report(std::span<const double> series, std::span<const double> innovations,
                                std::span<const double> f_vals, std::span<const double> weights,
                                const InnovationSpec& innovation) {
  require_lengths(series.size(), innovations.size(), "quad_form_report");
  require_lengths(weights.size(), f_vals.size(), "quad_form_report");
  const std::size_t n = series.size();
  const Periodogram px = periodogram(series);
  const Periodogram pz = periodogram(innovations);
  require_band(px, weights.size(), "quad_form_report");
  QuadFormReport r;
  r.S_nX = rescaled_sum(px.ordinates, f_vals, weights);
  r.S_nZeta = noise_rescaled_sum(pz.ordinates, weights);
  r.R_n = r.S_nX - r.S_nZeta;
  r.Q_nX = q_n_x(px, weights);
  std::vector<double> bf(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) bf[j] = weights[j] * f_vals[j];
  r.Q_nZeta = noise_rescaled_sum(pz.ordinates, bf);
  r.constants = weight_constants(weights, f_vals, innovation, n);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.standardized_S = r.constants.q_n_sq > 0.0
                         ? (r.S_nX - r.constants.sum_b) / std::sqrt(r.constants.q_n_sq)
                         : nan;
  r.standardized_Q = r.constants.v_n_sq > 0.0
                         ? (r.Q_nX - r.constants.sum_bf) / std::sqrt(r.constants.v_n_sq)
                         : nan;
  return r;
}

nlohmann::json to_json(const WeightConstants& c) {
  return {{"b_n", c.b_n},   {"B_n", c.B_n},   {"sum_b", c.sum_b},   {"q_n_sq", c.q_n_sq},
          {"b_fn", c.b_fn}, {"B_fn", c.B_fn}, {"sum_bf", c.sum_bf}, {"v_n_sq", c.v_n_sq}};
}

nlohmann::json to_json(const QuadFormReport& r) {
  return {{"S_nX", r.S_nX},
          {"S_nZeta", r.S_nZeta},
          {"R_n", r.R_n},
          {"Q_nX", r.Q_nX},
          {"Q_nZeta", r.Q_nZeta},
          {"constants", to_json(r.constants)},
          {"standardized_S", r.standardized_S},
          {"standardized_Q", r.standardized_Q}};
}

ToeplitzForm toeplitz_form(std::span<const double> weights, std::size_t n) {
  if (weights.size() > n / 2) throw DomainError("toeplitz_form: more weights than floor(n/2)");
  ToeplitzForm form;
  form.n = n;
  form.c.assign(n, 0.0);
  const double nn = static_cast<double>(n);
  if (n <= kDirectToeplitzLimit) {
    for (std::size_t t = 0; t < n; ++t) {
      CompensatedSum acc;
      for (std::size_t j = 1; j <= weights.size(); ++j) acc += weights[j - 1] * cos_grid(static_cast<unsigned long long>(t) * j, n);
      form.c[t] = acc.value() / nn;
    }
    return form;
  }
  std::vector<fft::Complex> spectrum(n);
  for (std::size_t j = 1; j <= weights.size(); ++j) spectrum[j] = weights[j - 1];
  const auto sums = fft::dft_any(spectrum, +1);
  for (std::size_t t = 0; t < n; ++t) form.c[t] = sums[t].real() / nn;
  return form;
}

double frobenius_norm_sq(const ToeplitzForm& form) {
  if (form.n == 0) return 0.0;
  CompensatedSum acc;
  acc += static_cast<double>(form.n) * form.c[0] * form.c[0];
  for (std::size_t t = 1; t < form.n; ++t) acc += 2.0 * static_cast<double>(form.n - t) * form.c[t] * form.c[t];
  return acc.value();
}

ToeplitzOperator::ToeplitzOperator(const ToeplitzForm& form) : n_(form.n) {
  if (n_ == 0) throw DomainError("empty Toeplitz form");
  const std::size_t size = fft::next_power_of_two(std::max<std::size_t>(2 * n_, 2));
  plan_ = fft::real_plan(size);
  std::vector<double> column(size, 0.0);
  column[0] = form.c[0];
  for (std::size_t t = 1; t < n_; ++t) {
    column[t] = form.c[t];
    column[size - t] = form.c[t];
  }
  eigenvalues_ = plan_->forward(column);
}

std::vector<double> ToeplitzOperator::apply(std::span<const double> x) const {
  if (x.size() != n_) throw DomainError("ToeplitzOperator: size mismatch");
  std::vector<double> padded(plan_->size(), 0.0);
  std::copy(x.begin(), x.end(), padded.begin());
  auto spectrum = plan_->forward(padded);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const fft::Complex a = spectrum[k];
    const fft::Complex b = eigenvalues_[k];
    spectrum[k] = {a.real() * b.real() - a.imag() * b.imag(),
                   a.real() * b.imag() + a.imag() * b.real()};
  }
  auto full = plan_->backward(spectrum);
  full.resize(n_);
  return full;
}

double toeplitz_quadratic_form(const ToeplitzForm& form, std::span<const double> x) {
  if (x.size() != form.n) throw DomainError("toeplitz_quadratic_form: size mismatch");
  CompensatedSum acc;
  for (std::size_t t = 0; t < form.n; ++t) {
    for (std::size_t s = 0; s < form.n; ++s) {
      acc += form.c[t > s ? t - s : s - t] * x[t] * x[s];
    }
  }
  return acc.value();
}

double spectral_norm(const ToeplitzForm& form, double tol, int max_iterations) {
  if (!(tol > 0.0)) throw DomainError("spectral_norm: tolerance must be positive");
  const std::size_t n = form.n;
  const ToeplitzOperator op(form);
  CounterRng rng(StreamKey{0x70e91172ULL, n, StreamRole::kPowerIteration});
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = rng.normal();
  q.normalize();

  const double scale = std::sqrt(frobenius_norm_sq(form));
  if (scale == 0.0) return 0.0;
  // Lanczos with full reorthogonalization; exact once the basis spans R^n.
  const std::size_t steps = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(max_iterations, 1)));
  Eigen::MatrixXd basis(n, steps);
  std::vector<double> alpha, beta;
  for (std::size_t k = 0; k < steps; ++k) {
    basis.col(k) = q;
    const auto y = op.apply(std::span<const double>(q.data(), n));
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    alpha.push_back(q.dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
    }
    const double b = w.norm();
    const bool last = k + 1 == n || b <= 1e-13 * scale;
    if (!last && k % 8 != 7 && k + 1 != steps) {
      beta.push_back(b);
      q = w / b;
      continue;
    }

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), k + 1);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const auto& theta = es.eigenvalues();
    const Eigen::Index top = std::abs(theta[0]) > std::abs(theta[k]) ? 0 : static_cast<Eigen::Index>(k);
    const double value = std::abs(theta[top]);
    const double residual = b * std::abs(es.eigenvectors()(static_cast<Eigen::Index>(k), top));
    if (last || residual <= tol * value) return value;
    beta.push_back(b);
    q = w / b;
  }
  throw NoConvergence("Lanczos iteration did not converge in " + std::to_string(steps) + " steps");
}

}  // namespace wpsum
