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

#include "wpsum/process_models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wpsum/csv.hpp"
#include "wpsum/errors.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Products (K+1) * n up to this size are convolved directly.
constexpr std::size_t kDirectFilterWork = std::size_t{1} << 20;

void check_d(double d) {
  if (!(std::abs(d) < 0.5)) {
    throw DomainError("memory parameter must satisfy |d| < 1/2, got " + csv::format_double(d));
  }
}

void check_frequency(double u) {
  if (!(u > 0.0 && u <= std::numbers::pi)) {
    throw DomainError("frequency must lie in (0, pi], got " + csv::format_double(u));
  }
}

std::string list(std::span<const double> xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += csv::format_double(xs[i]);
  }
  return s + "]";
}

// 1 - e^{-iu} without cancellation near u = 0.
std::complex<double> one_minus_shift(double u) {
  const double s = std::sin(0.5 * u);
  return {2.0 * s * s, std::sin(u)};
}

// Evaluates 1 + sign * sum_i c_i z^i at z = e^{-iu}.
std::complex<double> lag_polynomial(std::span<const double> c, double sign, double u) {
  std::complex<double> acc{1.0, 0.0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double angle = -static_cast<double>(i + 1) * u;
    acc += sign * c[i] * std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return acc;
}

}  // namespace

InnovationSpec InnovationSpec::of(InnovationFamily family) {
  switch (family) {
    case InnovationFamily::kGaussian:
      return {family, 0.0, 2.0};
    case InnovationFamily::kCenteredExponential:
      return {family, 6.0, 8.0};
    case InnovationFamily::kUniform:
      // Uniform on [-sqrt 3, sqrt 3]: E z^4 = 9/5.
      return {family, -1.2, 0.8};
    case InnovationFamily::kRademacher:
      return {family, -2.0, 0.0};
  }
  throw DomainError("unknown innovation family");
}

std::string to_string(InnovationFamily family) {
  switch (family) {
    case InnovationFamily::kGaussian:
      return "gaussian";
    case InnovationFamily::kCenteredExponential:
      return "centered_exponential";
    case InnovationFamily::kUniform:
      return "uniform";
    case InnovationFamily::kRademacher:
      return "rademacher";
  }
  return "unknown";
}

InnovationFamily parse_innovation_family(const std::string& name) {
  for (auto f : {InnovationFamily::kGaussian, InnovationFamily::kCenteredExponential,
                 InnovationFamily::kUniform, InnovationFamily::kRademacher}) {
    if (to_string(f) == name) return f;
  }
  throw DomainError("unknown innovation family '" + name + "'");
}

void sample_innovations(const InnovationSpec& spec, CounterRng& rng, std::span<double> out) {
  switch (spec.family) {
    case InnovationFamily::kGaussian:
      for (double& x : out) x = rng.normal();
      break;
    case InnovationFamily::kCenteredExponential:
      for (double& x : out) x = -std::log(rng.uniform()) - 1.0;
      break;
    case InnovationFamily::kUniform: {
      const double half_width = std::sqrt(3.0);
      for (double& x : out) x = half_width * (2.0 * rng.uniform() - 1.0);
      break;
    }
    case InnovationFamily::kRademacher:
      for (double& x : out) x = (rng.next_u64() >> 63) ? 1.0 : -1.0;
      break;
  }
}

std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t count,
                                       const StreamKey& key) {
  std::vector<double> out(count);
  CounterRng rng(key);
  sample_innovations(spec, rng, out);
  return out;
}

std::vector<double> sample_innovations(const InnovationSpec& spec, std::size_t count,
                                       std::uint64_t seed) {
  return sample_innovations(spec, count, StreamKey{seed, 0, StreamRole::kInnovations});
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kWhiteNoise:
      return "white_noise";
    case ModelKind::kMovingAverage:
      return "ma";
    case ModelKind::kArfima:
      return "arfima";
    case ModelKind::kFractionalOfShortMemory:
      return "fractional_short";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& name) {
  for (auto k : {ModelKind::kWhiteNoise, ModelKind::kMovingAverage, ModelKind::kArfima,
                 ModelKind::kFractionalOfShortMemory}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown model kind '" + name + "'");
}

std::size_t default_truncation(std::size_t n) {
  return std::max<std::size_t>(100 * n, std::size_t{1} << 17);
}

void check_causal(std::span<const double> ar) {
  const auto p = static_cast<Eigen::Index>(ar.size());
  if (p == 0) return;
  // Eigenvalues of the companion matrix are the reciprocals of the roots of
  // phi(z) = 1 - ar_1 z - ... - ar_p z^p.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) companion(0, i) = ar[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NonCausalAR("AR root solve failed");
  for (Eigen::Index i = 0; i < p; ++i) {
    const double modulus = std::abs(solver.eigenvalues()(i));
    if (modulus >= 1.0 - 1e-10) {
      throw NonCausalAR("AR polynomial has a root in the closed unit disk (|root| = " +
                        csv::format_double(1.0 / modulus) + ")");
    }
  }
}

std::vector<double> fractional_weights(double d, std::size_t truncation) {
  check_d(d);
  std::vector<double> psi(truncation + 1);
  psi[0] = 1.0;
  for (std::size_t k = 1; k <= truncation; ++k) {
    const double kk = static_cast<double>(k);
    psi[k] = psi[k - 1] * (kk - 1.0 + d) / kk;
  }
  return psi;
}

std::vector<double> arfima_ma_coeffs(double d, std::span<const double> ar,
                                     std::span<const double> ma, std::size_t truncation) {
  check_d(d);
  check_causal(ar);
  const std::vector<double> psi = fractional_weights(d, truncation);
  if (ar.empty() && ma.empty()) return psi;
  // Run psi through theta(B) / phi(B) recursively.
  std::vector<double> a(truncation + 1, 0.0);
  for (std::size_t k = 0; k <= truncation; ++k) {
    double acc = psi[k];
    for (std::size_t i = 1; i <= ma.size() && i <= k; ++i) acc += ma[i - 1] * psi[k - i];
    for (std::size_t i = 1; i <= ar.size() && i <= k; ++i) acc += ar[i - 1] * a[k - i];
    a[k] = acc;
  }
  return a;
}

LinearProcessModel LinearProcessModel::white_noise() {
  LinearProcessModel m;
  m.kind_ = ModelKind::kWhiteNoise;
  m.coeffs_ = std::make_shared<const std::vector<double>>(std::vector<double>{1.0});
  return m;
}

LinearProcessModel LinearProcessModel::moving_average(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("moving average needs at least a_0");
  LinearProcessModel m;
  m.kind_ = ModelKind::kMovingAverage;
  m.ma_ = coeffs;
  m.coeffs_ = std::make_shared<const std::vector<double>>(std::move(coeffs));
  return m;
}

LinearProcessModel LinearProcessModel::arfima(double d, std::vector<double> ar,
                                              std::vector<double> ma, std::size_t truncation) {
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  LinearProcessModel m;
  m.kind_ = ModelKind::kArfima;
  m.d_ = d;
  m.coeffs_ = std::make_shared<const std::vector<double>>(arfima_ma_coeffs(d, ar, ma, truncation));
  m.ar_ = std::move(ar);
  m.ma_ = std::move(ma);
  return m;
}

LinearProcessModel LinearProcessModel::fractional_of_short_memory(double d,
                                                                  std::vector<double> short_coeffs,
                                                                  std::size_t truncation) {
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  if (short_coeffs.empty()) throw DomainError("short-memory component needs coefficients");
  const std::vector<double> psi = fractional_weights(d, truncation);
  std::vector<double> a(truncation + 1, 0.0);
  for (std::size_t k = 0; k <= truncation; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < short_coeffs.size() && i <= k; ++i) acc += short_coeffs[i] * psi[k - i];
    a[k] = acc;
  }
  LinearProcessModel m;
  m.kind_ = ModelKind::kFractionalOfShortMemory;
  m.d_ = d;
  m.short_ = std::move(short_coeffs);
  m.coeffs_ = std::make_shared<const std::vector<double>>(std::move(a));
  return m;
}

std::string LinearProcessModel::id() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case ModelKind::kWhiteNoise:
      break;
    case ModelKind::kMovingAverage:
      os << "(a=" << list(ma_) << ")";
      break;
    case ModelKind::kArfima:
      os << "(d=" << csv::format_double(d_) << ",ar=" << list(ar_) << ",ma=" << list(ma_)
         << ",K=" << truncation() << ")";
      break;
    case ModelKind::kFractionalOfShortMemory:
      os << "(d=" << csv::format_double(d_) << ",b=" << list(short_) << ",K=" << truncation()
         << ")";
      break;
  }
  return os.str();
}

void ModelSpec::validate() const {
  check_d(d);
  if (kind == ModelKind::kArfima) check_causal(ar);
  if (kind == ModelKind::kFractionalOfShortMemory && short_coeffs.empty()) {
    throw DomainError("fractional_short model needs short-memory coefficients");
  }
}

LinearProcessModel ModelSpec::build(std::size_t n) const {
  validate();
  const std::size_t k = truncation ? truncation : default_truncation(n);
  switch (kind) {
    case ModelKind::kWhiteNoise:
      return LinearProcessModel::white_noise();
    case ModelKind::kMovingAverage:
      return LinearProcessModel::moving_average(ma.empty() ? std::vector<double>{1.0} : ma);
    case ModelKind::kArfima:
      return LinearProcessModel::arfima(d, ar, ma, k);
    case ModelKind::kFractionalOfShortMemory:
      return LinearProcessModel::fractional_of_short_memory(d, short_coeffs, k);
  }
  throw DomainError("unknown model kind");
}

std::complex<double> truncated_transfer(std::span<const double> coeffs, double u) {
  CompensatedSum re, im;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double angle = -static_cast<double>(k) * u;
    re += coeffs[k] * std::cos(angle);
    im += coeffs[k] * std::sin(angle);
  }
  return {re.value(), im.value()};
}

std::complex<double> transfer_function(const LinearProcessModel& model, double u) {
  check_frequency(u);
  switch (model.kind()) {
    case ModelKind::kWhiteNoise:
      return {1.0, 0.0};
    case ModelKind::kMovingAverage:
      return truncated_transfer(model.coeffs(), u);
    case ModelKind::kArfima: {
      const std::complex<double> h = std::pow(one_minus_shift(u), -model.d());
      return h * lag_polynomial(model.ma(), 1.0, u) / lag_polynomial(model.ar(), -1.0, u);
    }
    case ModelKind::kFractionalOfShortMemory: {
      const std::complex<double> h = std::pow(one_minus_shift(u), -model.d());
      return h * truncated_transfer(model.short_coeffs(), u);
    }
  }
  throw DomainError("unknown model kind");
}

double spectral_density(const LinearProcessModel& model, double u) {
  return std::norm(transfer_function(model, u)) / kTwoPi;
}

double short_memory_g(const LinearProcessModel& model, double u) {
  return std::pow(u, 2.0 * model.d()) * spectral_density(model, u);
}

std::span<const double> SamplePath::in_sample_innovations() const {
  if (innovations.size() < n) throw MissingInnovations("sample path carries no innovation record");
  return std::span<const double>(innovations).subspan(innovations.size() - n);
}

std::vector<double> apply_linear_filter(std::span<const double> coeffs,
                                        std::span<const double> innovations, std::size_t n) {
  const std::size_t k = coeffs.size() - 1;
  if (innovations.size() != k + n) throw DomainError("filter needs K + n innovations");
  std::vector<double> x(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) acc += coeffs[j] * innovations[t + k - j];
    x[t] = acc;
  }
  return x;
}

Simulator::Simulator(LinearProcessModel model, InnovationSpec innovation, std::size_t n)
    : model_(std::move(model)), innovation_(innovation), n_(n) {
  if (n_ < 8) throw DomainError("simulation needs n >= 8");
  const auto a = model_.coeffs();
  order_ = a.size() - 1;
  while (order_ > 0 && a[order_] == 0.0) --order_;
  const std::size_t k = order_;
  direct_ = (k + 1) * n_ <= kDirectFilterWork;
  if (!direct_) {
    const std::size_t size = fft::next_power_of_two(k + n_);
    plan_ = fft::real_plan(size);
    std::vector<double> padded(size, 0.0);
    std::copy(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k + 1), padded.begin());
    coeff_spectrum_ = plan_->forward(padded);
  }
}

std::vector<double> Simulator::filter(std::span<const double> innovations) const {
  if (direct_) return apply_linear_filter(model_.coeffs().first(order_ + 1), innovations, n_);
  const std::size_t k = order_;
  std::vector<double> padded(plan_->size(), 0.0);
  std::copy(innovations.begin(), innovations.end(), padded.begin());
  auto spectrum = plan_->forward(padded);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const fft::Complex a = spectrum[i];
    const fft::Complex b = coeff_spectrum_[i];
    spectrum[i] = {a.real() * b.real() - a.imag() * b.imag(),
                   a.real() * b.imag() + a.imag() * b.real()};
  }
  const auto full = plan_->backward(spectrum);
  return std::vector<double>(full.begin() + static_cast<std::ptrdiff_t>(k),
                             full.begin() + static_cast<std::ptrdiff_t>(k + n_));
}

SamplePath Simulator::run(const StreamKey& key) const {
  SamplePath path;
  path.n = n_;
  path.seed = key.master_seed;
  path.model_id = model_.id();
  path.innovations = sample_innovations(innovation_, order_ + n_, key);
  path.values = filter(path.innovations);
  return path;
}

void Simulator::run(const StreamKey& key, std::vector<double>& values,
                    std::vector<double>& in_sample) const {
  const auto innovations = sample_innovations(innovation_, order_ + n_, key);
  values = filter(innovations);
  in_sample.assign(innovations.end() - static_cast<std::ptrdiff_t>(n_), innovations.end());
}

SamplePath simulate(const LinearProcessModel& model, const InnovationSpec& innovation,
                    std::size_t n, std::uint64_t seed) {
  return Simulator(model, innovation, n).run(StreamKey{seed, 0, StreamRole::kInnovations});
}

}  // namespace wpsum
