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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "wpsum/errors.hpp"
#include "wpsum/process_models.hpp"
#include "wpsum/quad_forms.hpp"
#include "wpsum/rng.hpp"
#include "wpsum/spectral_core.hpp"

using namespace wpsum;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_weights(std::size_t count, std::uint64_t seed) {
  CounterRng rng({seed, 0, StreamRole::kAuxiliary});
  std::vector<double> w(count);
  for (auto& v : w) v = rng.normal();
  return w;
}

double direct_c(const std::vector<double>& b, std::size_t n, long t) {
  long double acc = 0.0;
  for (std::size_t j = 1; j <= b.size(); ++j) {
    acc += b[j - 1] * std::cos(static_cast<long double>(t) * 2.0L * std::numbers::pi_v<long double> * j / n);
  }
  return static_cast<double>(acc / n);
}

Eigen::MatrixXd dense_toeplitz(const std::vector<double>& b, std::size_t n) {
  Eigen::MatrixXd C(n, n);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < n; ++s) C(t, s) = direct_c(b, n, static_cast<long>(t) - static_cast<long>(s));
  }
  return C;
}

const std::vector<InnovationSpec>& all_innovations() {
  static const std::vector<InnovationSpec> specs{
      InnovationSpec::of(InnovationFamily::kGaussian), InnovationSpec::of(InnovationFamily::kCenteredExponential),
      InnovationSpec::of(InnovationFamily::kUniform), InnovationSpec::of(InnovationFamily::kRademacher)};
  return specs;
}

}  // namespace

TEST_CASE("weight scheme examples") {
  CHECK(generate_weights(WeightScheme::uniform(), 16) == std::vector<double>(7, 1.0));
  CHECK(generate_weights(WeightScheme::uniform(), 16, true) == std::vector<double>(8, 1.0));

  for (std::size_t m : {1u, 8u, 50u, 511u}) {
    const auto w = generate_weights(WeightScheme::local_whittle(m), 1024);
    REQUIRE(w.size() == 511);
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += w[j];
    CHECK(std::abs(sum) < 1e-10);
    for (std::size_t j = m; j < w.size(); ++j) CHECK(w[j] == 0.0);
  }

  const auto cx = generate_weights(WeightScheme::counterexample(0.3), 100);
  REQUIRE(cx.size() == 49);
  CHECK(cx[0] == doctest::Approx(4 * kPi * std::pow(2 * kPi, -0.6)).epsilon(1e-14));
  CHECK(cx[9] == doctest::Approx(4 * kPi * std::pow(2 * kPi * 10, -0.6)).epsilon(1e-14));

  const auto ind = generate_weights(WeightScheme::indicator(1.0), 64);
  for (std::size_t j = 1; j <= ind.size(); ++j) CHECK(ind[j - 1] == (2 * kPi * j / 64 <= 1.0 ? 1.0 : 0.0));

  const auto cosw = generate_weights(WeightScheme::cosine(3), 64);
  for (std::size_t j = 1; j <= cosw.size(); ++j) CHECK(cosw[j - 1] == doctest::Approx(std::cos(3 * 2 * kPi * j / 64)));

  const std::size_t n = 1024;
  const auto ker = generate_weights(WeightScheme::kernel_at(1.0), n);
  const double h = std::pow(static_cast<double>(n), -0.2);
  double mass = 0.0;
  for (std::size_t j = 1; j <= ker.size(); ++j) {
    const double x = (2 * kPi * j / n - 1.0) / h;
    const double expect = std::abs(x) <= 1.0 ? 0.75 * (1 - x * x) / (n * h) : 0.0;
    CHECK(ker[j - 1] == doctest::Approx(expect).epsilon(1e-13));
    mass += ker[j - 1];
  }
  // Riemann sum of K over u with step 2 pi / n
  CHECK(mass * 2 * kPi == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("invalid scheme parameters") {
  CHECK_THROWS_AS(generate_weights(WeightScheme::local_whittle(64), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::local_whittle(0), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::indicator(0.0), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::indicator(3.5), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::kernel_at(-1.0), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::from_values({1, 2, 3}), 128), DomainError);
  CHECK_THROWS_AS(generate_weights(WeightScheme::uniform(), 4), DomainError);
  CHECK_THROWS_AS(parse_weight_kind("triangle"), DomainError);
}

TEST_CASE("custom weights from csv") {
  const auto path = (std::filesystem::temp_directory_path() / "wpsum_weights_test.csv").string();
  {
    std::ofstream out(path);
    out << "b\n";
    for (int j = 1; j <= 7; ++j) out << j * 0.5 << '\n';
  }
  const auto w = generate_weights(WeightScheme::from_csv(path), 16);
  REQUIRE(w.size() == 7);
  CHECK(w[6] == 3.5);
  CHECK_THROWS_AS(generate_weights(WeightScheme::from_csv(path), 32), DomainError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(WeightScheme::from_csv(path), IoError);
}

TEST_CASE("weight constant examples") {
  const std::size_t n = 1024, nu = 511;
  const std::vector<double> ones(nu, 1.0);
  const std::vector<double> f(nu, 1.0 / (2 * kPi));
  const auto g = weight_constants(ones, f, InnovationSpec::gaussian(), n);
  CHECK(g.q_n_sq == doctest::Approx(nu).epsilon(1e-14));
  CHECK(g.B_n * g.B_n == doctest::Approx(nu).epsilon(1e-14));
  CHECK(g.sum_b == nu);
  CHECK(g.b_n == 1.0);
  const auto e = weight_constants(ones, f, InnovationSpec::of(InnovationFamily::kCenteredExponential), n);
  CHECK(e.q_n_sq == doctest::Approx(nu + 6.0 * nu * nu / n).epsilon(1e-14));
  CHECK(e.v_n_sq == doctest::Approx((nu + 6.0 * nu * nu / n) / (4 * kPi * kPi)).epsilon(1e-13));
  CHECK(e.sum_bf == doctest::Approx(nu / (2 * kPi)).epsilon(1e-14));

  std::vector<double> cancel(nu, 0.0);
  cancel[0] = 1.0;
  cancel[1] = -1.0;
  for (const auto& spec : all_innovations()) {
    const auto c = weight_constants(cancel, f, spec, n);
    CHECK(c.sum_b == 0.0);
    CHECK(c.q_n_sq == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("variance constants obey the cumulant bounds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 64 << (seed % 5);
    const std::size_t nu = n / 2 - 1;
    auto w = random_weights(nu, seed);
    if (seed % 2) {
      for (auto& v : w) v = std::abs(v);  // positive weights make the cumulant term large
    }
    const std::vector<double> f(nu, 0.3);
    for (const auto& spec : all_innovations()) {
      const auto c = weight_constants(w, f, spec, n);
      const double B2 = c.B_n * c.B_n;
      CHECK(c.q_n_sq >= std::min(1.0, spec.var_zeta_sq / 2.0) * B2 - 1e-12 * B2);
      CHECK(c.q_n_sq <= (1.0 + std::abs(spec.fourth_cumulant)) * B2 + 1e-12 * B2);
      CHECK(c.q_n_sq == doctest::Approx(B2 + spec.fourth_cumulant * c.sum_b * c.sum_b / n).epsilon(1e-12));
      CHECK(c.v_n_sq == doctest::Approx(c.B_fn * c.B_fn + spec.fourth_cumulant * c.sum_bf * c.sum_bf / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("lindeberg ratios") {
  const std::size_t nu = 511;
  const std::vector<double> f(nu, 0.2);
  const auto u = lindeberg_ratios(std::vector<double>(nu, 1.0), f);
  CHECK(u.plain == doctest::Approx(1.0 / std::sqrt(nu)).epsilon(1e-14));
  CHECK(u.f == doctest::Approx(1.0 / std::sqrt(nu)).epsilon(1e-14));
  std::vector<double> single(nu, 0.0);
  single[10] = -3.0;
  CHECK(lindeberg_ratios(single, f).plain == 1.0);
  CHECK_THROWS_AS(lindeberg_ratios(std::vector<double>(nu, 0.0), f), DegenerateWeights);

  for (std::size_t n : {256u, 4096u, 65536u}) {
    const auto w = generate_weights(WeightScheme::counterexample(0.3), n);
    long double partial = 0.0;
    for (std::size_t j = 1; j <= n / 2 - 1; ++j) partial += std::pow(static_cast<long double>(j), -1.2L);
    const double r = lindeberg_ratios(w, std::vector<double>(w.size(), 1.0)).plain;
    CHECK(r * r == doctest::Approx(static_cast<double>(1.0L / partial)).epsilon(1e-12));
    CHECK(r * r > 0.17886);
  }
}

TEST_CASE("quadratic forms on white noise") {
  const std::size_t n = 1024;
  const auto z = sample_innovations(InnovationSpec::gaussian(), n, 5);
  const auto pgram = periodogram(z);
  const std::size_t nu = summation_limit(n);
  const std::vector<double> f(nu, 1.0 / (2 * kPi));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto w = random_weights(nu, seed);
    CHECK(s_n_x(pgram, f, w) == s_n_zeta(z, w));
    CHECK(q_n_zeta(z, f, w) == doctest::Approx(s_n_zeta(z, w) / (2 * kPi)).epsilon(1e-13));
  }
  const std::vector<double> zeros(nu, 0.0);
  CHECK(s_n_x(pgram, f, zeros) == 0.0);
  CHECK(s_n_zeta(std::vector<double>(n, 0.0), std::vector<double>(nu, 1.0)) == 0.0);
  CHECK(q_n_zeta(std::vector<double>(n, 0.0), f, std::vector<double>(nu, 1.0)) == 0.0);
  CHECK(q_n_x(periodogram(std::vector<double>(n, 0.0)), std::vector<double>(nu, 1.0)) == 0.0);
  auto bad_f = f;
  bad_f[3] = 0.0;
  CHECK_THROWS_AS(s_n_x(pgram, bad_f, std::vector<double>(nu, 1.0)), DomainError);

  const auto path = simulate(LinearProcessModel::white_noise(), InnovationSpec::gaussian(), n, 9);
  CHECK(bartlett_residual(path, f, random_weights(nu, 4)) == 0.0);
  SamplePath bare = path;
  bare.innovations.clear();
  CHECK_THROWS_AS(bartlett_residual(bare, f, random_weights(nu, 4)), MissingInnovations);
}

TEST_CASE("inverse-density weights turn Q into S") {
  const std::size_t n = 512;
  const auto model = LinearProcessModel::arfima(0.3, {}, {}, default_truncation(n));
  const auto path = simulate(model, InnovationSpec::gaussian(), n, 2);
  const auto pgram = periodogram(path.values);
  const std::size_t nu = summation_limit(n);
  const auto f = spectral_values(model, n, nu);
  std::vector<double> inv(nu);
  for (std::size_t j = 0; j < nu; ++j) inv[j] = 1.0 / f[j];
  CHECK(q_n_x(pgram, inv) == doctest::Approx(s_n_x(pgram, f, std::vector<double>(nu, 1.0))).epsilon(1e-12));
}

TEST_CASE("indicator weights and the energy identity") {
  const std::size_t n = 256;
  const auto z = sample_innovations(InnovationSpec::gaussian(), n, 17);
  const auto pgram = periodogram(z);
  const double q = q_n_x(pgram, generate_weights(WeightScheme::indicator(kPi), n));
  long double energy = 0.0;
  for (double v : z) energy += static_cast<long double>(v) * v;
  const double rebuilt = 2 * kPi * (pgram.ordinates[0] + 2.0 * q + pgram.ordinates[n / 2]);
  CHECK(rebuilt == doctest::Approx(static_cast<double>(energy)).epsilon(1e-10));
}

TEST_CASE("quad form report") {
  const std::size_t n = 512;
  const auto model = LinearProcessModel::arfima(0.2, {}, {}, default_truncation(n));
  const auto path = simulate(model, InnovationSpec::gaussian(), n, 8);
  const std::size_t nu = summation_limit(n);
  const auto f = spectral_values(model, n, nu);
  const std::vector<double> w(nu, 1.0);
  const auto r = quad_form_report(path.values, path.in_sample_innovations(), f, w, InnovationSpec::gaussian());
  CHECK(r.R_n == r.S_nX - r.S_nZeta);
  CHECK(r.R_n == bartlett_residual(path, f, w));
  CHECK(r.standardized_S == doctest::Approx((r.S_nX - r.constants.sum_b) / std::sqrt(r.constants.q_n_sq)));
  CHECK(r.standardized_Q == doctest::Approx((r.Q_nX - r.constants.sum_bf) / std::sqrt(r.constants.v_n_sq)));
  const auto j = to_json(r);
  for (const char* key : {"S_nX", "S_nZeta", "R_n", "Q_nX", "Q_nZeta", "standardized_S", "standardized_Q"}) {
    CHECK(j.contains(key));
  }
  for (const char* key : {"b_n", "B_n", "sum_b", "q_n_sq", "b_fn", "B_fn", "sum_bf", "v_n_sq"}) {
    CHECK(j["constants"].contains(key));
  }
}

TEST_CASE("scale equivariance") {
  const std::size_t n = 512;
  const auto model = LinearProcessModel::arfima(0.3, {}, {}, default_truncation(n));
  const auto path = simulate(model, InnovationSpec::gaussian(), n, 12);
  const std::size_t nu = summation_limit(n);
  const auto f = spectral_values(model, n, nu);
  const auto w = random_weights(nu, 6);
  for (double lambda : {0.25, 3.0, -2.0}) {
    auto lw = w;
    for (auto& v : lw) v *= lambda;
    const auto a = quad_form_report(path.values, path.in_sample_innovations(), f, w, InnovationSpec::gaussian());
    const auto b = quad_form_report(path.values, path.in_sample_innovations(), f, lw, InnovationSpec::gaussian());
    CHECK(b.S_nX == doctest::Approx(lambda * a.S_nX).epsilon(1e-12));
    CHECK(b.S_nZeta == doctest::Approx(lambda * a.S_nZeta).epsilon(1e-12));
    CHECK(b.R_n == doctest::Approx(lambda * a.R_n).epsilon(1e-10));
    CHECK(b.constants.b_n == doctest::Approx(std::abs(lambda) * a.constants.b_n).epsilon(1e-14));
    CHECK(b.constants.B_n == doctest::Approx(std::abs(lambda) * a.constants.B_n).epsilon(1e-14));
    CHECK(b.constants.q_n_sq == doctest::Approx(lambda * lambda * a.constants.q_n_sq).epsilon(1e-13));
    const auto la = lindeberg_ratios(w, f);
    const auto lb = lindeberg_ratios(lw, f);
    CHECK(lb.plain == doctest::Approx(la.plain).epsilon(1e-14));
    CHECK(lb.f == doctest::Approx(la.f).epsilon(1e-14));
  }
}

TEST_CASE("band-limited weights equal zero-padded weights") {
  const std::size_t n = 1024;
  const auto z = sample_innovations(InnovationSpec::gaussian(), n, 21);
  const std::size_t nu = summation_limit(n);
  const auto w = random_weights(nu, 22);
  for (double theta : {0.05, 0.2, 0.5}) {
    auto banded = w;
    apply_band_limit(banded, n, theta);
    const std::size_t cut = static_cast<std::size_t>(std::floor(theta * n));
    std::vector<double> padded(nu, 0.0);
    for (std::size_t j = 1; j <= std::min(cut, nu); ++j) padded[j - 1] = w[j - 1];
    CHECK(banded == padded);
    CHECK(s_n_zeta(z, banded) == s_n_zeta(z, padded));
  }
  auto w2 = w;
  CHECK_THROWS_AS(apply_band_limit(w2, n, 0.0), DomainError);
}

TEST_CASE("toeplitz coefficients") {
  const auto u = toeplitz_form(std::vector<double>(31, 1.0), 64);
  CHECK(u.c[0] == doctest::Approx(31.0 / 64).epsilon(1e-15));
  for (std::size_t n : {64u, 200u, 1000u, 2048u}) {
    const auto b = random_weights(n / 2 - 1, n);
    const auto form = toeplitz_form(b, n);
    for (std::size_t t = 0; t < n; t += 7) CHECK(form.c[t] == doctest::Approx(direct_c(b, n, t)).epsilon(1e-9).scale(1e-2));
  }
  // Cosine weights at lag k: (1/n) sum_{j<=nu} cos^2(k u_j) = 1/4 - 1/n for even n.
  for (std::size_t n : {64u, 256u}) {
    const auto form = toeplitz_form(generate_weights(WeightScheme::cosine(5), n), n);
    CHECK(form.c[5] == doctest::Approx(0.25 - 1.0 / n).epsilon(1e-12));
    CHECK(form.c[5] == doctest::Approx(direct_c(generate_weights(WeightScheme::cosine(5), n), n, 5)).epsilon(1e-12));
  }
}

TEST_CASE("toeplitz quadratic form reproduces the innovation sum") {
  for (std::size_t n : {64u, 100u, 256u}) {
    const auto z = sample_innovations(InnovationSpec::of(InnovationFamily::kCenteredExponential), n, n);
    for (std::uint64_t seed : {1u, 2u}) {
      const auto b = random_weights(summation_limit(n), seed);
      const double qf = toeplitz_quadratic_form(toeplitz_form(b, n), z);
      CHECK(qf == doctest::Approx(s_n_zeta(z, b)).epsilon(1e-8));
    }
  }
}

TEST_CASE("frobenius norm identity") {
  for (std::size_t n : {64u, 256u, 1024u}) {
    const auto b = random_weights(summation_limit(n), 3 * n);
    const auto c = weight_constants(b, std::vector<double>(b.size(), 1.0), InnovationSpec::gaussian(), n);
    CHECK(frobenius_norm_sq(toeplitz_form(b, n)) == doctest::Approx(c.B_n * c.B_n / 2).epsilon(1e-10));
  }
  CHECK(frobenius_norm_sq(toeplitz_form(std::vector<double>(31, 0.0), 64)) == 0.0);
  std::vector<double> single(7, 0.0);
  single[0] = 1.0;
  CHECK(frobenius_norm_sq(toeplitz_form(single, 16)) == doctest::Approx(0.5).epsilon(1e-14));
  const auto b = random_weights(31, 9);
  const Eigen::MatrixXd C = dense_toeplitz(b, 64);
  CHECK(frobenius_norm_sq(toeplitz_form(b, 64)) == doctest::Approx(C.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("toeplitz operator matches the dense product") {
  for (std::size_t n : {64u, 100u}) {
    const auto b = random_weights(summation_limit(n), n + 5);
    const Eigen::MatrixXd C = dense_toeplitz(b, n);
    const auto x = random_weights(n, 99);
    const auto y = ToeplitzOperator(toeplitz_form(b, n)).apply(x);
    const Eigen::VectorXd ref = C * Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(ref(i)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("spectral norm") {
  const std::size_t n = 64;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto b = random_weights(summation_limit(n), seed);
    const Eigen::MatrixXd C = dense_toeplitz(b, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
    const double dense = es.eigenvalues().cwiseAbs().maxCoeff();
    const double lanczos = spectral_norm(toeplitz_form(b, n), 1e-12);
    CHECK(std::abs(lanczos - dense) < 1e-6);
    double bmax = 0.0;
    for (double v : b) bmax = std::max(bmax, std::abs(v));
    CHECK(lanczos <= bmax / std::sqrt(2.0) + 1e-6);
  }
  std::vector<double> single(7, 0.0);
  single[0] = 1.0;
  const double s = spectral_norm(toeplitz_form(single, 16), 1e-12);
  CHECK(s > 0.0);
  CHECK(s <= 1.0 / std::sqrt(2.0));
  CHECK(spectral_norm(toeplitz_form(std::vector<double>(31, 0.0), 64), 1e-10) == 0.0);
  CHECK_THROWS_AS(spectral_norm(toeplitz_form(single, 16), 0.0), DomainError);
  std::vector<double> tie(31, 0.1);
  tie[3] = 1.0;
  tie[9] = -0.9999;
  CHECK_THROWS_AS(spectral_norm(toeplitz_form(tie, 64), 1e-15, 2), NoConvergence);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tied(dense_toeplitz(tie, 64));
  CHECK(std::abs(spectral_norm(toeplitz_form(tie, 64), 1e-12) - tied.eigenvalues().cwiseAbs().maxCoeff()) < 1e-9);
}
