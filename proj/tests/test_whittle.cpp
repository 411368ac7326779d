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

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "wpsum/errors.hpp"
#include "wpsum/process_models.hpp"
#include "wpsum/spectral_core.hpp"
#include "wpsum/whittle.hpp"

using namespace wpsum;

TEST_CASE("local whittle weight examples") {
  CHECK(lw_weights(64, 1) == std::vector<double>{0.0});
  for (std::size_t m : {2u, 17u, 100u, 1000u}) {
    const auto w = lw_weights(4096, m);
    REQUIRE(w.size() == m);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(std::abs(sum) < 1e-10);
  }
  const auto w = lw_weights(4096, 1000);
  double ss = 0.0;
  for (double v : w) ss += v * v;
  CHECK(ss / 1000 == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(lw_weights(64, 32), DomainError);
  CHECK_THROWS_AS(lw_weights(64, 0), DomainError);
}

TEST_CASE("local whittle weights become negligible") {
  double prev = INFINITY;
  for (int p = 5; p <= 14; ++p) {
    const std::size_t m = std::size_t{1} << p;
    const auto w = lw_weights(4 * m, m);
    double mx = 0.0, ss = 0.0;
    for (double v : w) {
      mx = std::max(mx, std::abs(v));
      ss += v * v;
    }
    const double ratio = mx / std::sqrt(ss);
    CHECK(ratio < prev);
    CHECK(ratio <= 1.5 * std::log(static_cast<double>(m)) / std::sqrt(static_cast<double>(m)));
    prev = ratio;
  }
}

TEST_CASE("objective against its definition") {
  const std::size_t n = 1024, m = 90;
  const auto x = simulate(LinearProcessModel::arfima(0.2, {}, {}, default_truncation(n)), InnovationSpec::gaussian(), n, 4).values;
  const auto pgram = periodogram(x);
  for (double d : {-0.4, 0.0, 0.25}) {
    long double a = 0.0, b = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      const long double u = 2.0L * std::numbers::pi_v<long double> * j / n;
      a += std::pow(static_cast<long double>(j), 2.0L * d) * pgram.ordinates[j] * std::pow(2.0L * std::numbers::pi_v<long double> / n, 2.0L * d);
      b += std::log(u);
    }
    const double ref = static_cast<double>(std::log(a / m) - 2.0L * d * b / m);
    CHECK(lw_objective(d, pgram, m) == doctest::Approx(ref).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lw_objective(0.5, pgram, m), DomainError);
  CHECK_THROWS_AS(lw_objective(0.1, periodogram(std::vector<double>(n, 1.0)), m), DegeneratePeriodogram);
}

TEST_CASE("objective is convex and minimized at the estimate") {
  const std::size_t n = 4096;
  const auto x = simulate(LinearProcessModel::arfima(0.3, {}, {}, default_truncation(n)), InnovationSpec::gaussian(), n, 10).values;
  const auto est = estimate_d(x, default_whittle_bandwidth(n));
  const auto& curve = est.objective_curve;
  REQUIRE(curve.size() == 981);
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    CHECK(curve[i + 1].second - 2 * curve[i].second + curve[i - 1].second >= -1e-12);
  }
  CHECK(est.d_hat > -0.49);
  CHECK(est.d_hat < 0.49);
  const auto pgram = periodogram(x);
  double best = INFINITY;
  for (const auto& [d, r] : curve) best = std::min(best, r);
  CHECK(lw_objective(est.d_hat, pgram, est.m) <= best + 1e-12);
  CHECK(est.std_error == doctest::Approx(1.0 / (2.0 * std::sqrt(static_cast<double>(est.m)))));
}

TEST_CASE("estimate is invariant under rescaling the series") {
  const std::size_t n = 2048;
  const auto x = simulate(LinearProcessModel::arfima(-0.2, {}, {}, default_truncation(n)), InnovationSpec::gaussian(), n, 5).values;
  const std::size_t m = default_whittle_bandwidth(n);
  const double base = estimate_d(x, m).d_hat;
  for (double lambda : {0.5, 8.0, 1024.0}) {
    auto y = x;
    for (auto& v : y) v *= lambda;
    CHECK(estimate_d(y, m).d_hat == base);
  }
  for (double lambda : {3.0, 0.1}) {
    auto y = x;
    for (auto& v : y) v *= lambda;
    CHECK(estimate_d(y, m).d_hat == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("estimate preconditions") {
  const auto x = sample_innovations(InnovationSpec::gaussian(), 256, 1);
  CHECK_THROWS_AS(estimate_d(x, 7), DomainError);
  CHECK_THROWS_AS(estimate_d(x, 128), DomainError);
  CHECK_NOTHROW(estimate_d(x, 127));
  CHECK(default_whittle_bandwidth(8192) == 349);
}

TEST_CASE("white noise estimate is near zero") {
  const std::size_t n = 8192;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    total += estimate_d(sample_innovations(InnovationSpec::gaussian(), n, seed), default_whittle_bandwidth(n)).d_hat;
  }
  CHECK(std::abs(total / 20) < 0.05);
}
