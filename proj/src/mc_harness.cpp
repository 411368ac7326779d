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

#include "wpsum/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "wpsum/errors.hpp"
#include "wpsum/summation.hpp"

namespace wpsum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_q_statistic(Statistic s) { return s == Statistic::kStdQ || s == Statistic::kBiasQ; }

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace

std::string to_string(Statistic s) {
  switch (s) {
    case Statistic::kStdS:
      return "std_s";
    case Statistic::kStdQ:
      return "std_q";
    case Statistic::kResidual:
      return "residual";
    case Statistic::kBiasS:
      return "bias_s";
    case Statistic::kBiasQ:
      return "bias_q";
  }
  return "unknown";
}

Statistic parse_statistic(const std::string& name) {
  for (auto s : {Statistic::kStdS, Statistic::kStdQ, Statistic::kResidual, Statistic::kBiasS,
                 Statistic::kBiasQ}) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown statistic '" + name + "'");
}

void MCStudyConfig::validate() const {
  if (replications < 100) throw DomainError("replications must be >= 100");
  if (n_grid.empty()) throw DomainError("n_grid is empty");
  for (std::size_t n : n_grid) {
    if (n < 64) throw DomainError("every n in n_grid must be >= 64, got " + std::to_string(n));
  }
  if (theta_band && !(*theta_band > 0.0)) throw DomainError("theta_band must be positive");
  model.validate();
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> study_weights(const MCStudyConfig& config, std::size_t n) {
  std::vector<double> w = generate_weights(config.scheme, n, config.include_nyquist);
  if (config.theta_band) apply_band_limit(w, n, *config.theta_band);
  return w;
}

ReplicationSet collect_replications(const MCStudyConfig& config, std::size_t n) {
  ReplicationSet set;
  set.n = n;
  const LinearProcessModel model = config.model.build(n);
  const Simulator sim(model, config.innovation, n);
  set.weights = study_weights(config, n);
  set.f_vals = spectral_values(model, n, set.weights.size());
  set.constants = weight_constants(set.weights, set.f_vals, config.innovation, n);
  set.records.resize(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t rep) {
    std::vector<double> values, innovations;
    sim.run(StreamKey{config.master_seed, rep, StreamRole::kInnovations}, values, innovations);
    const QuadFormReport r =
        quad_form_report(values, innovations, set.f_vals, set.weights, config.innovation);
    set.records[rep] = {rep, r.S_nX, r.S_nZeta, r.R_n, r.Q_nX, r.Q_nZeta};
  });
  return set;
}

double statistic_value(const ReplicationRecord& rec, const WeightConstants& c, Statistic s) {
  switch (s) {
    case Statistic::kStdS:
      return (rec.S_nX - c.sum_b) / std::sqrt(c.q_n_sq);
    case Statistic::kStdQ:
      return (rec.Q_nX - c.sum_bf) / std::sqrt(c.v_n_sq);
    case Statistic::kResidual:
      return rec.R_n;
    case Statistic::kBiasS:
      return rec.S_nX - c.sum_b;
    case Statistic::kBiasQ:
      return rec.Q_nX - c.sum_bf;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

PerNSummary summarize(const ReplicationSet& set, Statistic statistic) {
  PerNSummary s;
  s.n = set.n;
  s.constants = set.constants;
  s.values.reserve(set.records.size());
  std::vector<double> raw;
  raw.reserve(set.records.size());
  CompensatedSum r2;
  for (const auto& rec : set.records) {
    s.values.push_back(statistic_value(rec, set.constants, statistic));
    raw.push_back(is_q_statistic(statistic) ? rec.Q_nX : rec.S_nX);
    r2 += rec.R_n * rec.R_n;
  }
  s.moments = describe(s.values);
  s.normality = normality_tests(s.values);
  const double theory = is_q_statistic(statistic) ? set.constants.v_n_sq : set.constants.q_n_sq;
  s.var_ratio = describe(raw).variance / theory;
  s.residual_msq = r2.value() / static_cast<double>(set.records.size());
  try {
    s.lindeberg = lindeberg_ratios(set.weights, set.f_vals);
  } catch (const DegenerateWeights&) {
    s.lindeberg = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  return s;
}

MCStudySummary run_clt_study(const MCStudyConfig& config) {
  config.validate();
  MCStudySummary summary;
  summary.statistic = config.statistic;
  for (std::size_t n : config.n_grid) {
    summary.per_n.push_back(summarize(collect_replications(config, n), config.statistic));
  }
  const auto& last = summary.per_n.back();
  const double ratio = is_q_statistic(config.statistic) ? last.lindeberg.f : last.lindeberg.plain;
  if (!(ratio < 0.2)) {
    summary.warnings.push_back("Lindeberg ratio " + std::to_string(ratio) + " at n = " +
                               std::to_string(last.n) +
                               " is not below 0.2; the normal limit may not apply");
  }
  return summary;
}

std::vector<IdentityCheck> run_variance_identity_check(const MCStudyConfig& config) {
  config.validate();
  std::vector<IdentityCheck> out;
  for (std::size_t n : config.n_grid) {
    IdentityCheck check;
    check.n = n;
    const std::vector<double> w = study_weights(config, n);
    const std::vector<double> ones(w.size(), 1.0 / kTwoPi);
    const WeightConstants c = weight_constants(w, ones, config.innovation, n);
    check.expected_mean = c.sum_b;
    check.expected_variance = c.q_n_sq;
    check.values.resize(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t rep) {
      const auto z = sample_innovations(config.innovation, n,
                                        StreamKey{config.master_seed, rep, StreamRole::kInnovations});
      check.values[rep] = s_n_zeta(z, w);
    });
    check.moments = describe(check.values);
    check.mean_ok = std::abs(check.moments.mean - check.expected_mean) <= 3.0 * check.moments.se_mean;
    check.variance_ok =
        std::abs(check.moments.variance - check.expected_variance) <= 3.0 * check.moments.se_variance;
    out.push_back(std::move(check));
  }
  return out;
}

BoundStudy run_bartlett_bound_study(const MCStudyConfig& config) {
  config.validate();
  std::vector<std::size_t> grid = config.n_grid;
  std::sort(grid.begin(), grid.end());
  if (grid.size() < 3 || grid.back() < 10 * grid.front()) {
    throw DomainError("bound study needs >= 3 sizes spanning at least a decade");
  }
  BoundStudy study;
  for (std::size_t n : grid) {
    const ReplicationSet set = collect_replications(config, n);
    BoundRow row;
    row.n = n;
    row.residuals.reserve(set.records.size());
    std::vector<double> squares;
    for (const auto& rec : set.records) {
      row.residuals.push_back(rec.R_n);
      squares.push_back(rec.R_n * rec.R_n);
    }
    const MomentSummary m = describe(row.residuals);
    const MomentSummary sq = describe(squares);
    row.residual_msq = sq.mean;
    row.residual_msq_se = sq.se_mean;
    row.residual_var = m.variance;
    row.residual_var_se = m.se_variance;
    row.bias_abs = std::abs(m.mean);
    row.bias_se = m.se_mean;
    const double log_n = std::log(static_cast<double>(n));
    const WeightConstants& c = set.constants;
    row.B_n_sq = c.B_n * c.B_n;
    row.bound_bn2log3 = c.b_n * c.b_n * log_n * log_n * log_n;
    row.bound_bnBn = c.b_n * c.B_n;
    row.bound_bnlog2 = c.b_n * log_n * log_n;
    study.rows.push_back(std::move(row));
  }
  const BoundRow& base = study.rows.front();
  study.c_bn2log3 = base.residual_var / base.bound_bn2log3;
  study.c_bnBn = base.residual_var / base.bound_bnBn;
  study.c_bnlog2 = base.bias_abs / base.bound_bnlog2;
  study.msq_ratio_nonincreasing = true;
  study.var_within_bnBn = true;
  study.var_within_bn2log3 = true;
  study.bias_within_bnlog2 = true;
  for (std::size_t i = 1; i < study.rows.size(); ++i) {
    const BoundRow& prev = study.rows[i - 1];
    const BoundRow& cur = study.rows[i];
    const double r_prev = prev.residual_msq / prev.B_n_sq;
    const double r_cur = cur.residual_msq / cur.B_n_sq;
    const double se = std::hypot(prev.residual_msq_se / prev.B_n_sq, cur.residual_msq_se / cur.B_n_sq);
    if (r_cur > r_prev + 2.0 * se) study.msq_ratio_nonincreasing = false;
    if (cur.residual_var > study.c_bnBn * cur.bound_bnBn + 2.0 * cur.residual_var_se) {
      study.var_within_bnBn = false;
    }
    if (cur.residual_var > study.c_bn2log3 * cur.bound_bn2log3 + 2.0 * cur.residual_var_se) {
      study.var_within_bn2log3 = false;
    }
    if (cur.bias_abs > study.c_bnlog2 * cur.bound_bnlog2 + 2.0 * cur.bias_se) {
      study.bias_within_bnlog2 = false;
    }
  }
  return study;
}

CounterexampleSummary run_counterexample_study(std::size_t n, double d, std::size_t replications,
                                               std::uint64_t seed, unsigned threads) {
  if (!(d > 0.25 && d < 0.5)) throw DomainError("counterexample needs 1/4 < d < 1/2");
  MCStudyConfig config;
  config.model.kind = ModelKind::kArfima;
  config.model.d = d;
  config.innovation = InnovationSpec::gaussian();
  config.scheme = WeightScheme::counterexample(d);
  config.n_grid = {n};
  config.replications = replications;
  config.master_seed = seed;
  config.statistic = Statistic::kStdS;
  config.threads = threads;
  CounterexampleSummary out;
  out.study = run_clt_study(config);
  out.lindeberg_ratio = out.study.per_n.back().lindeberg.plain;
  out.lindeberg_ratio_sq = out.lindeberg_ratio * out.lindeberg_ratio;
  out.clt_rejected = out.study.ks_pvalue() < 0.01;
  return out;
}

std::size_t IndexRule::at(std::size_t n) const {
  const long long j = static_cast<long long>(std::floor(fraction * static_cast<double>(n))) + offset;
  if (j < 1) throw DomainError("index rule yields j < 1");
  return static_cast<std::size_t>(j);
}

Prop2Study run_prop2_decay_study(const ModelSpec& model_spec, const std::vector<std::size_t>& n_grid,
                                 IndexRule j_rule, IndexRule k_rule) {
  Prop2Study study;
  for (std::size_t n : n_grid) {
    const LinearProcessModel model = model_spec.build(n);
    Prop2Row row;
    row.n = n;
    row.j = j_rule.at(n);
    row.k = k_rule.at(n);
    if (row.j > n / 2 || row.k > n / 2) throw DomainError("index rule exceeds floor(n/2)");
    row.cross_cov = exact_dft_cross_cov(model.coeffs(), model.coeffs(), n, row.j, row.k);
    const double u = kTwoPi * static_cast<double>(row.j) / static_cast<double>(n);
    row.f_j = spectral_density(model, u);
    row.abs_error = row.j == row.k ? std::abs(row.cross_cov.real() - row.f_j) : std::abs(row.cross_cov);
    const double jj = static_cast<double>(row.j);
    row.normalizer = std::pow(u, -2.0 * model.d()) * std::log1p(jj) / jj;
    row.ratio = row.abs_error / row.normalizer;
    study.rows.push_back(row);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& row : study.rows) {
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  if (hi == 0.0) {
    study.max_min_ratio = 1.0;
  } else {
    study.max_min_ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  study.bounded = study.max_min_ratio < 10.0;
  return study;
}

}  // namespace wpsum
