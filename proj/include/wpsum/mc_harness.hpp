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

#ifndef WPSUM_MC_HARNESS_HPP_
#define WPSUM_MC_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wpsum/normality.hpp"
#include "wpsum/process_models.hpp"
#include "wpsum/quad_forms.hpp"

namespace wpsum {

enum class Statistic {
  kStdS,      // (S_nX - sum b) / q_n
  kStdQ,      // (Q_nX - sum b f) / v_n
  kResidual,  // R_n
  kBiasS,     // S_nX - sum b
  kBiasQ,     // Q_nX - sum b f
};

std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& name);

struct MCStudyConfig {
  ModelSpec model;
  InnovationSpec innovation;
  WeightScheme scheme;
  std::vector<std::size_t> n_grid{1024};
  std::size_t replications = 1000;
  std::uint64_t master_seed = 1;
  Statistic statistic = Statistic::kStdS;
  bool include_nyquist = false;
  std::optional<double> theta_band;
  // Worker threads; 0 picks the hardware concurrency. Never affects results.
  unsigned threads = 0;

  // Throws DomainError unless R >= 100 and every n >= 64.
  void validate() const;
};

// Raw statistics of one replication.
struct ReplicationRecord {
  std::size_t rep = 0;
  double S_nX = 0.0;
  double S_nZeta = 0.0;
  double R_n = 0.0;
  double Q_nX = 0.0;
  double Q_nZeta = 0.0;
};

struct ReplicationSet {
  std::size_t n = 0;
  std::vector<double> weights;
  std::vector<double> f_vals;
  WeightConstants constants;
  std::vector<ReplicationRecord> records;  // ordered by rep
};

// Runs fn(i) for i in [0, count) on `threads` workers. The first exception
// thrown by any task is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Weights for n after the Nyquist and band-limit options are applied.
std::vector<double> study_weights(const MCStudyConfig& config, std::size_t n);

// Simulates config.replications paths of length n; replication r uses the
// stream (master_seed, r, innovations).
ReplicationSet collect_replications(const MCStudyConfig& config, std::size_t n);

double statistic_value(const ReplicationRecord& rec, const WeightConstants& c, Statistic s);

struct PerNSummary {
  std::size_t n = 0;
  MomentSummary moments;
  NormalityResult normality;
  double var_ratio = 0.0;     // Var(S) / q_n^2, or Var(Q) / v_n^2 for Q statistics
  double residual_msq = 0.0;  // mean R_n^2
  LindebergRatios lindeberg;
  WeightConstants constants;
  std::vector<double> values;  // per-replication statistic, by rep
};

struct MCStudySummary {
  Statistic statistic = Statistic::kStdS;
  std::vector<PerNSummary> per_n;
  std::vector<std::string> warnings;

  // Shortcuts to the largest n.
  double ks_stat() const { return per_n.back().normality.ks_stat; }
  double ks_pvalue() const { return per_n.back().normality.ks_pvalue; }
  double var_ratio() const { return per_n.back().var_ratio; }
  double residual_msq() const { return per_n.back().residual_msq; }
};

PerNSummary summarize(const ReplicationSet& set, Statistic statistic);

/// Simulates each n of the grid and summarizes the chosen statistic. Adds a
/// warning (does not fail) when the relevant Lindeberg ratio at the largest
/// n is 0.2 or more.
MCStudySummary run_clt_study(const MCStudyConfig& config);

struct IdentityCheck {
  std::size_t n = 0;
  double expected_mean = 0.0;      // sum b
  double expected_variance = 0.0;  // q_n^2
  MomentSummary moments;           // of S_{n,z}
  bool mean_ok = false;            // within 3 SE
  bool variance_ok = false;        // within 3 SE
  std::vector<double> values;
};

// Exact finite-n moments of S_{n,z}: E = sum b, Var = q_n^2. Only the
// innovations are simulated.
std::vector<IdentityCheck> run_variance_identity_check(const MCStudyConfig& config);

struct BoundRow {
  std::size_t n = 0;
  double residual_msq = 0.0;   // mean R_n^2
  double residual_msq_se = 0.0;
  double residual_var = 0.0;   // Var R_n
  double residual_var_se = 0.0;
  double bias_abs = 0.0;       // |mean R_n|
  double bias_se = 0.0;
  double B_n_sq = 0.0;
  double bound_bn2log3 = 0.0;  // b_n^2 log^3 n
  double bound_bnBn = 0.0;     // b_n B_n
  double bound_bnlog2 = 0.0;   // b_n log^2 n
  std::vector<double> residuals;
};

struct BoundStudy {
  std::vector<BoundRow> rows;
  // Constants fitted at the smallest n.
  double c_bn2log3 = 0.0;
  double c_bnBn = 0.0;
  double c_bnlog2 = 0.0;
  bool msq_ratio_nonincreasing = false;  // residual_msq / B_n^2, within 2 SE
  bool var_within_bnBn = false;          // Var R_n <= C b_n B_n (+2 SE)
  bool var_within_bn2log3 = false;
  bool bias_within_bnlog2 = false;       // |E R_n| <= C b_n log^2 n (+2 SE)
};

// Requires at least three sizes spanning a decade.
BoundStudy run_bartlett_bound_study(const MCStudyConfig& config);

struct CounterexampleSummary {
  MCStudySummary study;
  double lindeberg_ratio = 0.0;
  double lindeberg_ratio_sq = 0.0;
  bool clt_rejected = false;  // KS p-value < 0.01
};

/// Gaussian ARFIMA(0, d, 0) with b_{n,j} = 4 pi (2 pi j)^{-2d}. Throws
/// DomainError unless 1/4 < d < 1/2.
CounterexampleSummary run_counterexample_study(std::size_t n, double d, std::size_t replications,
                                               std::uint64_t seed, unsigned threads = 0);

// j = floor(fraction * n) + offset.
struct IndexRule {
  double fraction = 0.125;
  long offset = 0;
  std::size_t at(std::size_t n) const;
};

struct Prop2Row {
  std::size_t n = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  std::complex<double> cross_cov;
  double f_j = 0.0;
  double abs_error = 0.0;   // |E|w_j|^2 - f_j| on the diagonal, |E w_j conj w_k| off it
  double normalizer = 0.0;  // u_j^{-2d} j^{-1} log(1 + j)
  double ratio = 0.0;
};

struct Prop2Study {
  std::vector<Prop2Row> rows;
  double max_min_ratio = 0.0;
  bool bounded = false;  // max/min < 10
};

Prop2Study run_prop2_decay_study(const ModelSpec& model, const std::vector<std::size_t>& n_grid,
                                 IndexRule j_rule, IndexRule k_rule);

}  // namespace wpsum

#endif  // WPSUM_MC_HARNESS_HPP_
