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
#include <filesystem>
#include <fstream>
#include <ostream>

#include "wpsum/cli.hpp"
#include "wpsum/csv.hpp"
#include "wpsum/errors.hpp"
#include "wpsum/spectral_core.hpp"
#include "wpsum/whittle.hpp"

namespace wpsum {
namespace {

using nlohmann::json;
using csv::format_double;

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  return os;
}

std::string join_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_json(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

// NaN and infinities become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const MomentSummary& m) {
  return {{"mean", number(m.mean)},
          {"variance", number(m.variance)},
          {"skewness", number(m.skewness)},
          {"excess_kurtosis", number(m.excess_kurtosis)},
          {"se_mean", number(m.se_mean)},
          {"se_variance", number(m.se_variance)},
          {"count", m.count}};
}

json to_json(const PerNSummary& s) {
  return {{"n", s.n},
          {"moments", to_json(s.moments)},
          {"ks_stat", number(s.normality.ks_stat)},
          {"ks_pvalue", number(s.normality.ks_pvalue)},
          {"var_ratio", number(s.var_ratio)},
          {"residual_msq", number(s.residual_msq)},
          {"lindeberg_ratio", number(s.lindeberg.plain)},
          {"lindeberg_ratio_f", number(s.lindeberg.f)},
          {"constants", to_json(s.constants)}};
}

json study_json(const MCStudySummary& study) {
  json per_n = json::array();
  for (const auto& s : study.per_n) per_n.push_back(to_json(s));
  return {{"statistic", to_string(study.statistic)},
          {"per_n", per_n},
          {"warnings", study.warnings},
          {"clt_rejected", study.ks_pvalue() < 0.01}};
}

std::vector<double> simulated_or_input(const ExperimentConfig& c, std::vector<double>* innovations) {
  if (!c.input.empty()) return csv::read_column(c.input);
  const auto path = simulate(c.model_spec().build(c.n), InnovationSpec::of(c.innovation), c.n, c.seed);
  if (innovations) {
    const auto z = path.in_sample_innovations();
    innovations->assign(z.begin(), z.end());
  }
  return path.values;
}

RunResult run_simulate(const ExperimentConfig& c) {
  const auto model = c.model_spec().build(c.n);
  const auto path = simulate(model, InnovationSpec::of(c.innovation), c.n, c.seed);
  csv::write_column(join_path(c.out, "series.csv"), "x", path.values);
  const auto z = path.in_sample_innovations();
  csv::write_column(join_path(c.out, "innovations.csv"), "z", std::vector<double>(z.begin(), z.end()));
  const auto m = describe(path.values);
  json results{{"n", c.n}, {"model_id", path.model_id}, {"mean", m.mean}, {"variance", m.variance}};
  return {results, "simulate: n=" + std::to_string(c.n) + " " + path.model_id +
                       " sample variance " + format_double(m.variance)};
}

RunResult run_qform(const ExperimentConfig& c) {
  std::vector<double> innovations;
  const auto series = simulated_or_input(c, &innovations);
  const std::size_t n = series.size();
  if (n < 8) throw DomainError("qform needs at least 8 observations");
  const std::size_t limit = summation_limit(n, c.include_nyquist);
  auto weights = generate_weights(c.weight_scheme(n), n, c.include_nyquist);
  if (c.theta_band) apply_band_limit(weights, n, *c.theta_band);
  const auto f_vals = spectral_values(c.model_spec().build(n), n, limit);
  const auto innovation = InnovationSpec::of(c.innovation);
  const auto pgram = periodogram(series);
  write_periodogram_csv(join_path(c.out, "periodogram.csv"), pgram);

  json results;
  double standardized = 0.0;
  if (!innovations.empty()) {
    const auto report = quad_form_report(series, innovations, f_vals, weights, innovation);
    results = to_json(report);
    results["standardized_S"] = number(report.standardized_S);
    results["standardized_Q"] = number(report.standardized_Q);
    standardized = report.standardized_S;
  } else {
    const auto constants = weight_constants(weights, f_vals, innovation, n);
    const double s = s_n_x(pgram, f_vals, weights);
    const double q = q_n_x(pgram, weights);
    standardized = (s - constants.sum_b) / std::sqrt(constants.q_n_sq);
    results = {{"S_nX", s},
               {"Q_nX", q},
               {"constants", to_json(constants)},
               {"standardized_S", number(standardized)},
               {"standardized_Q", number((q - constants.sum_bf) / std::sqrt(constants.v_n_sq))}};
  }
  results["n"] = n;
  return {results, "qform: n=" + std::to_string(n) + " S_nX=" + format_double(results["S_nX"].get<double>()) +
                       " standardized " + format_double(standardized)};
}

RunResult run_mc(const ExperimentConfig& c, unsigned threads) {
  const auto study = run_clt_study(c.study_config(threads));
  write_detail_csv(join_path(c.out, "detail.csv"), study);
  write_qq_csv(join_path(c.out, "qq.csv"), study.per_n.back().values);
  const auto results = study_json(study);
  return {results, "mc: " + to_string(study.statistic) + " n=" + std::to_string(study.per_n.back().n) +
                       " KS p=" + format_double(study.ks_pvalue()) +
                       " var ratio " + format_double(study.var_ratio()) +
                       (results["clt_rejected"].get<bool>() ? " (normality rejected)" : "")};
}

RunResult run_bounds(const ExperimentConfig& c, unsigned threads) {
  const auto study = run_bartlett_bound_study(c.study_config(threads));
  write_bounds_csv(join_path(c.out, "bounds.csv"), study);
  write_bounds_long_csv(join_path(c.out, "bounds_long.csv"), study);
  {
    auto os = open_out(join_path(c.out, "detail.csv"));
    os << "rep_index,n,statistic\n";
    for (const auto& row : study.rows) {
      for (std::size_t r = 0; r < row.residuals.size(); ++r) {
        os << r << ',' << row.n << ',' << format_double(row.residuals[r]) << '\n';
      }
    }
  }
  json rows = json::array();
  for (const auto& row : study.rows) {
    rows.push_back({{"n", row.n},
                    {"residual_msq", row.residual_msq},
                    {"residual_msq_se", row.residual_msq_se},
                    {"residual_var", row.residual_var},
                    {"bias_abs", row.bias_abs},
                    {"B_n_sq", row.B_n_sq},
                    {"bound_bn2log3", row.bound_bn2log3},
                    {"bound_bnBn", row.bound_bnBn},
                    {"bound_bnlog2", row.bound_bnlog2}});
  }
  json results{{"rows", rows},
               {"c_bn2log3", study.c_bn2log3},
               {"c_bnBn", study.c_bnBn},
               {"c_bnlog2", study.c_bnlog2},
               {"msq_ratio_nonincreasing", study.msq_ratio_nonincreasing},
               {"var_within_bnBn", study.var_within_bnBn},
               {"var_within_bn2log3", study.var_within_bn2log3},
               {"bias_within_bnlog2", study.bias_within_bnlog2}};
  const bool ok = study.msq_ratio_nonincreasing && study.var_within_bnBn && study.bias_within_bnlog2;
  return {results, std::string("bounds: ") + std::to_string(study.rows.size()) + " sizes, bounds " +
                       (ok ? "respected" : "violated")};
}

RunResult run_counterexample(const ExperimentConfig& c, unsigned threads) {
  const auto cx = run_counterexample_study(c.n, c.counterexample_d, c.replications, c.seed, threads);
  write_detail_csv(join_path(c.out, "detail.csv"), cx.study);
  write_qq_csv(join_path(c.out, "qq.csv"), cx.study.per_n.back().values);
  auto results = study_json(cx.study);
  results["lindeberg_ratio"] = cx.lindeberg_ratio;
  results["lindeberg_ratio_sq"] = cx.lindeberg_ratio_sq;
  results["clt_rejected"] = cx.clt_rejected;
  return {results, "counterexample: d=" + format_double(c.counterexample_d) + " n=" + std::to_string(c.n) +
                       " KS p=" + format_double(cx.study.ks_pvalue()) +
                       (cx.clt_rejected ? " (normality rejected)" : " (normality not rejected)")};
}

RunResult run_whittle(const ExperimentConfig& c) {
  const auto series = simulated_or_input(c, nullptr);
  const std::size_t m = c.whittle_m ? c.whittle_m : default_whittle_bandwidth(series.size());
  const auto est = estimate_d(series, m);
  {
    auto os = open_out(join_path(c.out, "objective.csv"));
    os << "d,objective\n";
    for (const auto& [d, r] : est.objective_curve) os << format_double(d) << ',' << format_double(r) << '\n';
  }
  json results{{"n", series.size()}, {"m", est.m}, {"d_hat", est.d_hat}, {"std_error", est.std_error}};
  return {results, "whittle: d_hat=" + format_double(est.d_hat) + " m=" + std::to_string(est.m) +
                       " se=" + format_double(est.std_error)};
}

RunResult run_prop2(const ExperimentConfig& c) {
  const auto study = run_prop2_decay_study(c.model_spec(), c.sizes(),
                                           IndexRule{c.prop2_j_fraction, c.prop2_j_offset},
                                           IndexRule{c.prop2_k_fraction, c.prop2_k_offset});
  json rows = json::array();
  {
    auto os = open_out(join_path(c.out, "prop2.csv"));
    os << "n,j,k,cross_cov_re,cross_cov_im,f_j,abs_error,normalizer,ratio\n";
    for (const auto& r : study.rows) {
      os << r.n << ',' << r.j << ',' << r.k << ',' << format_double(r.cross_cov.real()) << ','
         << format_double(r.cross_cov.imag()) << ',' << format_double(r.f_j) << ','
         << format_double(r.abs_error) << ',' << format_double(r.normalizer) << ','
         << format_double(r.ratio) << '\n';
      rows.push_back({{"n", r.n}, {"j", r.j}, {"k", r.k}, {"abs_error", r.abs_error}, {"ratio", r.ratio}});
    }
  }
  json results{{"rows", rows}, {"max_min_ratio", study.max_min_ratio}, {"bounded", study.bounded}};
  return {results, "prop2: max/min ratio " + format_double(study.max_min_ratio) +
                       (study.bounded ? " (bounded)" : " (not bounded)")};
}

}  // namespace

void write_detail_csv(const std::string& path, const MCStudySummary& study) {
  auto os = open_out(path);
  os << "rep_index,n,statistic\n";
  for (const auto& s : study.per_n) {
    for (std::size_t r = 0; r < s.values.size(); ++r) {
      os << r << ',' << s.n << ',' << format_double(s.values[r]) << '\n';
    }
  }
}

void write_qq_csv(const std::string& path, const std::vector<double>& values) {
  auto os = open_out(path);
  os << "theoretical_quantile,empirical_quantile\n";
  for (const auto& [t, e] : qq_points(values)) os << format_double(t) << ',' << format_double(e) << '\n';
}

void write_bounds_csv(const std::string& path, const BoundStudy& study) {
  auto os = open_out(path);
  os << "n,residual_msq,bound_bn2log3,bound_bnBn,bias_abs,bound_bnlog2\n";
  for (const auto& r : study.rows) {
    os << r.n << ',' << format_double(r.residual_msq) << ',' << format_double(r.bound_bn2log3) << ','
       << format_double(r.bound_bnBn) << ',' << format_double(r.bias_abs) << ','
       << format_double(r.bound_bnlog2) << '\n';
  }
}

void write_bounds_long_csv(const std::string& path, const BoundStudy& study) {
  auto os = open_out(path);
  os << "n,quantity,value\n";
  for (const auto& r : study.rows) {
    const std::pair<const char*, double> items[] = {
        {"residual_msq", r.residual_msq},
        {"residual_var", r.residual_var},
        {"bias_abs", r.bias_abs},
        {"bound_bn2log3", study.c_bn2log3 * r.bound_bn2log3},
        {"bound_bnBn", study.c_bnBn * r.bound_bnBn},
        {"bound_bnlog2", study.c_bnlog2 * r.bound_bnlog2}};
    for (const auto& [name, value] : items) os << r.n << ',' << name << ',' << format_double(value) << '\n';
  }
}

RunResult run(const ExperimentConfig& c, const RunOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory " + c.out + ": " + ec.message());

  RunResult result;
  switch (c.command) {
    case Command::kSimulate: result = run_simulate(c); break;
    case Command::kQform: result = run_qform(c); break;
    case Command::kMc: result = run_mc(c, options.threads); break;
    case Command::kBounds: result = run_bounds(c, options.threads); break;
    case Command::kCounterexample: result = run_counterexample(c, options.threads); break;
    case Command::kWhittle: result = run_whittle(c); break;
    case Command::kProp2: result = run_prop2(c); break;
  }
  json summary{{"schema_version", 1},
               {"command", to_string(c.command)},
               {"config", to_json(c)},
               {"results", result.summary}};
  if (result.summary.contains("clt_rejected")) summary["clt_rejected"] = result.summary["clt_rejected"];
  write_json(join_path(c.out, "summary.json"), summary);
  result.summary = std::move(summary);
  return result;
}

int execute(const ExperimentConfig& config, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  try {
    validate(config);
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  }
  try {
    out << run(config, options).line << '\n';
    return 0;
  } catch (const ValidationError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace wpsum
