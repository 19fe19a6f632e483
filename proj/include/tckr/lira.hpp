// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCKR_LIRA_HPP_
#define TCKR_LIRA_HPP_

// Likelihood-ratio membership inference over a shadow matrix.
//
// For every audited example the logit-transformed confidences of the shadow
// models are split by membership bit and summarized as two Gaussians. The
// online score is the log likelihood ratio of the audited model's logit under
// the IN and OUT Gaussians; the offline score is the OUT-distribution CDF of
// that logit (one-sided test). Higher scores are more member-like.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tckr/error.hpp"
#include "tckr/ingest.hpp"
#include "tckr/metrics.hpp"
#include "tckr/parallel.hpp"
#include "tckr/shadow_matrix.hpp"

namespace tckr {

enum class Variant { kOnline, kOffline };
enum class VarianceMode { kGlobal, kPerExample };

inline const char* to_string(Variant v) {
  return v == Variant::kOnline ? "online" : "offline";
}
inline const char* to_string(VarianceMode m) {
  return m == VarianceMode::kGlobal ? "global" : "per_example";
}

struct AttackConfig {
  Variant variant = Variant::kOnline;
  VarianceMode variance_mode = VarianceMode::kPerExample;
  double eps_clamp = 1e-7;
  double var_floor = 1e-8;
  int min_in = 2;
  int min_out = 2;
};

inline void validate(const AttackConfig& c) {
  if (!(c.eps_clamp > 0.0 && c.eps_clamp < 0.5)) {
    throw ValidationError("eps_clamp must lie in (0, 0.5)");
  }
  if (!(c.var_floor > 0.0)) throw ValidationError("var_floor must be > 0");
  const int least = c.variance_mode == VarianceMode::kPerExample ? 2 : 1;
  if (c.min_in < least || c.min_out < least) {
    throw ValidationError("min_in and min_out must be >= " + std::to_string(least) +
                          " in " + to_string(c.variance_mode) + " variance mode");
  }
}

// log(p / (1 - p)) after clamping p to [eps, 1 - eps]. Written as
// log(p) - log(1 - p) so that phi(1 - p) == -phi(p) whenever 1 - p is exact.
inline double logit_transform(double p, double eps_clamp = 1e-7) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("logit_transform: confidence outside [0, 1]");
  }
  const double q = std::clamp(p, eps_clamp, 1.0 - eps_clamp);
  return std::log(q) - std::log(1.0 - q);
}

inline double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// IN and OUT Gaussians of one example. In the offline variant the IN side is
// not estimated: has_in is false and mu_in/var_in are NaN.
struct GaussianPair {
  double mu_in = std::numeric_limits<double>::quiet_NaN();
  double var_in = std::numeric_limits<double>::quiet_NaN();
  double mu_out = std::numeric_limits<double>::quiet_NaN();
  double var_out = std::numeric_limits<double>::quiet_NaN();
  long n_in = 0;
  long n_out = 0;
  bool has_in = false;
};

namespace lira_internal {

struct SideStats {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;  // Bessel-corrected; 0 when n < 2
};

struct ExampleStats {
  SideStats in;
  SideStats out;
};

inline SideStats summarize(const std::vector<double>& xs) {
  SideStats s;
  s.n = static_cast<long>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(xs.size() - 1);
  }
  return s;
}

inline ExampleStats example_stats(const ShadowMatrix& matrix, std::size_t example,
                                  double eps_clamp) {
  std::vector<double> in;
  std::vector<double> out;
  for (std::size_t m = 0; m < matrix.num_models; ++m) {
    const double phi = logit_transform(matrix.confidence(m, example), eps_clamp);
    (matrix.is_member(m, example) ? in : out).push_back(phi);
  }
  return {summarize(in), summarize(out)};
}

inline void check_matrix(const ShadowMatrix& matrix) {
  if (matrix.num_models < 2) {
    throw ValidationError("shadow matrix needs at least 2 models");
  }
  if (matrix.confidences.size() != matrix.num_models * matrix.num_examples ||
      matrix.membership.size() != matrix.confidences.size() ||
      matrix.true_labels.size() != matrix.num_examples) {
    throw ValidationError("shadow matrix shapes disagree");
  }
}

inline bool has_enough(const ExampleStats& s, const AttackConfig& c) {
  const bool in_ok = c.variant == Variant::kOffline || s.in.n >= c.min_in;
  return in_ok && s.out.n >= c.min_out;
}

inline GaussianPair to_pair(const ExampleStats& s, const AttackConfig& c) {
  GaussianPair g;
  g.n_in = s.in.n;
  g.n_out = s.out.n;
  g.mu_out = s.out.mean;
  g.var_out = std::max(s.out.variance, c.var_floor);
  if (c.variant == Variant::kOnline) {
    g.has_in = true;
    g.mu_in = s.in.mean;
    g.var_in = std::max(s.in.variance, c.var_floor);
  }
  return g;
}

}  // namespace lira_internal

// Sample means and floored Bessel-corrected variances of one example's
// shadow logits, split by membership.
inline GaussianPair fit_gaussians(const ShadowMatrix& matrix, std::size_t example,
                                  const AttackConfig& config) {
  lira_internal::check_matrix(matrix);
  if (example >= matrix.num_examples) {
    throw ValidationError("example " + std::to_string(example) + " out of range");
  }
  const auto s = lira_internal::example_stats(matrix, example, config.eps_clamp);
  if (!lira_internal::has_enough(s, config)) {
    throw InsufficientShadowData(
        "insufficient shadow data for example " + std::to_string(example) +
        " (IN " + std::to_string(s.in.n) + ", OUT " + std::to_string(s.out.n) + ")");
  }
  return lira_internal::to_pair(s, config);
}

struct PooledVariance {
  double var_in = std::numeric_limits<double>::quiet_NaN();
  double var_out = std::numeric_limits<double>::quiet_NaN();
};

namespace lira_internal {

inline PooledVariance pool(const std::vector<ExampleStats>& stats,
                           const AttackConfig& config) {
  double in_num = 0.0, in_den = 0.0, out_num = 0.0, out_den = 0.0;
  for (const auto& s : stats) {
    if (s.in.n >= 2) {
      in_num += static_cast<double>(s.in.n) * s.in.variance;
      in_den += static_cast<double>(s.in.n);
    }
    if (s.out.n >= 2) {
      out_num += static_cast<double>(s.out.n) * s.out.variance;
      out_den += static_cast<double>(s.out.n);
    }
  }
  PooledVariance p;
  if (config.variant == Variant::kOnline) {
    if (in_den == 0.0) {
      throw InsufficientShadowData("no example has >= 2 IN observations");
    }
    p.var_in = std::max(in_num / in_den, config.var_floor);
  }
  if (out_den == 0.0) {
    throw InsufficientShadowData("no example has >= 2 OUT observations");
  }
  p.var_out = std::max(out_num / out_den, config.var_floor);
  return p;
}

}  // namespace lira_internal

// Count-weighted mean of the per-example variances, per side, floored. The
// IN side is only estimated for the online variant.
inline PooledVariance pooled_variance(const ShadowMatrix& matrix,
                                      const AttackConfig& config) {
  lira_internal::check_matrix(matrix);
  std::vector<lira_internal::ExampleStats> stats;
  stats.reserve(matrix.num_examples);
  for (std::size_t i = 0; i < matrix.num_examples; ++i) {
    stats.push_back(lira_internal::example_stats(matrix, i, config.eps_clamp));
  }
  return lira_internal::pool(stats, config);
}

// log N(phi; mu_in, var_in) - log N(phi; mu_out, var_out).
inline double score_online(double phi, const GaussianPair& pair) {
  const double din = phi - pair.mu_in;
  const double dout = phi - pair.mu_out;
  return 0.5 * (std::log(pair.var_out) - std::log(pair.var_in)) -
         din * din / (2.0 * pair.var_in) + dout * dout / (2.0 * pair.var_out);
}

// Phi((phi - mu_out) / sigma_out).
inline double score_offline(double phi, const GaussianPair& pair) {
  return standard_normal_cdf((phi - pair.mu_out) / std::sqrt(pair.var_out));
}

struct ScoredExample {
  long example_id = 0;
  double score = 0.0;
  bool is_member = false;

  bool operator==(const ScoredExample&) const = default;
};

struct AttackDiagnostics {
  Variant variant = Variant::kOnline;
  VarianceMode variance_mode = VarianceMode::kPerExample;
  long min_in = 0, max_in = 0, min_out = 0, max_out = 0;
  double mean_in = 0.0, mean_out = 0.0;
  long clamped_targets = 0;
  std::vector<std::string> warnings;

  bool operator==(const AttackDiagnostics&) const = default;
};

struct MembershipScores {
  std::vector<ScoredExample> rows;  // same order as the target observations
  AttackDiagnostics diagnostics;

  std::vector<double> scores() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.score);
    return out;
  }
  std::vector<bool> labels() const {
    std::vector<bool> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.is_member);
    return out;
  }

  bool operator==(const MembershipScores&) const = default;
};

// Scores every target observation. Per-example work is independent, so the
// output is bitwise identical for any thread count.
inline MembershipScores run_attack(const ShadowMatrix& matrix,
                                   const TargetObservations& target,
                                   const AttackConfig& config,
                                   unsigned threads = 1) {
  validate(config);
  lira_internal::check_matrix(matrix);
  for (const auto& row : target) {
    if (row.example_id < 0 ||
        row.example_id >= static_cast<long>(matrix.num_examples)) {
      throw ValidationError("target example " + std::to_string(row.example_id) +
                            " is outside the shadow index space");
    }
  }

  std::vector<lira_internal::ExampleStats> stats(matrix.num_examples);
  parallel_for(matrix.num_examples, threads, [&](std::size_t i) {
    stats[i] = lira_internal::example_stats(matrix, i, config.eps_clamp);
  });

  std::vector<long> offending;
  for (const auto& row : target) {
    if (!lira_internal::has_enough(stats[row.example_id], config)) {
      offending.push_back(row.example_id);
    }
  }
  if (!offending.empty()) {
    std::string msg = "insufficient shadow data for " +
                      std::to_string(offending.size()) + " example(s):";
    for (std::size_t k = 0; k < offending.size() && k < 20; ++k) {
      msg += " " + std::to_string(offending[k]);
    }
    if (offending.size() > 20) msg += " ...";
    throw InsufficientShadowData(msg);
  }

  PooledVariance pooled;
  if (config.variance_mode == VarianceMode::kGlobal) {
    pooled = lira_internal::pool(stats, config);
  }

  MembershipScores result;
  result.rows.resize(target.size());
  parallel_for(target.size(), threads, [&](std::size_t k) {
    const TargetRow& row = target[k];
    GaussianPair pair = lira_internal::to_pair(stats[row.example_id], config);
    if (config.variance_mode == VarianceMode::kGlobal) {
      pair.var_out = pooled.var_out;
      if (pair.has_in) pair.var_in = pooled.var_in;
    }
    const double phi = logit_transform(row.confidence, config.eps_clamp);
    const double score = config.variant == Variant::kOnline
                             ? score_online(phi, pair)
                             : score_offline(phi, pair);
    result.rows[k] = {row.example_id, score, row.is_member};
  });

  AttackDiagnostics& d = result.diagnostics;
  d.variant = config.variant;
  d.variance_mode = config.variance_mode;
  if (!target.empty()) {
    d.min_in = d.min_out = std::numeric_limits<long>::max();
    double sum_in = 0.0, sum_out = 0.0;
    for (const auto& row : target) {
      const auto& s = stats[row.example_id];
      d.min_in = std::min(d.min_in, s.in.n);
      d.max_in = std::max(d.max_in, s.in.n);
      d.min_out = std::min(d.min_out, s.out.n);
      d.max_out = std::max(d.max_out, s.out.n);
      sum_in += static_cast<double>(s.in.n);
      sum_out += static_cast<double>(s.out.n);
      if (row.confidence < config.eps_clamp ||
          row.confidence > 1.0 - config.eps_clamp) {
        ++d.clamped_targets;
      }
    }
    d.mean_in = sum_in / static_cast<double>(target.size());
    d.mean_out = sum_out / static_cast<double>(target.size());
  }
  if (d.clamped_targets > 0) {
    d.warnings.push_back(std::to_string(d.clamped_targets) +
                         " target confidence(s) clamped to [eps, 1 - eps]");
  }
  long floored = 0;
  for (const auto& row : target) {
    const auto& s = stats[row.example_id];
    if (config.variance_mode == VarianceMode::kPerExample &&
        (s.out.variance < config.var_floor ||
         (config.variant == Variant::kOnline && s.in.variance < config.var_floor))) {
      ++floored;
    }
  }
  if (floored > 0) {
    d.warnings.push_back(std::to_string(floored) +
                         " example(s) with variance raised to var_floor");
  }
  return result;
}

inline MembershipScores run_attack(const AuditBundle& bundle,
                                   const AttackConfig& config,
                                   unsigned threads = 1) {
  return run_attack(bundle.matrix, bundle.target, config, threads);
}

struct SweepEntry {
  Variant variant = Variant::kOnline;
  VarianceMode variance_mode = VarianceMode::kPerExample;
  double auc = 0.0;

  bool operator==(const SweepEntry&) const = default;
};

struct SweepReport {
  std::vector<SweepEntry> entries;  // fixed order, see sweep_variants
  std::size_t best = 0;             // argmax AUC, first wins on ties

  bool operator==(const SweepReport&) const = default;
};

// Runs the four (variant, variance mode) combinations in the order
// online/per_example, online/global, offline/per_example, offline/global and
// marks the one with the highest AUC against ground-truth membership.
inline SweepReport sweep_variants(const ShadowMatrix& matrix,
                                  const TargetObservations& target,
                                  const AttackConfig& base, unsigned threads = 1) {
  SweepReport report;
  for (Variant v : {Variant::kOnline, Variant::kOffline}) {
    for (VarianceMode m : {VarianceMode::kPerExample, VarianceMode::kGlobal}) {
      AttackConfig c = base;
      c.variant = v;
      c.variance_mode = m;
      const auto scores = run_attack(matrix, target, c, threads);
      const auto values = scores.scores();
      report.entries.push_back({v, m, roc_auc(values, scores.labels()).auc});
    }
  }
  for (std::size_t k = 1; k < report.entries.size(); ++k) {
    if (report.entries[k].auc > report.entries[report.best].auc) report.best = k;
  }
  return report;
}

inline SweepReport sweep_variants(const AuditBundle& bundle,
                                  const AttackConfig& base, unsigned threads = 1) {
  return sweep_variants(bundle.matrix, bundle.target, base, threads);
}

}  // namespace tckr

#endif  // TCKR_LIRA_HPP_
