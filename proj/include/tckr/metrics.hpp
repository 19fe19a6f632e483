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

#ifndef TCKR_METRICS_HPP_
#define TCKR_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tckr/error.hpp"

namespace tckr {

// ROC of a scoring rule, one point per distinct score. Point 0 is (0, 0)
// with an infinite threshold; the last point is (1, 1).
struct RocCurve {
  std::vector<double> thresholds;  // descending
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
};

// Thresholds are grouped by distinct score, so tied pairs get half credit
// and the AUC equals the Mann-Whitney statistic exactly.
inline RocCurve roc_auc(std::span<const double> scores,
                        const std::vector<bool>& labels) {
  if (scores.empty()) throw ValidationError("roc_auc: empty input");
  if (scores.size() != labels.size()) {
    throw ValidationError("roc_auc: scores and labels differ in length");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw DomainError("roc_auc: NaN score");
  }
  const auto positives = static_cast<std::uint64_t>(
      std::count(labels.begin(), labels.end(), true));
  const std::uint64_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw ValidationError("roc_auc: labels must contain both classes");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  RocCurve roc;
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  // Twice the un-normalized area: sum over groups of neg * (2 * tp_before + pos).
  long double twice_area = 0.0L;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (labels[order[i]]) {
        ++pos;
      } else {
        ++neg;
      }
    }
    twice_area += static_cast<long double>(neg) *
                  static_cast<long double>(2 * tp + pos);
    tp += pos;
    fp += neg;
    roc.thresholds.push_back(s);
    roc.fpr.push_back(static_cast<double>(fp) / static_cast<double>(negatives));
    roc.tpr.push_back(static_cast<double>(tp) / static_cast<double>(positives));
  }
  roc.auc = static_cast<double>(
      twice_area / (2.0L * static_cast<long double>(positives) *
                    static_cast<long double>(negatives)));
  return roc;
}

// TPR at the largest achieved FPR not exceeding the target (step function).
inline double tpr_at_fpr(const RocCurve& curve, double fpr_target) {
  if (!(fpr_target >= 0.0 && fpr_target <= 1.0)) {
    throw DomainError("tpr_at_fpr: target must lie in [0, 1]");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < curve.fpr.size(); ++i) {
    if (curve.fpr[i] <= fpr_target) best = std::max(best, curve.tpr[i]);
  }
  return best;
}

// Fraction of exact matches. When the classifier was trained only on
// synthetic data and evaluated on real data this is the Classification
// Accuracy Score.
inline double accuracy(std::span<const int> predictions,
                       std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw ValidationError("accuracy: length mismatch");
  }
  if (predictions.empty()) throw ValidationError("accuracy: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

// Accuracy Over Privacy: accuracy / (2 * auc)^2. A random-guess attacker
// (auc = 0.5) leaves accuracy unchanged.
inline double aop(double accuracy, double auc_mia) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw DomainError("aop: accuracy must lie in [0, 1]");
  }
  if (!(auc_mia > 0.0 && auc_mia <= 1.0)) {
    throw DomainError("aop: auc_mia must lie in (0, 1]");
  }
  const double d = 2.0 * auc_mia;
  return accuracy / (d * d);
}

struct TradeoffReport {
  double accuracy = 0.0;
  double auc_mia = 0.5;
  double aop = 0.0;

  bool operator==(const TradeoffReport&) const = default;
};

inline TradeoffReport make_tradeoff(double accuracy_value, double auc_mia) {
  return {accuracy_value, auc_mia, aop(accuracy_value, auc_mia)};
}

struct DeltaStats {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

struct DeltaSummary {
  DeltaStats accuracy;
  DeltaStats auc_mia;
  DeltaStats aop;
};

// Student minus teacher per dataset, summarized per metric.
inline DeltaSummary delta_summary(
    const std::map<std::string, TradeoffReport>& teacher,
    const std::map<std::string, TradeoffReport>& student) {
  if (teacher.empty()) throw ValidationError("delta_summary: no datasets");
  if (teacher.size() != student.size()) {
    throw ValidationError("delta_summary: dataset keys differ");
  }
  std::vector<double> acc;
  std::vector<double> auc;
  std::vector<double> tradeoff;
  for (const auto& [name, t] : teacher) {
    const auto it = student.find(name);
    if (it == student.end()) {
      throw ValidationError("delta_summary: no student entry for " + name);
    }
    acc.push_back(it->second.accuracy - t.accuracy);
    auc.push_back(it->second.auc_mia - t.auc_mia);
    tradeoff.push_back(it->second.aop - t.aop);
  }
  auto stats = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double mean =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return DeltaStats{*lo, std::clamp(mean, *lo, *hi), *hi};
  };
  return {stats(acc), stats(auc), stats(tradeoff)};
}

}  // namespace tckr

#endif  // TCKR_METRICS_HPP_
