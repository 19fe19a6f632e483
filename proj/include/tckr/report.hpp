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

#ifndef TCKR_REPORT_HPP_
#define TCKR_REPORT_HPP_

// JSON and CSV renderings of attack and experiment results. Reports contain
// no timestamps, paths or thread counts, so identical inputs always render
// to identical bytes.

#include <array>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"
#include "tckr/csv.hpp"
#include "tckr/deskpipe/experiment.hpp"
#include "tckr/lira.hpp"
#include "tckr/metrics.hpp"

namespace tckr {

using Json = nlohmann::ordered_json;

inline constexpr std::array<double, 3> kReportedFprs{0.001, 0.01, 0.1};

inline Json roc_json(const RocCurve& roc) {
  Json j;
  j["auc"] = roc.auc;
  Json tpr = Json::object();
  for (double f : kReportedFprs) tpr[csv::format_double(f)] = tpr_at_fpr(roc, f);
  j["tpr_at"] = tpr;
  Json points = Json::array();
  for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
    points.push_back(Json::array({roc.fpr[i], roc.tpr[i]}));
  }
  j["roc"] = points;
  return j;
}

inline Json diagnostics_json(const AttackDiagnostics& d, std::size_t targets) {
  Json j;
  j["variant"] = to_string(d.variant);
  j["variance_mode"] = to_string(d.variance_mode);
  j["num_targets"] = targets;
  j["in_counts"] = Json{{"min", d.min_in}, {"mean", d.mean_in}, {"max", d.max_in}};
  j["out_counts"] = Json{{"min", d.min_out}, {"mean", d.mean_out}, {"max", d.max_out}};
  j["warnings"] = d.warnings;
  return j;
}

inline Json sweep_json(const SweepReport& sweep) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < sweep.entries.size(); ++k) {
    const auto& e = sweep.entries[k];
    rows.push_back(Json{{"variant", to_string(e.variant)},
                        {"variance_mode", to_string(e.variance_mode)},
                        {"auc", e.auc},
                        {"selected", k == sweep.best}});
  }
  return rows;
}

// report.json of an audit: {auc, tpr_at, roc, accuracy, aop, attack[, sweep]}.
// accuracy and aop are null unless the audited model's accuracy is known.
inline Json audit_report_json(const MembershipScores& scores, const RocCurve& roc,
                              std::optional<double> model_accuracy,
                              const SweepReport* sweep = nullptr) {
  Json j = roc_json(roc);
  if (model_accuracy) {
    j["accuracy"] = *model_accuracy;
    j["aop"] = aop(*model_accuracy, roc.auc);
  } else {
    j["accuracy"] = nullptr;
    j["aop"] = nullptr;
  }
  j["attack"] = diagnostics_json(scores.diagnostics, scores.rows.size());
  if (sweep != nullptr) j["sweep"] = sweep_json(*sweep);
  return j;
}

inline void write_scores_csv(const MembershipScores& scores, std::ostream& out) {
  out << "example_id,score,is_member\n";
  for (const auto& r : scores.rows) {
    out << r.example_id << ',' << csv::format_double(r.score) << ','
        << (r.is_member ? 1 : 0) << '\n';
  }
}

namespace report_internal {

inline Json tradeoff_json(const TradeoffReport& t, const desk::AuditOutcome& a) {
  return Json{{"accuracy", t.accuracy},
              {"auc_mia", t.auc_mia},
              {"aop", t.aop},
              {"attack",
               Json{{"variant", to_string(a.variant)},
                    {"variance_mode", to_string(a.variance_mode)}}}};
}

}  // namespace report_internal

inline Json experiment_report_json(const desk::ExperimentReport& r) {
  Json j;
  j["config"] = desk::to_json(r.config);
  j["teacher"] = report_internal::tradeoff_json(r.teacher, r.teacher_audit);
  Json students = Json::array();
  for (const auto& s : r.students) {
    Json row;
    row["multiplier"] = s.multiplier;
    row["synthetic_size"] = s.synthetic_size;
    row["cas"] = s.metrics.accuracy;
    row["auc_mia"] = s.metrics.auc_mia;
    row["aop"] = s.metrics.aop;
    row["attack"] = Json{{"variant", to_string(s.audit.variant)},
                         {"variance_mode", to_string(s.audit.variance_mode)}};
    students.push_back(row);
  }
  j["students"] = students;
  const auto& best = r.best_student();
  j["best_student"] = Json{{"multiplier", best.multiplier},
                           {"delta_accuracy", best.metrics.accuracy - r.teacher.accuracy},
                           {"delta_auc_mia", best.metrics.auc_mia - r.teacher.auc_mia},
                           {"delta_aop", best.metrics.aop - r.teacher.aop}};
  return j;
}

// "multiplier,cas,auc_mia,aop", one row per multiplier.
inline void write_experiment_csv(const desk::ExperimentReport& r, std::ostream& out) {
  out << "multiplier,cas,auc_mia,aop\n";
  for (const auto& s : r.students) {
    out << csv::format_double(s.multiplier) << ',' << csv::format_double(s.metrics.accuracy)
        << ',' << csv::format_double(s.metrics.auc_mia) << ','
        << csv::format_double(s.metrics.aop) << '\n';
  }
}

}  // namespace tckr

#endif  // TCKR_REPORT_HPP_
