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

#ifndef TCKR_DESKPIPE_EXPERIMENT_HPP_
#define TCKR_DESKPIPE_EXPERIMENT_HPP_

// End-to-end desk run: real clusters -> teacher -> generator fitted on the
// teacher's training set -> synthetic sets per cardinality multiplier ->
// (soft or hard) labels -> students -> accuracy on the real test split, plus
// a membership audit of the teacher and of every student.
//
// Audit layout: the attack pool is the teacher's training set (members)
// followed by a disjoint holdout (non-members). Shadow models are trained
// on 50/10/40 splits of that pool and reused for every audited model.

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tckr/deskpipe/classifier.hpp"
#include "tckr/deskpipe/config.hpp"
#include "tckr/deskpipe/data.hpp"
#include "tckr/deskpipe/generator.hpp"
#include "tckr/deskpipe/shadow.hpp"
#include "tckr/lira.hpp"
#include "tckr/metrics.hpp"
#include "tckr/rng.hpp"
#include "tckr/splits.hpp"

namespace tckr::desk {

// Stream ids under master_seed.
enum SeedStream : std::uint64_t {
  kMeansStream = 1,
  kTrainStream = 2,
  kTestStream = 3,
  kHoldoutStream = 4,
  kTeacherInitStream = 5,
  kSplitStream = 6,
  kShadowInitStream = 7,
  kSynthesisStream = 8,
  kStudentInitStream = 9,
};

struct ClusterData {
  LabeledDataset train;
  LabeledDataset test;
  LabeledDataset shadow_pool;  // disjoint holdout; audited as non-members
};

inline ClusterSpec cluster_spec(const SimConfig& c) {
  return {c.num_classes, c.dim, c.cluster_separation, c.cluster_spread};
}

inline ClusterData make_cluster_data(const SimConfig& config, std::uint64_t seed) {
  validate(config);
  const ClusterSpec spec = cluster_spec(config);
  const Eigen::MatrixXd means = draw_class_means(spec, stream_seed(seed, kMeansStream));
  return {draw_clusters(spec, means, config.per_class_train, stream_seed(seed, kTrainStream)),
          draw_clusters(spec, means, config.per_class_test, stream_seed(seed, kTestStream)),
          draw_clusters(spec, means, config.holdout_per_class(),
                        stream_seed(seed, kHoldoutStream))};
}

inline TrainConfig train_config(const SimConfig& c, std::uint64_t seed) {
  TrainConfig t;
  t.epochs = c.epochs;
  t.learning_rate = c.learning_rate;
  t.batch_size = c.batch_size;
  t.hidden_units = c.hidden_units;
  t.init_scale = c.init_scale;
  t.seed = seed;
  return t;
}

struct AuditOutcome {
  double auc = 0.5;
  Variant variant = Variant::kOnline;
  VarianceMode variance_mode = VarianceMode::kPerExample;
};

struct StudentResult {
  double multiplier = 1.0;
  long synthetic_size = 0;
  TradeoffReport metrics;  // metrics.accuracy is the CAS
  AuditOutcome audit;
};

struct ExperimentReport {
  SimConfig config;
  TradeoffReport teacher;
  AuditOutcome teacher_audit;
  std::vector<StudentResult> students;  // config.multipliers order

  // The student with the highest CAS (first on ties), which is the one
  // compared against the teacher.
  const StudentResult& best_student() const {
    std::size_t best = 0;
    for (std::size_t k = 1; k < students.size(); ++k) {
      if (students[k].metrics.accuracy > students[best].metrics.accuracy) best = k;
    }
    return students.at(best);
  }

  const StudentResult& at(double multiplier) const {
    for (const auto& s : students) {
      if (s.multiplier == multiplier) return s;
    }
    throw ValidationError("no student for multiplier " + std::to_string(multiplier));
  }
};

// Target rows for a model: its true-class confidence on each pool example,
// with the first `members` examples marked as members.
inline TargetObservations observe(const ClassifierModel& model,
                                  const LabeledDataset& pool, std::size_t members) {
  const std::vector<double> conf = true_class_confidence(model, pool);
  TargetObservations rows(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    rows[i] = {static_cast<long>(i), pool.labels[i], conf[i], i < members};
  }
  return rows;
}

inline AuditOutcome audit(const ShadowMatrix& shadows, const TargetObservations& target,
                          const SimConfig& config, unsigned threads) {
  if (config.attack_selection == AttackSelection::kBest) {
    const SweepReport sweep = sweep_variants(shadows, target, config.attack, threads);
    const SweepEntry& best = sweep.entries[sweep.best];
    return {best.auc, best.variant, best.variance_mode};
  }
  const MembershipScores scores = run_attack(shadows, target, config.attack, threads);
  const auto values = scores.scores();
  return {roc_auc(values, scores.labels()).auc, config.attack.variant,
          config.attack.variance_mode};
}

// Intermediate products of a run that can be exported as an audit bundle.
struct ExperimentArtifacts {
  ShadowMatrix shadows;
  TargetObservations teacher_target;
};

inline ExperimentReport run_tckr_experiment(const SimConfig& config,
                                            unsigned threads = 1,
                                            ExperimentArtifacts* artifacts = nullptr) {
  validate(config);
  const std::uint64_t seed = config.master_seed;
  const ClusterData data = make_cluster_data(config, seed);
  const int classes = config.num_classes;

  ExperimentReport report;
  report.config = config;

  const ClassifierModel teacher =
      train_classifier(data.train, train_config(config, stream_seed(seed, kTeacherInitStream)));
  const double teacher_accuracy =
      accuracy(predict(teacher, data.test.points), data.test.labels);

  const GeneratorModel generator = fit_generator(data.train);
  const std::vector<long> base(static_cast<std::size_t>(classes), config.per_class_train);

  const LabeledDataset pool = concat(data.train, data.shadow_pool);
  SplitConfig split;
  split.num_models = config.num_shadow_models;
  split.seed = stream_seed(seed, kSplitStream);
  const std::vector<SplitPlan> plans = plan_splits(pool.size(), split, threads);
  const ShadowMatrix shadows = train_shadow_models(
      pool, plans, train_config(config, stream_seed(seed, kShadowInitStream)), threads);

  TargetObservations teacher_target = observe(teacher, pool, data.train.size());
  report.teacher_audit = audit(shadows, teacher_target, config, threads);
  report.teacher = make_tradeoff(teacher_accuracy, report.teacher_audit.auc);

  for (double multiplier : config.multipliers) {
    const LabeledDataset synthetic =
        sample_synthetic(generator, multiplier, base, stream_seed(seed, kSynthesisStream));
    const TrainConfig student_config = train_config(
        config, stream_seed(stream_seed(seed, kStudentInitStream),
                            std::bit_cast<std::uint64_t>(multiplier)));
    const ClassifierModel student =
        config.label_mode == LabelMode::kSoft
            ? train_classifier(synthetic, gkd_soft_labels(teacher, synthetic), student_config)
            : train_classifier(synthetic, student_config);
    StudentResult r;
    r.multiplier = multiplier;
    r.synthetic_size = static_cast<long>(synthetic.size());
    const double cas = accuracy(predict(student, data.test.points), data.test.labels);
    r.audit = audit(shadows, observe(student, pool, data.train.size()), config, threads);
    r.metrics = make_tradeoff(cas, r.audit.auc);
    report.students.push_back(r);
  }
  if (artifacts != nullptr) {
    artifacts->shadows = shadows;
    artifacts->teacher_target = std::move(teacher_target);
  }
  return report;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_EXPERIMENT_HPP_
