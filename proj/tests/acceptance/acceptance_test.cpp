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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../oracles.hpp"
#include "tckr/cli.hpp"
#include "tckr/deskpipe/experiment.hpp"
#include "tckr/lira.hpp"
#include "tckr/metrics.hpp"
#include "tckr/rng.hpp"

namespace tckr::acceptance {
namespace {

namespace fs = std::filesystem;
using testing::pair_count_auc;
using testing::sigmoid;
using testing::trapezoid;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path table_path() { return fs::path(TCKR_DATA_DIR) / "teacher_student_table.csv"; }

// Default-config experiment results over seeds 0-9, shared by 6-9.
struct SeedRuns {
  std::vector<desk::ExperimentReport> soft;
  std::vector<desk::ExperimentReport> hard;
};

const SeedRuns& seed_runs() {
  static const SeedRuns runs = [] {
    SeedRuns r;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      desk::SimConfig c;
      c.master_seed = seed;
      r.soft.push_back(desk::run_tckr_experiment(c));
      c.label_mode = desk::LabelMode::kHard;
      c.multipliers = {1.0};
      r.hard.push_back(desk::run_tckr_experiment(c));
    }
    return r;
  }();
  return runs;
}

double mean_cas(const std::vector<desk::ExperimentReport>& runs, double multiplier) {
  double total = 0;
  for (const auto& r : runs) total += r.at(multiplier).metrics.accuracy;
  return total / static_cast<double>(runs.size());
}

Outcome aop_table() {
  const cli::ComparisonTable t = cli::read_comparison_table(table_path());
  int cells = 0;
  int ok = 0;
  double worst = 0;
  for (const auto& name : t.order) {
    for (const auto* side : {&t.teacher, &t.student}) {
      const TradeoffReport& row = side->at(name);
      const double err = std::abs(100.0 * aop(row.accuracy / 100.0, row.auc_mia / 100.0) - row.aop);
      worst = std::max(worst, err);
      ++cells;
      if (err <= 0.01) ++ok;
    }
  }
  std::ostringstream log;
  cli::PaperCheckOptions opt;
  opt.table = table_path();
  const bool command_ok = cli::cmd_paper_check(opt, log) == cli::kOk;
  return {cells == 20 && ok == 20 && command_ok,
          fmt("%d/%d cells within 0.01, max error %.4f", ok, cells, worst)};
}

Outcome delta_rows() {
  const cli::ComparisonTable t = cli::read_comparison_table(table_path());
  const DeltaSummary d = delta_summary(t.teacher, t.student);
  const double expected[3][3] = {
      {-0.53, 0.02, 0.72}, {-8.14, -5.49, -1.08}, {2.48, 9.58, 14.97}};
  const DeltaStats* got[3] = {&d.accuracy, &d.auc_mia, &d.aop};
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    worst = std::max({worst, std::abs(got[k]->min - expected[k][0]),
                      std::abs(got[k]->mean - expected[k][1]),
                      std::abs(got[k]->max - expected[k][2])});
  }
  return {worst <= 0.01,
          fmt("accuracy (%.2f, %.3f, %.2f), auc (%.2f, %.3f, %.2f), aop (%.2f, %.3f, %.2f), "
              "max error %.4f",
              d.accuracy.min, d.accuracy.mean, d.accuracy.max, d.auc_mia.min, d.auc_mia.mean,
              d.auc_mia.max, d.aop.min, d.aop.mean, d.aop.max, worst)};
}

Outcome auc_oracle() {
  Rng rng(2024);
  int ok = 0;
  double worst = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> scores(n);
    std::vector<bool> labels(n);
    const int levels = 1 + static_cast<int>(rng.below(20));
    for (std::size_t i = 0; i < n; ++i) {
      // Alternate between coarse grids (many ties) and continuous values.
      scores[i] = trial % 2 == 0 ? static_cast<double>(rng.below(levels)) : rng.normal();
      labels[i] = rng.bernoulli(0.5);
    }
    labels[0] = true;
    labels[1] = false;
    const RocCurve roc = roc_auc(scores, labels);
    const double oracle = pair_count_auc(scores, labels);
    const double err = std::max(std::abs(roc.auc - oracle),
                                std::abs(trapezoid(roc.fpr, roc.tpr) - oracle));
    worst = std::max(worst, err);
    if (err <= 1e-9) ++ok;
  }
  return {ok == trials, fmt("%d/%d instances, max error %.3g", ok, trials, worst)};
}

AuditBundle two_gaussian_bundle(double member_mean, double nonmember_mean, bool null_target,
                                std::uint64_t seed) {
  const std::size_t models = 64;
  const std::size_t examples = 2000;
  Rng rng(seed);
  AuditBundle b;
  b.manifest.num_classes = 2;
  b.matrix = ShadowMatrix::zeros(models, examples);
  for (std::size_t i = 0; i < examples; ++i) b.matrix.true_labels[i] = static_cast<int>(i % 2);
  for (std::size_t k = 0; k < models; ++k) {
    for (std::size_t i = 0; i < examples; ++i) {
      const bool in = rng.bernoulli(0.5);
      b.matrix.membership[b.matrix.offset(k, i)] = in;
      b.matrix.confidences[b.matrix.offset(k, i)] =
          sigmoid(rng.normal(in ? member_mean : nonmember_mean, 1.0));
    }
  }
  for (std::size_t i = 0; i < examples; ++i) {
    const bool in = i < examples / 2;
    // In the null bundle the label is drawn independently of the confidence.
    const bool shifted = null_target ? rng.bernoulli(0.5) : in;
    b.target.push_back({static_cast<long>(i), b.matrix.true_labels[i],
                        sigmoid(rng.normal(shifted ? member_mean : nonmember_mean, 1.0)), in});
  }
  return b;
}

double attack_auc(const AuditBundle& b) {
  const MembershipScores s = run_attack(b, AttackConfig{});
  const auto values = s.scores();
  return roc_auc(values, s.labels()).auc;
}

Outcome lira_analytic() {
  const double separable = attack_auc(two_gaussian_bundle(1.0, -1.0, false, 1));
  const double null_auc = attack_auc(two_gaussian_bundle(1.0, -1.0, true, 2));
  return {separable >= 0.90 && separable <= 0.94 && null_auc >= 0.47 && null_auc <= 0.53,
          fmt("online AUC %.4f (analytic %.4f), null AUC %.4f", separable,
              standard_normal_cdf(std::numbers::sqrt2), null_auc)};
}

Outcome closed_forms() {
  const double l05 = logit_transform(0.5);
  const double l075 = logit_transform(0.75);
  GaussianPair g;
  g.mu_in = 1.0;
  g.mu_out = -1.0;
  g.var_in = 1.0;
  g.var_out = 1.0;
  const double online = score_online(1.0, g);
  GaussianPair off;
  off.mu_out = 0.3;
  off.var_out = 2.25;
  const double offline = score_offline(0.3 + 1.5, off);
  const double phi1 = 0.5 * std::erfc(-1.0 / std::numbers::sqrt2);
  const bool ok = l05 == 0.0 && std::abs(l075 - std::log(3.0)) <= 1e-12 &&
                  std::abs(online - 2.0) <= 1e-12 && std::abs(offline - phi1) <= 1e-9;
  return {ok, fmt("logit(0.5)=%.3g, logit(0.75)-ln3=%.3g, online=%.15g, offline-Phi(1)=%.3g",
                  l05, l075 - std::log(3.0), online, offline - phi1)};
}

Outcome direction() {
  const auto& runs = seed_runs().soft;
  int wins = 0;
  double teacher_acc = 0;
  for (const auto& r : runs) {
    if (r.at(1.0).metrics.auc_mia < r.teacher.auc_mia) ++wins;
    teacher_acc += r.teacher.accuracy;
  }
  teacher_acc /= static_cast<double>(runs.size());
  const double cas = mean_cas(runs, 1.0);
  return {wins >= 9 && cas >= teacher_acc - 0.05,
          fmt("student AUC below teacher in %d/10 seeds, mean CAS@1x %.4f vs teacher %.4f",
              wins, cas, teacher_acc)};
}

Outcome cas_trend() {
  const auto& runs = seed_runs().soft;
  const double multipliers[] = {0.1, 0.2, 1.0, 5.0};
  std::vector<double> means;
  for (double m : multipliers) means.push_back(mean_cas(runs, m));
  int inversions = 0;
  double largest = 0;
  for (std::size_t k = 1; k < means.size(); ++k) {
    if (means[k] < means[k - 1]) {
      ++inversions;
      largest = std::max(largest, means[k - 1] - means[k]);
    }
  }
  return {inversions <= 1 && largest <= 0.01,
          fmt("mean CAS %.4f -> %.4f -> %.4f -> %.4f, %d inversion(s)", means[0], means[1],
              means[2], means[3], inversions)};
}

Outcome soft_labels() {
  const double soft = mean_cas(seed_runs().soft, 1.0);
  const double hard = mean_cas(seed_runs().hard, 1.0);
  return {soft >= hard, fmt("mean CAS@1x soft %.4f, hard %.4f", soft, hard)};
}

double max_relative_gradient_error(int hidden_units, std::uint64_t seed) {
  Rng rng(seed);
  const int d = 4;
  const int classes = 3;
  const int n = 6;
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = rng.normal();
  Eigen::MatrixXd t(n, classes);
  for (Eigen::Index k = 0; k < t.size(); ++k) t.data()[k] = rng.uniform(0.01, 1.0);
  for (int i = 0; i < n; ++i) t.row(i) /= t.row(i).sum();
  desk::TrainConfig config;
  config.hidden_units = hidden_units;
  config.init_scale = 1.0;
  config.seed = seed;
  desk::ClassifierModel m = desk::init_classifier(d, classes, config);
  std::vector<double> theta = desk::flatten(m);
  for (double& v : theta) v += rng.normal(0.0, 0.5);
  desk::unflatten(theta, m);
  const std::vector<double> analytic = desk::flatten(desk::loss_and_gradient(m, x, t).gradient);
  double worst = 0;
  const double h = 1e-6;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    desk::ClassifierModel mp = m;
    desk::ClassifierModel mm = m;
    std::vector<double> p = theta;
    p[k] += h;
    desk::unflatten(p, mp);
    p[k] -= 2 * h;
    desk::unflatten(p, mm);
    const double numeric = (desk::loss(mp, x, t) - desk::loss(mm, x, t)) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(analytic[k]), 1e-8});
    if (scale <= 1e-7) continue;
    worst = std::max(worst, std::abs(numeric - analytic[k]) / scale);
  }
  return worst;
}

// Replays full-batch training and reports the largest epoch-to-epoch loss increase.
double max_loss_increase(const Eigen::MatrixXd& x, const Eigen::MatrixXd& targets,
                         const desk::TrainConfig& config) {
  desk::ClassifierModel m =
      desk::init_classifier(static_cast<int>(x.cols()), static_cast<int>(targets.cols()), config);
  double previous = desk::loss(m, x, targets);
  double worst = 0;
  for (int e = 0; e < config.epochs; ++e) {
    desk::gradient_step(m, desk::loss_and_gradient(m, x, targets).gradient,
                        config.learning_rate);
    const double current = desk::loss(m, x, targets);
    worst = std::max(worst, current - previous);
    previous = current;
  }
  return worst;
}

Outcome training_checks() {
  double grad = 0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    grad = std::max(grad, max_relative_gradient_error(p % 2 == 0 ? 0 : 5, p));
  }
  double increase = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    desk::SimConfig c;
    c.master_seed = seed;
    const desk::ClusterData data = desk::make_cluster_data(c, seed);
    const desk::TrainConfig teacher_config =
        desk::train_config(c, stream_seed(seed, desk::kTeacherInitStream));
    const Eigen::MatrixXd hard = desk::one_hot(data.train.labels, c.num_classes);
    increase = std::max(increase, max_loss_increase(data.train.points, hard, teacher_config));
    const desk::ClassifierModel teacher = desk::train_classifier(data.train, teacher_config);
    const desk::LabeledDataset synthetic = desk::sample_synthetic(
        desk::fit_generator(data.train), 1.0,
        std::vector<long>(static_cast<std::size_t>(c.num_classes), c.per_class_train),
        stream_seed(seed, desk::kSynthesisStream));
    const desk::SoftLabelSet soft = desk::gkd_soft_labels(teacher, synthetic);
    increase = std::max(increase,
                        max_loss_increase(synthetic.points, soft.probabilities, teacher_config));
  }
  return {grad <= 1e-4 && increase <= 0.0,
          fmt("max gradient relative error %.3g over 100 points, max loss increase %.3g", grad,
              increase)};
}

Outcome determinism() {
  const fs::path root =
      fs::temp_directory_path() / ("tckr_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream log;
  std::vector<std::string> sim_reports;
  for (unsigned threads : {1u, 1u, 4u}) {
    cli::SimulateOptions opt;
    opt.out = root / ("sim" + std::to_string(sim_reports.size()));
    opt.export_bundle = true;
    opt.threads = threads;
    cli::cmd_simulate(opt, log);
    sim_reports.push_back(slurp(opt.out / "report.json"));
  }
  std::vector<std::string> audit_reports;
  for (unsigned threads : {1u, 1u, 4u}) {
    cli::AuditOptions opt;
    opt.manifest = root / "sim0" / "bundle" / "manifest.json";
    opt.out = root / ("audit" + std::to_string(audit_reports.size()));
    opt.sweep = true;
    opt.threads = threads;
    cli::cmd_audit(opt, log);
    audit_reports.push_back(slurp(opt.out / "report.json"));
  }
  fs::remove_all(root);
  const bool sim_same = sim_reports[0] == sim_reports[1] && sim_reports[0] == sim_reports[2];
  const bool audit_same =
      audit_reports[0] == audit_reports[1] && audit_reports[0] == audit_reports[2];
  return {sim_same && audit_same && !sim_reports[0].empty() && !audit_reports[0].empty(),
          fmt("simulate report.json %s, audit report.json %s (threads 1, 1, 4)",
              sim_same ? "identical" : "differs", audit_same ? "identical" : "differs")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace tckr::acceptance

int main() {
  using namespace tckr::acceptance;
  const std::vector<Criterion> criteria = {
      {1, "AOP table reproduction", 1.0, aop_table},
      {2, "delta-row reproduction", 1.0, delta_rows},
      {3, "AUC oracle equivalence", 10.0, auc_oracle},
      {4, "attack analytic check", 30.0, lira_analytic},
      {5, "closed-form scoring", 1.0, closed_forms},
      {6, "student audit direction", 300.0, direction},
      {7, "CAS scaling trend", 600.0, cas_trend},
      {8, "soft-label advantage", 300.0, soft_labels},
      {9, "numerical training checks", 60.0, training_checks},
      {10, "determinism", 300.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds <= c.budget_seconds;
    if (!pass) ++failures;
    std::printf("%s  criterion %2d  %-26s %s [%.2f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
