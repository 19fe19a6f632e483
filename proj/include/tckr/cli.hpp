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

#ifndef TCKR_CLI_HPP_
#define TCKR_CLI_HPP_

// Subcommands of the `tckr` tool. Each command writes files only below its
// output directory and reports to the given stream; tools/tckr.cpp only
// parses flags and maps exceptions to exit codes via run_guarded.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tckr/csv.hpp"
#include "tckr/deskpipe/config.hpp"
#include "tckr/deskpipe/experiment.hpp"
#include "tckr/error.hpp"
#include "tckr/ingest.hpp"
#include "tckr/lira.hpp"
#include "tckr/metrics.hpp"
#include "tckr/report.hpp"
#include "tckr/splits.hpp"

namespace tckr::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

// Runs fn and converts library exceptions to the 0/1/2 exit-code contract.
template <typename Fn>
int run_guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(path.parent_path().string() + ": cannot create directory");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw IoError(path.string() + ": write failed");
}

inline Variant parse_variant(const std::string& s) {
  if (s == "online") return Variant::kOnline;
  if (s == "offline") return Variant::kOffline;
  throw ValidationError("--variant must be online or offline, got \"" + s + "\"");
}

inline VarianceMode parse_variance(const std::string& s) {
  if (s == "global") return VarianceMode::kGlobal;
  if (s == "per-example" || s == "per_example") return VarianceMode::kPerExample;
  throw ValidationError("--variance must be global or per-example, got \"" + s + "\"");
}

// ---------------------------------------------------------------- audit

struct AuditOptions {
  std::filesystem::path manifest;
  std::string variant = "online";
  std::string variance = "per-example";
  bool sweep = false;
  std::filesystem::path out;
  std::optional<double> accuracy;  // of the audited model, enables AOP
  unsigned threads = 1;
};

inline int cmd_audit(const AuditOptions& opt, std::ostream& log) {
  AttackConfig config;
  config.variant = parse_variant(opt.variant);
  config.variance_mode = parse_variance(opt.variance);
  validate(config);
  if (opt.accuracy && !(*opt.accuracy >= 0.0 && *opt.accuracy <= 1.0)) {
    throw DomainError("--accuracy must lie in [0, 1]");
  }
  const AuditBundle bundle = load_audit_bundle(opt.manifest);

  std::optional<SweepReport> sweep;
  if (opt.sweep) {
    sweep = sweep_variants(bundle, config, opt.threads);
    const SweepEntry& best = sweep->entries[sweep->best];
    config.variant = best.variant;
    config.variance_mode = best.variance_mode;
  }
  const MembershipScores scores = run_attack(bundle, config, opt.threads);
  const auto values = scores.scores();
  const RocCurve roc = roc_auc(values, scores.labels());

  std::ostringstream scores_csv;
  write_scores_csv(scores, scores_csv);
  write_file(opt.out / "scores.csv", scores_csv.str());
  const Json report = audit_report_json(scores, roc, opt.accuracy, sweep ? &*sweep : nullptr);
  write_file(opt.out / "report.json", report.dump(2) + "\n");

  if (sweep) {
    log << "variant  variance     AUC_MIA\n";
    for (std::size_t k = 0; k < sweep->entries.size(); ++k) {
      const auto& e = sweep->entries[k];
      char line[96];
      std::snprintf(line, sizeof(line), "%-8s %-12s %6s%s\n", to_string(e.variant),
                    to_string(e.variance_mode), percent(e.auc).c_str(),
                    k == sweep->best ? "  *" : "");
      log << line;
    }
  }
  log << "attack " << to_string(config.variant) << '/' << to_string(config.variance_mode)
      << ": AUC_MIA " << percent(roc.auc) << "% (" << csv::format_double(roc.auc) << ")";
  for (double f : kReportedFprs) {
    log << ", TPR@" << csv::format_double(f) << " " << percent(tpr_at_fpr(roc, f)) << "%";
  }
  log << '\n';
  if (opt.accuracy) {
    log << "AOP " << percent(aop(*opt.accuracy, roc.auc)) << '\n';
  }
  for (const auto& w : scores.diagnostics.warnings) log << "warning: " << w << '\n';
  return kOk;
}

// ------------------------------------------------------------- validate

inline int cmd_validate(const std::filesystem::path& manifest, std::ostream& log) {
  const AuditBundle b = load_audit_bundle(manifest);
  const auto members = std::count_if(b.target.begin(), b.target.end(),
                                     [](const TargetRow& r) { return r.is_member; });
  log << "ok: " << b.manifest.num_models << " models x " << b.manifest.num_examples
      << " examples, " << b.manifest.num_classes << " classes, " << b.target.size()
      << " target rows (" << members << " members)\n";
  return kOk;
}

// ------------------------------------------------------------- simulate

struct SimulateOptions {
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  bool export_bundle = false;
  unsigned threads = 1;
};

inline desk::SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open config");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
  return desk::sim_config_from_json(j);
}

inline int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
  const desk::SimConfig config = opt.config ? load_sim_config(*opt.config) : desk::SimConfig{};
  desk::validate(config);
  desk::ExperimentArtifacts artifacts;
  const desk::ExperimentReport r =
      desk::run_tckr_experiment(config, opt.threads, opt.export_bundle ? &artifacts : nullptr);

  write_file(opt.out / "report.json", experiment_report_json(r).dump(2) + "\n");
  std::ostringstream table;
  write_experiment_csv(r, table);
  write_file(opt.out / "cardinality.csv", table.str());
  if (opt.export_bundle) {
    AuditBundle bundle;
    bundle.matrix = std::move(artifacts.shadows);
    bundle.target = std::move(artifacts.teacher_target);
    bundle.manifest.num_classes = config.num_classes;
    write_audit_bundle(bundle, opt.out / "bundle");
  }

  log << "teacher: accuracy " << percent(r.teacher.accuracy) << "  AUC_MIA "
      << percent(r.teacher.auc_mia) << "  AOP " << percent(r.teacher.aop) << '\n';
  log << "multiplier  CAS     AUC_MIA  AOP\n";
  for (const auto& s : r.students) {
    char line[96];
    std::snprintf(line, sizeof(line), "%-10s  %-6s  %-7s  %s\n",
                  (csv::format_double(s.multiplier) + "x").c_str(),
                  percent(s.metrics.accuracy).c_str(), percent(s.metrics.auc_mia).c_str(),
                  percent(s.metrics.aop).c_str());
    log << line;
  }
  return kOk;
}

// -------------------------------------------------------------- metrics

struct MetricsOptions {
  std::optional<double> accuracy;
  std::optional<double> auc;
  std::optional<std::filesystem::path> scores;
};

// Reads "example_id,score,is_member" as written by the audit command.
inline std::pair<std::vector<double>, std::vector<bool>> read_scores_csv(
    const std::filesystem::path& path) {
  csv::Reader reader(path.string(), "example_id,score,is_member");
  std::vector<double> scores;
  std::vector<bool> labels;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    reader.parse_int(f[0], "example_id");
    scores.push_back(reader.parse_double(f[1], "score"));
    if (f[2] == "0") labels.push_back(false);
    else if (f[2] == "1") labels.push_back(true);
    else reader.fail("is_member must be 0 or 1");
  }
  return {std::move(scores), std::move(labels)};
}

inline int cmd_metrics(const MetricsOptions& opt, std::ostream& log) {
  if (!opt.scores && !(opt.accuracy && opt.auc)) {
    throw ValidationError("metrics needs --acc and --auc, or --scores");
  }
  if (opt.scores && opt.auc) {
    throw ValidationError("--auc and --scores are mutually exclusive");
  }
  double auc = 0.0;
  if (opt.scores) {
    const auto [scores, labels] = read_scores_csv(*opt.scores);
    const RocCurve roc = roc_auc(scores, labels);
    auc = roc.auc;
    log << "auc " << csv::format_double(auc) << " (" << percent(auc) << "%)\n";
    for (double f : kReportedFprs) {
      const double t = tpr_at_fpr(roc, f);
      log << "tpr@" << csv::format_double(f) << ' ' << csv::format_double(t) << " ("
          << percent(t) << "%)\n";
    }
  } else {
    auc = *opt.auc;
    if (!(auc > 0.0 && auc <= 1.0)) throw DomainError("--auc must lie in (0, 1]");
    log << "auc " << csv::format_double(auc) << " (" << percent(auc) << "%)\n";
  }
  if (opt.accuracy) {
    const double acc = *opt.accuracy;
    const double value = aop(acc, auc);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    log << "accuracy " << csv::format_double(acc) << " (" << percent(acc) << "%)\n";
    log << "aop " << buf << " (" << percent(value) << "%)\n";
  }
  return kOk;
}

// ---------------------------------------------------------- paper-check

// Teacher/student table in percent units:
//   dataset,role,accuracy,auc_mia,aop
// role is teacher or student; optional rows with role "delta" and dataset
// min_delta / mean_delta / max_delta hold expected student-minus-teacher
// summaries.
struct ComparisonTable {
  std::map<std::string, TradeoffReport> teacher;
  std::map<std::string, TradeoffReport> student;
  std::vector<std::string> order;  // dataset order of first appearance
  std::map<std::string, TradeoffReport> expected_deltas;
};

inline ComparisonTable read_comparison_table(const std::filesystem::path& path) {
  csv::Reader reader(path.string(), "dataset,role,accuracy,auc_mia,aop");
  ComparisonTable t;
  std::vector<std::string_view> f;
  while (reader.next(f)) {
    const std::string name(f[0]);
    const std::string role(f[1]);
    const TradeoffReport row{reader.parse_double(f[2], "accuracy"),
                             reader.parse_double(f[3], "auc_mia"),
                             reader.parse_double(f[4], "aop")};
    std::map<std::string, TradeoffReport>* target = nullptr;
    if (role == "teacher") {
      target = &t.teacher;
    } else if (role == "student") {
      target = &t.student;
    } else if (role == "delta") {
      if (name != "min_delta" && name != "mean_delta" && name != "max_delta") {
        reader.fail("delta rows must be min_delta, mean_delta or max_delta");
      }
      target = &t.expected_deltas;
    } else {
      reader.fail("role must be teacher, student or delta");
    }
    if (role != "delta") {
      if (row.accuracy < 0 || row.accuracy > 100 || row.auc_mia <= 0 ||
          row.auc_mia > 100 || row.aop < 0) {
        reader.fail("values must be percentages");
      }
    }
    if (!target->emplace(name, row).second) reader.fail("duplicate row for " + name);
    if (role != "delta" &&
        std::find(t.order.begin(), t.order.end(), name) == t.order.end()) {
      t.order.push_back(name);
    }
  }
  if (t.teacher.empty()) throw ValidationError(path.string() + ": no teacher rows");
  for (const auto& name : t.order) {
    if (!t.teacher.count(name) || !t.student.count(name)) {
      throw ValidationError(path.string() + ": dataset " + name +
                            " needs both teacher and student rows");
    }
  }
  return t;
}

struct PaperCheckOptions {
  std::filesystem::path table;
  std::optional<std::filesystem::path> out;
  double tolerance = 0.01;  // percentage points
};

inline int cmd_paper_check(const PaperCheckOptions& opt, std::ostream& log) {
  const ComparisonTable t = read_comparison_table(opt.table);
  int cells = 0;
  int passed = 0;
  auto line = [&](bool ok, const std::string& what, double expected, double computed) {
    ++cells;
    if (ok) ++passed;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s  %-32s expected %8.2f  computed %9.4f\n",
                  ok ? "PASS" : "FAIL", what.c_str(), expected, computed);
    log << buf;
  };

  for (const auto& name : t.order) {
    for (const auto* side : {&t.teacher, &t.student}) {
      const TradeoffReport& row = side->at(name);
      const double recomputed = 100.0 * aop(row.accuracy / 100.0, row.auc_mia / 100.0);
      const bool ok = std::abs(recomputed - row.aop) <= opt.tolerance;
      line(ok, "AOP " + name + (side == &t.teacher ? " teacher" : " student"), row.aop,
           recomputed);
    }
  }

  const DeltaSummary d = delta_summary(t.teacher, t.student);
  std::ostringstream deltas;
  deltas << "row,accuracy,auc_mia,aop\n";
  const std::array<std::pair<const char*, DeltaStats DeltaSummary::*>, 3> metrics{
      {{"accuracy", &DeltaSummary::accuracy},
       {"auc_mia", &DeltaSummary::auc_mia},
       {"aop", &DeltaSummary::aop}}};
  const std::array<std::pair<const char*, double DeltaStats::*>, 3> stats{
      {{"min_delta", &DeltaStats::min},
       {"mean_delta", &DeltaStats::mean},
       {"max_delta", &DeltaStats::max}}};
  for (const auto& [row_name, stat] : stats) {
    deltas << row_name;
    for (const auto& [metric_name, metric] : metrics) {
      deltas << ',' << csv::format_double((d.*metric).*stat);
    }
    deltas << '\n';
  }
  if (t.expected_deltas.empty()) {
    log << "no expected delta rows in table; computed deltas only\n";
  }
  for (const auto& [row_name, stat] : stats) {
    const auto it = t.expected_deltas.find(row_name);
    if (it == t.expected_deltas.end()) continue;
    const double expected[3] = {it->second.accuracy, it->second.auc_mia, it->second.aop};
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      const double computed = (d.*metrics[k].second).*stat;
      line(std::abs(computed - expected[k]) <= opt.tolerance,
           std::string(row_name) + " " + metrics[k].first, expected[k], computed);
    }
  }
  if (opt.out) write_file(*opt.out / "deltas.csv", deltas.str());
  log << passed << "/" << cells << " cells within +/-" << csv::format_double(opt.tolerance)
      << '\n';
  return passed == cells ? kOk : kValidation;
}

// --------------------------------------------------------------- splits

struct SplitsOptions {
  long pool_size = 0;
  long models = 256;
  std::uint64_t seed = 0;
  std::string fractions = "0.5,0.1,0.4";
  std::optional<std::filesystem::path> out;
};

inline std::array<double, 3> parse_fractions(const std::string& text) {
  const auto fields = csv::split(text);
  if (fields.size() != 3) throw ValidationError("--fractions needs three values a,b,c");
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    auto [ptr, ec] = std::from_chars(fields[k].data(), fields[k].data() + fields[k].size(), out[k]);
    if (ec != std::errc() || ptr != fields[k].data() + fields[k].size() || fields[k].empty()) {
      throw ValidationError("--fractions: invalid number \"" + std::string(fields[k]) + "\"");
    }
  }
  return out;
}

inline int cmd_splits(const SplitsOptions& opt, std::ostream& log) {
  if (opt.pool_size < 0) throw ValidationError("--pool-size must be positive");
  SplitConfig config;
  config.num_models = opt.models;
  config.seed = opt.seed;
  config.fractions = parse_fractions(opt.fractions);
  const auto pool = static_cast<std::size_t>(opt.pool_size);
  const auto plans = plan_splits(pool, config);
  if (opt.out) {
    std::ostringstream text;
    write_plans_csv(plans, pool, text);
    write_file(*opt.out / "splits.csv", text.str());
    log << "wrote " << plans.size() << " plans to " << (*opt.out / "splits.csv").string()
        << '\n';
  } else {
    write_plans_csv(plans, pool, log);
  }
  return kOk;
}

}  // namespace tckr::cli

#endif  // TCKR_CLI_HPP_
