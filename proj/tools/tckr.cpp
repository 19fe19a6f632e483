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

// tckr: membership-inference audits of prediction logs, desk-scale
// synthetic-data simulations, and metric arithmetic.
//
//   tckr audit --manifest PATH --variant online|offline
//              --variance global|per-example [--sweep] --out DIR
//   tckr validate --manifest PATH
//   tckr simulate [--config PATH] --out DIR [--export-bundle]
//   tckr metrics (--acc F --auc F | --scores PATH [--acc F])
//   tckr paper-check [--table PATH] [--out DIR]
//   tckr splits --pool-size N --models M --seed S [--fractions a,b,c] [--out DIR]
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tckr/cli.hpp"

#ifndef TCKR_DATA_DIR
#define TCKR_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
  using namespace tckr::cli;
  CLI::App app{"Membership-inference audit and synthetic-data simulation toolkit", "tckr"};
  app.require_subcommand(1);
  unsigned threads = 1;

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Run the likelihood-ratio attack on a bundle");
  audit_cmd->add_option("--manifest", audit.manifest, "Bundle manifest.json")->required();
  audit_cmd->add_option("--variant", audit.variant, "online|offline")
      ->check(CLI::IsMember({"online", "offline"}));
  audit_cmd->add_option("--variance", audit.variance, "global|per-example")
      ->check(CLI::IsMember({"global", "per-example", "per_example"}));
  audit_cmd->add_flag("--sweep", audit.sweep, "Evaluate all four variants, keep the best");
  audit_cmd->add_option("--out", audit.out, "Output directory")->required();
  audit_cmd->add_option("--accuracy", audit.accuracy,
                        "Test accuracy of the audited model (enables AOP)");
  audit_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  std::string validate_manifest;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a bundle without attacking it");
  validate_cmd->add_option("--manifest", validate_manifest, "Bundle manifest.json")->required();

  SimulateOptions simulate;
  std::string simulate_config;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the desk-scale pipeline");
  simulate_cmd->add_option("--config", simulate_config, "Simulation config JSON");
  simulate_cmd->add_option("--out", simulate.out, "Output directory")->required();
  simulate_cmd->add_flag("--export-bundle", simulate.export_bundle,
                         "Also write the teacher audit bundle to OUT/bundle");
  simulate_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 256u));

  MetricsOptions metrics;
  std::string metrics_scores;
  auto* metrics_cmd = app.add_subcommand("metrics", "AUC, TPR@FPR and AOP arithmetic");
  metrics_cmd->add_option("--acc", metrics.accuracy, "Accuracy as a fraction");
  metrics_cmd->add_option("--auc", metrics.auc, "Attack AUC as a fraction");
  metrics_cmd->add_option("--scores", metrics_scores, "scores.csv from an audit");

  PaperCheckOptions paper;
  paper.table = std::string(TCKR_DATA_DIR) + "/teacher_student_table.csv";
  std::string paper_out;
  auto* paper_cmd =
      app.add_subcommand("paper-check", "Recompute AOP cells and delta rows of a comparison table");
  paper_cmd->add_option("--table", paper.table, "Table CSV");
  paper_cmd->add_option("--out", paper_out, "Write deltas.csv here");

  SplitsOptions splits;
  std::string splits_out;
  auto* splits_cmd = app.add_subcommand("splits", "Emit shadow-model split plans as CSV");
  splits_cmd->add_option("--pool-size", splits.pool_size, "Attack pool size")->required();
  splits_cmd->add_option("--models", splits.models, "Number of shadow models")->required();
  splits_cmd->add_option("--seed", splits.seed, "Seed")->required();
  splits_cmd->add_option("--fractions", splits.fractions, "train,val,test fractions");
  splits_cmd->add_option("--out", splits_out, "Write splits.csv here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  return run_guarded(
      [&]() -> int {
        if (*audit_cmd) {
          audit.threads = threads;
          return cmd_audit(audit, std::cout);
        }
        if (*validate_cmd) return cmd_validate(validate_manifest, std::cout);
        if (*simulate_cmd) {
          if (!simulate_config.empty()) simulate.config = simulate_config;
          simulate.threads = threads;
          return cmd_simulate(simulate, std::cout);
        }
        if (*metrics_cmd) {
          if (!metrics_scores.empty()) metrics.scores = metrics_scores;
          return cmd_metrics(metrics, std::cout);
        }
        if (*paper_cmd) {
          if (!paper_out.empty()) paper.out = paper_out;
          return cmd_paper_check(paper, std::cout);
        }
        if (!splits_out.empty()) splits.out = splits_out;
        return cmd_splits(splits, std::cout);
      },
      std::cerr);
}
