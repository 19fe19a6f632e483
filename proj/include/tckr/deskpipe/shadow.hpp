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

#ifndef TCKR_DESKPIPE_SHADOW_HPP_
#define TCKR_DESKPIPE_SHADOW_HPP_

#include <cstdint>
#include <vector>

#include "tckr/deskpipe/classifier.hpp"
#include "tckr/deskpipe/data.hpp"
#include "tckr/parallel.hpp"
#include "tckr/rng.hpp"
#include "tckr/shadow_matrix.hpp"
#include "tckr/splits.hpp"

namespace tckr::desk {

// One classifier per plan, trained on the plan's train part with
// TrainConfig::seed replaced by stream_seed(config.seed, model_id). The val
// and test parts are not used for training. Entry (m, i) of the result is
// model m's true-class confidence on pool example i.
inline ShadowMatrix train_shadow_models(const LabeledDataset& pool,
                                        const std::vector<SplitPlan>& plans,
                                        const TrainConfig& config,
                                        unsigned threads = 1) {
  validate(pool);
  const BoolMatrix members = membership_matrix(plans, pool.size());
  ShadowMatrix out = ShadowMatrix::zeros(plans.size(), pool.size());
  out.true_labels = pool.labels;
  out.membership = members.cells;
  parallel_for(plans.size(), threads, [&](std::size_t m) {
    TrainConfig c = config;
    c.seed = stream_seed(config.seed, static_cast<std::uint64_t>(plans[m].model_id));
    const LabeledDataset train = subset(pool, plans[m].train_idx);
    const Eigen::MatrixXd targets =
        one_hot(train.labels, static_cast<int>(pool.num_classes()));
    const ClassifierModel model = train_on_targets(train.points, targets, c);
    const std::vector<double> conf = true_class_confidence(model, pool);
    std::copy(conf.begin(), conf.end(),
              out.confidences.begin() + static_cast<std::ptrdiff_t>(m * pool.size()));
  });
  return out;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_SHADOW_HPP_
