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

#ifndef TCKR_SHADOW_MATRIX_HPP_
#define TCKR_SHADOW_MATRIX_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tckr {

// Per-(shadow model, example) true-class confidences with the membership bit
// of each pair. Storage is row-major with one row per shadow model.
struct ShadowMatrix {
  std::size_t num_models = 0;
  std::size_t num_examples = 0;
  std::vector<double> confidences;
  std::vector<std::uint8_t> membership;
  std::vector<int> true_labels;  // one per example

  static ShadowMatrix zeros(std::size_t models, std::size_t examples) {
    ShadowMatrix m;
    m.num_models = models;
    m.num_examples = examples;
    m.confidences.assign(models * examples, 0.0);
    m.membership.assign(models * examples, 0);
    m.true_labels.assign(examples, 0);
    return m;
  }

  std::size_t offset(std::size_t model, std::size_t example) const {
    return model * num_examples + example;
  }
  double confidence(std::size_t model, std::size_t example) const {
    return confidences[offset(model, example)];
  }
  bool is_member(std::size_t model, std::size_t example) const {
    return membership[offset(model, example)] != 0;
  }

  bool operator==(const ShadowMatrix&) const = default;
};

// One observation of the audited model: p = f(x)_y on an example of the
// shadow index space, together with ground-truth membership.
struct TargetRow {
  long example_id = 0;
  int true_label = 0;
  double confidence = 0.0;
  bool is_member = false;

  bool operator==(const TargetRow&) const = default;
};

using TargetObservations = std::vector<TargetRow>;

}  // namespace tckr

#endif  // TCKR_SHADOW_MATRIX_HPP_
