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

#ifndef TCKR_SPLITS_HPP_
#define TCKR_SPLITS_HPP_

// Shadow-model partitions of an attack pool into train/val/test parts.
//
// Part sizes use largest-remainder apportionment: floor(fraction * pool) per
// part, then the leftover items go to the parts with the largest fractional
// remainders (ties: train, then val, then test). Each plan is an independent
// Fisher-Yates shuffle of the pool driven by Rng(stream_seed(seed, model_id)),
// so a plan depends only on (pool_size, fractions, seed, model_id).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "tckr/error.hpp"
#include "tckr/parallel.hpp"
#include "tckr/rng.hpp"

namespace tckr {

struct SplitConfig {
  long num_models = 256;
  std::array<double, 3> fractions{0.5, 0.1, 0.4};
  std::uint64_t seed = 0;
};

struct SplitPlan {
  long model_id = 0;
  std::vector<std::size_t> train_idx;  // ascending
  std::vector<std::size_t> val_idx;    // ascending
  std::vector<std::size_t> test_idx;   // ascending

  bool operator==(const SplitPlan&) const = default;
};

inline void validate(const SplitConfig& config) {
  if (config.num_models < 1) throw ValidationError("num_models must be >= 1");
  double sum = 0.0;
  for (double f : config.fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw ValidationError("split fractions must lie in [0, 1]");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("split fractions must sum to 1");
  }
}

inline std::array<std::size_t, 3> apportion(std::size_t pool_size,
                                            const std::array<double, 3>& fractions) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    const double exact = fractions[k] * static_cast<double>(pool_size);
    const double whole = std::floor(exact);
    sizes[k] = static_cast<std::size_t>(whole);
    remainder[k] = exact - whole;
    assigned += sizes[k];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < pool_size; ++k, ++assigned) {
    ++sizes[order[k % 3]];
  }
  while (assigned > pool_size) {  // only reachable through rounding noise
    for (int k = 2; k >= 0 && assigned > pool_size; --k) {
      if (sizes[k] > 0) {
        --sizes[k];
        --assigned;
      }
    }
  }
  return sizes;
}

inline SplitPlan plan_split(std::size_t pool_size, const SplitConfig& config,
                            long model_id) {
  const auto sizes = apportion(pool_size, config.fractions);
  std::vector<std::size_t> perm(pool_size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(stream_seed(config.seed, static_cast<std::uint64_t>(model_id)));
  rng.shuffle(std::span<std::size_t>(perm));

  SplitPlan plan;
  plan.model_id = model_id;
  const auto a = perm.begin();
  const auto b = a + static_cast<std::ptrdiff_t>(sizes[0]);
  const auto c = b + static_cast<std::ptrdiff_t>(sizes[1]);
  plan.train_idx.assign(a, b);
  plan.val_idx.assign(b, c);
  plan.test_idx.assign(c, perm.end());
  std::sort(plan.train_idx.begin(), plan.train_idx.end());
  std::sort(plan.val_idx.begin(), plan.val_idx.end());
  std::sort(plan.test_idx.begin(), plan.test_idx.end());
  return plan;
}

inline std::vector<SplitPlan> plan_splits(std::size_t pool_size,
                                          const SplitConfig& config,
                                          unsigned threads = 1) {
  validate(config);
  if (pool_size < 3) {
    throw ValidationError("pool_size must be >= 3, got " + std::to_string(pool_size));
  }
  std::vector<SplitPlan> plans(static_cast<std::size_t>(config.num_models));
  parallel_for(plans.size(), threads, [&](std::size_t m) {
    plans[m] = plan_split(pool_size, config, static_cast<long>(m));
  });
  return plans;
}

struct BoolMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> cells;

  bool operator()(std::size_t r, std::size_t c) const {
    return cells[r * cols + c] != 0;
  }
};

// Entry (m, i) is set iff example i is in the training part of plan m.
inline BoolMatrix membership_matrix(const std::vector<SplitPlan>& plans,
                                    std::size_t pool_size) {
  BoolMatrix out{plans.size(), pool_size,
                 std::vector<std::uint8_t>(plans.size() * pool_size, 0)};
  for (std::size_t m = 0; m < plans.size(); ++m) {
    for (std::size_t i : plans[m].train_idx) {
      if (i >= pool_size) {
        throw ValidationError("plan " + std::to_string(plans[m].model_id) +
                              ": index " + std::to_string(i) +
                              " out of range for pool of " +
                              std::to_string(pool_size));
      }
      out.cells[m * pool_size + i] = 1;
    }
  }
  return out;
}

// CSV "model_id,example_id,part", ordered by model then example.
inline void write_plans_csv(const std::vector<SplitPlan>& plans,
                            std::size_t pool_size, std::ostream& out) {
  out << "model_id,example_id,part\n";
  std::vector<const char*> part(pool_size, nullptr);
  for (const auto& plan : plans) {
    for (auto i : plan.train_idx) part.at(i) = "train";
    for (auto i : plan.val_idx) part.at(i) = "val";
    for (auto i : plan.test_idx) part.at(i) = "test";
    for (std::size_t i = 0; i < pool_size; ++i) {
      out << plan.model_id << ',' << i << ',' << part[i] << '\n';
    }
  }
}

}  // namespace tckr

#endif  // TCKR_SPLITS_HPP_
