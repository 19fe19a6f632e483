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

#ifndef TCKR_DESKPIPE_GENERATOR_HPP_
#define TCKR_DESKPIPE_GENERATOR_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tckr/deskpipe/data.hpp"
#include "tckr/error.hpp"
#include "tckr/rng.hpp"

namespace tckr::desk {

inline constexpr double kGeneratorVarianceFloor = 1e-12;

// Class-conditional diagonal Gaussian fitted to real training data. Stands
// in for a domain-adapted text-to-image generator: it only ever sees the
// teacher's training set.
struct GeneratorModel {
  Eigen::MatrixXd means;      // C x d
  Eigen::MatrixXd variances;  // C x d, >= kGeneratorVarianceFloor
  std::vector<long> counts;   // training examples per class
  std::vector<std::string> class_names;
};

inline GeneratorModel fit_generator(const LabeledDataset& data) {
  validate(data);
  const auto classes = static_cast<Eigen::Index>(data.num_classes());
  const Eigen::Index d = data.points.cols();
  GeneratorModel g;
  g.class_names = data.class_names;
  g.means = Eigen::MatrixXd::Zero(classes, d);
  g.variances = Eigen::MatrixXd::Zero(classes, d);
  g.counts.assign(static_cast<std::size_t>(classes), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    g.means.row(data.labels[i]) += data.points.row(static_cast<Eigen::Index>(i));
    ++g.counts[static_cast<std::size_t>(data.labels[i])];
  }
  for (Eigen::Index c = 0; c < classes; ++c) {
    if (g.counts[static_cast<std::size_t>(c)] < 2) {
      throw ValidationError("fit_generator: class " + data.class_names[c] +
                            " has fewer than 2 samples");
    }
    g.means.row(c) /= static_cast<double>(g.counts[static_cast<std::size_t>(c)]);
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int c = data.labels[i];
    g.variances.row(c) +=
        (data.points.row(static_cast<Eigen::Index>(i)) - g.means.row(c)).array().square().matrix();
  }
  for (Eigen::Index c = 0; c < classes; ++c) {
    g.variances.row(c) /= static_cast<double>(g.counts[static_cast<std::size_t>(c)] - 1);
    g.variances.row(c) = g.variances.row(c).cwiseMax(kGeneratorVarianceFloor);
  }
  return g;
}

// Per-class count for a cardinality multiplier: round half up, at least 1.
inline long synthetic_count(double multiplier, long base) {
  return std::max<long>(
      1, static_cast<long>(std::floor(multiplier * static_cast<double>(base) + 0.5)));
}

// Class-major samples. The stream is Rng(stream_seed(seed, bits(multiplier))),
// so each (seed, multiplier) pair has its own generation seed.
inline LabeledDataset sample_synthetic(const GeneratorModel& gen, double multiplier,
                                       const std::vector<long>& per_class_base,
                                       std::uint64_t seed) {
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) {
    throw ValidationError("sample_synthetic: multiplier must be > 0");
  }
  const auto classes = static_cast<std::size_t>(gen.means.rows());
  if (per_class_base.size() != classes) {
    throw ValidationError("sample_synthetic: need one base count per class");
  }
  std::vector<long> counts(classes);
  long total = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    counts[c] = synthetic_count(multiplier, per_class_base[c]);
    total += counts[c];
  }
  Rng rng(stream_seed(seed, std::bit_cast<std::uint64_t>(multiplier)));
  const Eigen::Index d = gen.means.cols();
  const Eigen::MatrixXd stddev = gen.variances.cwiseSqrt();
  LabeledDataset out;
  out.class_names = gen.class_names;
  out.points.resize(total, d);
  out.labels.reserve(static_cast<std::size_t>(total));
  Eigen::Index row = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    for (long k = 0; k < counts[c]; ++k, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) {
        out.points(row, j) = rng.normal(gen.means(ci, j), stddev(ci, j));
      }
      out.labels.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_GENERATOR_HPP_
