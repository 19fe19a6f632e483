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

#ifndef TCKR_DESKPIPE_DATA_HPP_
#define TCKR_DESKPIPE_DATA_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tckr/error.hpp"
#include "tckr/rng.hpp"

namespace tckr::desk {

// Points are rows. Labels index into class_names.
struct LabeledDataset {
  Eigen::MatrixXd points;
  std::vector<int> labels;
  std::vector<std::string> class_names;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
  std::size_t num_classes() const { return class_names.size(); }

  bool operator==(const LabeledDataset& o) const {
    return labels == o.labels && class_names == o.class_names &&
           points.rows() == o.points.rows() && points.cols() == o.points.cols() &&
           points == o.points;
  }
};

inline std::vector<std::string> default_class_names(int num_classes) {
  std::vector<std::string> names;
  for (int c = 0; c < num_classes; ++c) names.push_back("class_" + std::to_string(c));
  return names;
}

inline void validate(const LabeledDataset& data) {
  if (static_cast<std::size_t>(data.points.rows()) != data.labels.size()) {
    throw ValidationError("dataset: point and label counts differ");
  }
  if (data.num_classes() < 2) throw ValidationError("dataset: need >= 2 classes");
  for (int y : data.labels) {
    if (y < 0 || y >= static_cast<int>(data.num_classes())) {
      throw ValidationError("dataset: label out of range");
    }
  }
  if (!data.points.allFinite()) throw ValidationError("dataset: non-finite coordinate");
}

// Rows of `data` selected by `index`, in index order.
inline LabeledDataset subset(const LabeledDataset& data,
                             const std::vector<std::size_t>& index) {
  LabeledDataset out;
  out.class_names = data.class_names;
  out.points.resize(static_cast<Eigen::Index>(index.size()), data.points.cols());
  out.labels.reserve(index.size());
  for (std::size_t k = 0; k < index.size(); ++k) {
    out.points.row(static_cast<Eigen::Index>(k)) =
        data.points.row(static_cast<Eigen::Index>(index[k]));
    out.labels.push_back(data.labels[index[k]]);
  }
  return out;
}

// `a` followed by `b`.
inline LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.points.cols() != b.points.cols() || a.class_names != b.class_names) {
    throw ValidationError("concat: incompatible datasets");
  }
  LabeledDataset out;
  out.class_names = a.class_names;
  out.points.resize(a.points.rows() + b.points.rows(), a.points.cols());
  out.points << a.points, b.points;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

// Isotropic Gaussian clusters. Class means are drawn from
// N(0, separation^2 I); points of class c from N(mean_c, spread^2 I).
struct ClusterSpec {
  int num_classes = 5;
  int dim = 2;
  double separation = 1.0;
  double spread = 0.5;
};

inline Eigen::MatrixXd draw_class_means(const ClusterSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd means(spec.num_classes, spec.dim);
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int j = 0; j < spec.dim; ++j) means(c, j) = rng.normal(0.0, spec.separation);
  }
  return means;
}

// Class-major draw of `per_class` points per class.
inline LabeledDataset draw_clusters(const ClusterSpec& spec,
                                    const Eigen::MatrixXd& means, int per_class,
                                    std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset out;
  out.class_names = default_class_names(spec.num_classes);
  out.points.resize(static_cast<Eigen::Index>(spec.num_classes) * per_class, spec.dim);
  Eigen::Index row = 0;
  for (int c = 0; c < spec.num_classes; ++c) {
    for (int k = 0; k < per_class; ++k, ++row) {
      for (int j = 0; j < spec.dim; ++j) {
        out.points(row, j) = means(c, j) + rng.normal(0.0, spec.spread);
      }
      out.labels.push_back(c);
    }
  }
  return out;
}

// Nearest class mean; used as an independent reference classifier.
inline std::vector<int> nearest_centroid(const Eigen::MatrixXd& centroids,
                                         const Eigen::MatrixXd& points) {
  std::vector<int> out(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    Eigen::Index best = 0;
    (centroids.rowwise() - points.row(i)).rowwise().squaredNorm().minCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_DATA_HPP_
