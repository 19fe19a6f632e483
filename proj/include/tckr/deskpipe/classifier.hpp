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

#ifndef TCKR_DESKPIPE_CLASSIFIER_HPP_
#define TCKR_DESKPIPE_CLASSIFIER_HPP_

// Softmax classifiers trained by gradient descent on cross-entropy against
// a target distribution per row: one-hot rows for hard labels, teacher
// probabilities for soft labels. Both cases share one code path.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tckr/deskpipe/data.hpp"
#include "tckr/error.hpp"
#include "tckr/rng.hpp"

namespace tckr::desk {

// Linear softmax model, or one tanh hidden layer followed by softmax when
// hidden_units > 0.
struct ClassifierModel {
  int hidden_units = 0;
  Eigen::MatrixXd hidden_weights;  // h x d
  Eigen::VectorXd hidden_bias;     // h
  Eigen::MatrixXd weights;         // C x d, or C x h
  Eigen::VectorXd bias;            // C

  int num_classes() const { return static_cast<int>(weights.rows()); }
  int input_dim() const {
    return static_cast<int>(hidden_units > 0 ? hidden_weights.cols() : weights.cols());
  }
  std::size_t num_parameters() const {
    return static_cast<std::size_t>(weights.size() + bias.size() +
                                    hidden_weights.size() + hidden_bias.size());
  }

  bool operator==(const ClassifierModel& o) const {
    auto same = [](const auto& a, const auto& b) {
      return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
    };
    return hidden_units == o.hidden_units && same(hidden_weights, o.hidden_weights) &&
           same(hidden_bias, o.hidden_bias) && same(weights, o.weights) &&
           same(bias, o.bias);
  }
};

// Training hyperparameters. Initialization: output weights uniform in
// [-init_scale, init_scale], hidden weights uniform in [-1/sqrt(d), 1/sqrt(d)],
// biases zero, all drawn from Rng(seed) in storage order.
// batch_size 0 means full-batch gradient descent.
struct TrainConfig {
  int epochs = 200;
  double learning_rate = 0.5;
  int batch_size = 0;
  int hidden_units = 0;
  double init_scale = 0.01;
  std::uint64_t seed = 0;
};

inline ClassifierModel init_classifier(int dim, int num_classes,
                                       const TrainConfig& config) {
  Rng rng(config.seed);
  ClassifierModel m;
  m.hidden_units = config.hidden_units;
  const int in = config.hidden_units > 0 ? config.hidden_units : dim;
  m.weights.resize(num_classes, in);
  for (Eigen::Index r = 0; r < m.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.weights.cols(); ++c) {
      m.weights(r, c) = rng.uniform(-config.init_scale, config.init_scale);
    }
  }
  m.bias = Eigen::VectorXd::Zero(num_classes);
  if (config.hidden_units > 0) {
    const double r0 = 1.0 / std::sqrt(static_cast<double>(dim));
    m.hidden_weights.resize(config.hidden_units, dim);
    for (Eigen::Index r = 0; r < m.hidden_weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.hidden_weights.cols(); ++c) {
        m.hidden_weights(r, c) = rng.uniform(-r0, r0);
      }
    }
    m.hidden_bias = Eigen::VectorXd::Zero(config.hidden_units);
  } else {
    m.hidden_weights.resize(0, 0);
    m.hidden_bias.resize(0);
  }
  return m;
}

inline Eigen::MatrixXd hidden_activations(const ClassifierModel& m,
                                          const Eigen::MatrixXd& x) {
  Eigen::MatrixXd a = x * m.hidden_weights.transpose();
  a.rowwise() += m.hidden_bias.transpose();
  return a.array().tanh().matrix();
}

inline Eigen::MatrixXd logits(const ClassifierModel& m, const Eigen::MatrixXd& x) {
  if (x.cols() != m.input_dim()) {
    throw ValidationError("classifier input has dimension " + std::to_string(x.cols()) +
                          ", model expects " + std::to_string(m.input_dim()));
  }
  Eigen::MatrixXd z = m.hidden_units > 0
                          ? Eigen::MatrixXd(hidden_activations(m, x) * m.weights.transpose())
                          : Eigen::MatrixXd(x * m.weights.transpose());
  z.rowwise() += m.bias.transpose();
  return z;
}

inline Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::MatrixXd p(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double top = z.row(i).maxCoeff();
    p.row(i) = (z.row(i).array() - top).exp().matrix();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

inline Eigen::MatrixXd predict_proba(const ClassifierModel& m, const Eigen::MatrixXd& x) {
  return softmax_rows(logits(m, x));
}

// Argmax per row; the lowest class index wins ties.
inline std::vector<int> argmax_rows(const Eigen::MatrixXd& z) {
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    Eigen::Index best = 0;
    z.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

inline std::vector<int> predict(const ClassifierModel& m, const Eigen::MatrixXd& x) {
  return argmax_rows(logits(m, x));
}

// p = f(x)_y for every row.
inline std::vector<double> true_class_confidence(const ClassifierModel& m,
                                                 const LabeledDataset& data) {
  const Eigen::MatrixXd p = predict_proba(m, data.points);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = p(static_cast<Eigen::Index>(i), data.labels[i]);
  }
  return out;
}

inline Eigen::MatrixXd one_hot(const std::vector<int>& labels, int num_classes) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                            num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    t(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return t;
}

// Parameters in the order weights (row-major), bias, hidden_weights
// (row-major), hidden_bias.
inline std::vector<double> flatten(const ClassifierModel& m) {
  std::vector<double> out;
  out.reserve(m.num_parameters());
  auto put = [&](const auto& a) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) out.push_back(a(r, c));
  };
  put(m.weights);
  put(m.bias);
  put(m.hidden_weights);
  put(m.hidden_bias);
  return out;
}

inline void unflatten(const std::vector<double>& flat, ClassifierModel& m) {
  if (flat.size() != m.num_parameters()) {
    throw ValidationError("unflatten: parameter count mismatch");
  }
  std::size_t k = 0;
  auto take = [&](auto& a) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = flat[k++];
  };
  take(m.weights);
  take(m.bias);
  take(m.hidden_weights);
  take(m.hidden_bias);
}

struct LossAndGradient {
  double loss = 0.0;
  ClassifierModel gradient;  // same shapes as the model
};

// Mean over rows of sum_c T_ic * (logsumexp(z_i) - z_ic) and its gradient.
inline LossAndGradient loss_and_gradient(const ClassifierModel& m,
                                         const Eigen::MatrixXd& x,
                                         const Eigen::MatrixXd& targets) {
  const auto n = static_cast<double>(x.rows());
  Eigen::MatrixXd h;
  if (m.hidden_units > 0) h = hidden_activations(m, x);
  const Eigen::MatrixXd& features = m.hidden_units > 0 ? h : x;
  Eigen::MatrixXd z = features * m.weights.transpose();
  z.rowwise() += m.bias.transpose();

  LossAndGradient out;
  Eigen::MatrixXd dz(z.rows(), z.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double top = z.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (z.row(i).array() - top).exp().matrix();
    const double total = e.sum();
    const double lse = top + std::log(total);
    const double mass = targets.row(i).sum();
    loss += mass * lse - targets.row(i).dot(z.row(i));
    dz.row(i) = (e / total) * mass - targets.row(i);
  }
  out.loss = loss / n;
  dz /= n;

  out.gradient.hidden_units = m.hidden_units;
  out.gradient.weights = dz.transpose() * features;
  out.gradient.bias = dz.colwise().sum().transpose();
  if (m.hidden_units > 0) {
    const Eigen::MatrixXd da =
        ((dz * m.weights).array() * (1.0 - h.array().square())).matrix();
    out.gradient.hidden_weights = da.transpose() * x;
    out.gradient.hidden_bias = da.colwise().sum().transpose();
  } else {
    out.gradient.hidden_weights.resize(0, 0);
    out.gradient.hidden_bias.resize(0);
  }
  return out;
}

inline double loss(const ClassifierModel& m, const Eigen::MatrixXd& x,
                   const Eigen::MatrixXd& targets) {
  return loss_and_gradient(m, x, targets).loss;
}

inline void gradient_step(ClassifierModel& m, const ClassifierModel& g, double lr) {
  m.weights -= lr * g.weights;
  m.bias -= lr * g.bias;
  if (m.hidden_units > 0) {
    m.hidden_weights -= lr * g.hidden_weights;
    m.hidden_bias -= lr * g.hidden_bias;
  }
}

// Core trainer: rows of `targets` are target distributions for rows of x.
inline ClassifierModel train_on_targets(const Eigen::MatrixXd& x,
                                        const Eigen::MatrixXd& targets,
                                        const TrainConfig& config) {
  if (x.rows() == 0) throw ValidationError("train_classifier: empty data");
  if (targets.rows() != x.rows()) {
    throw ValidationError("train_classifier: targets have " +
                          std::to_string(targets.rows()) + " rows, data has " +
                          std::to_string(x.rows()));
  }
  if (config.epochs < 0) throw ValidationError("train_classifier: epochs must be >= 0");
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("train_classifier: learning_rate must be > 0");
  }
  ClassifierModel m = init_classifier(static_cast<int>(x.cols()),
                                      static_cast<int>(targets.cols()), config);
  const auto n = static_cast<std::size_t>(x.rows());
  if (config.batch_size <= 0 || static_cast<std::size_t>(config.batch_size) >= n) {
    for (int e = 0; e < config.epochs; ++e) {
      gradient_step(m, loss_and_gradient(m, x, targets).gradient, config.learning_rate);
    }
    return m;
  }
  Rng rng(stream_seed(config.seed, 0xBA7C4ULL));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto bs = static_cast<std::size_t>(config.batch_size);
  for (int e = 0; e < config.epochs; ++e) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += bs) {
      const std::size_t len = std::min(bs, n - start);
      Eigen::MatrixXd bx(static_cast<Eigen::Index>(len), x.cols());
      Eigen::MatrixXd bt(static_cast<Eigen::Index>(len), targets.cols());
      for (std::size_t k = 0; k < len; ++k) {
        bx.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(order[start + k]));
        bt.row(static_cast<Eigen::Index>(k)) =
            targets.row(static_cast<Eigen::Index>(order[start + k]));
      }
      gradient_step(m, loss_and_gradient(m, bx, bt).gradient, config.learning_rate);
    }
  }
  return m;
}

// Teacher logits and their softmax.
struct SoftLabelSet {
  Eigen::MatrixXd logits;
  Eigen::MatrixXd probabilities;
};

inline ClassifierModel train_classifier(const LabeledDataset& data,
                                        const TrainConfig& config) {
  validate(data);
  return train_on_targets(data.points,
                          one_hot(data.labels, static_cast<int>(data.num_classes())),
                          config);
}

inline ClassifierModel train_classifier(const LabeledDataset& data,
                                        const SoftLabelSet& soft,
                                        const TrainConfig& config) {
  if (static_cast<std::size_t>(soft.probabilities.rows()) != data.size() ||
      soft.probabilities.cols() != static_cast<Eigen::Index>(data.num_classes())) {
    throw ValidationError("train_classifier: soft labels are " +
                          std::to_string(soft.probabilities.rows()) + "x" +
                          std::to_string(soft.probabilities.cols()) + ", data has " +
                          std::to_string(data.size()) + " rows and " +
                          std::to_string(data.num_classes()) + " classes");
  }
  validate(data);
  return train_on_targets(data.points, soft.probabilities, config);
}

// Generative knowledge distillation: the teacher's logits on the generated
// points become the student's targets.
inline SoftLabelSet gkd_soft_labels(const ClassifierModel& teacher,
                                    const LabeledDataset& data) {
  if (teacher.num_classes() != static_cast<int>(data.num_classes())) {
    throw ValidationError("gkd_soft_labels: teacher has " +
                          std::to_string(teacher.num_classes()) + " classes, data has " +
                          std::to_string(data.num_classes()));
  }
  SoftLabelSet out;
  out.logits = logits(teacher, data.points);
  out.probabilities = softmax_rows(out.logits);
  return out;
}

}  // namespace tckr::desk

#endif  // TCKR_DESKPIPE_CLASSIFIER_HPP_
