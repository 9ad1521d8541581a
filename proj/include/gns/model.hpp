/* Copyright 2026 The GNS Sampler Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gns/graph.hpp"
#include "gns/sampler.hpp"

namespace gns {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// GraphSage with a mean aggregator. Layer l maps in_dim -> out_dim with a
// (2 * in_dim) x out_dim weight applied to [self, neighbor mean].
struct ModelParams {
  std::vector<int> dims;  // feature_dim, hidden..., num_classes
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  int num_layers() const { return static_cast<int>(weights.size()); }
};

// Glorot-uniform weights and zero biases.
ModelParams init_params(std::span<const int> dims, std::uint64_t seed);

// Same shapes, all zeros. Used for gradients and Adam moments.
ModelParams zeros_like(const ModelParams& p);

// Activations kept by forward() for backward().
struct ForwardTrace {
  std::vector<Matrix> inputs;    // per layer, |src| x in_dim
  std::vector<Matrix> concat;    // per layer, |dst| x 2*in_dim
  std::vector<Matrix> pre_act;   // per layer, |dst| x out_dim
  std::vector<Vector> norm;      // per layer, per-dst sum of edge weights
};

// Gathers input features of `nodes` as doubles.
Matrix gather_features(const Graph& g, std::span<const NodeId> nodes);

// Logits for mb.targets. The neighbor aggregate of each dst is the
// edge-weighted sum of its sampled neighbors divided by the sum of those
// weights (zero when none were sampled). Hidden layers use ReLU.
Matrix forward(const MiniBatch& mb, const Graph& g, const ModelParams& params,
               ForwardTrace* trace = nullptr);

// Logits for every node using full neighborhoods.
Matrix full_batch_forward(const Graph& g, const ModelParams& params);

// A mini-batch whose blocks hold each dst's full neighborhood with unit
// weights; forward() on it reproduces full_batch_forward() on the targets.
MiniBatch full_neighborhood_batch(const Graph& g, std::span<const NodeId> targets,
                                  int num_layers);

struct LossGrad {
  double loss = 0.0;
  Matrix grad;  // d loss / d logits
};

// Mean softmax cross-entropy over rows. Throws InvalidArgument on a label
// outside [0, num_classes).
LossGrad loss_and_grad(const Matrix& logits, std::span<const std::int32_t> labels);

// Exact parameter gradients of the forward() computation recorded in trace.
ModelParams backward(const MiniBatch& mb, const ModelParams& params, const ForwardTrace& trace,
                     const Matrix& grad_logits);

struct AdamConfig {
  double lr = 0.003;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  ModelParams m;
  ModelParams v;
  std::int64_t step = 0;
};

AdamState adam_init(const ModelParams& params);
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamConfig& config);

// Labels of `nodes`.
std::vector<std::int32_t> gather_labels(const Graph& g, std::span<const NodeId> nodes);

// Fraction of rows whose argmax equals the label. Equals micro-F1 for
// single-label classification.
double micro_f1(const Matrix& logits, std::span<const std::int32_t> labels);

// "GNSW" v1: u16 version, u32 num_layers, u32 dims[num_layers + 1], then per
// layer the weight (row-major) and bias as f32.
void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace gns
