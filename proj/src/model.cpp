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

#include "gns/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "gns/error.hpp"

namespace gns {

namespace {

struct LayerOutput {
  Matrix concat;
  Matrix pre;
  Vector norm;
};

LayerOutput layer_forward(const Matrix& h_src, std::int64_t num_dst,
                          std::span<const BlockEdge> edges, const Matrix& w, const Vector& b) {
  const Eigen::Index in = h_src.cols();
  if (w.rows() != 2 * in) {
    throw InvalidArgument("layer input width " + std::to_string(in) +
                          " does not match weight rows " + std::to_string(w.rows()));
  }
  LayerOutput out;
  out.concat = Matrix::Zero(num_dst, 2 * in);
  out.concat.leftCols(in) = h_src.topRows(num_dst);
  out.norm = Vector::Zero(num_dst);
  for (const BlockEdge& e : edges) {
    out.concat.row(e.dst).rightCols(in) += e.weight * h_src.row(e.src);
    out.norm[e.dst] += e.weight;
  }
  for (Eigen::Index d = 0; d < num_dst; ++d) {
    if (out.norm[d] > 0.0) out.concat.row(d).rightCols(in) /= out.norm[d];
  }
  out.pre = out.concat * w;
  out.pre.rowwise() += b.transpose();
  return out;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

void check_params(const ModelParams& p, const MiniBatch* mb) {
  if (p.weights.empty() || p.weights.size() != p.biases.size() ||
      p.dims.size() != p.weights.size() + 1) {
    throw InvalidArgument("malformed model parameters");
  }
  if (mb != nullptr && mb->blocks.size() != p.weights.size()) {
    throw InvalidArgument("mini-batch has " + std::to_string(mb->blocks.size()) +
                          " blocks but the model has " + std::to_string(p.weights.size()) +
                          " layers");
  }
}

}  // namespace

ModelParams init_params(std::span<const int> dims, std::uint64_t seed) {
  if (dims.size() < 2) throw InvalidArgument("model needs at least input and output dims");
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("model dims must be >= 1");
  }
  ModelParams p;
  p.dims.assign(dims.begin(), dims.end());
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = 2 * dims[l];
    const int out = dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    std::uniform_real_distribution<double> unif(-limit, limit);
    Matrix w(in, out);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = unif(rng);
    p.weights.push_back(std::move(w));
    p.biases.push_back(Vector::Zero(out));
  }
  return p;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z;
  z.dims = p.dims;
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    z.weights.push_back(Matrix::Zero(p.weights[l].rows(), p.weights[l].cols()));
    z.biases.push_back(Vector::Zero(p.biases[l].size()));
  }
  return z;
}

Matrix gather_features(const Graph& g, std::span<const NodeId> nodes) {
  const auto dim = static_cast<Eigen::Index>(g.feature_dim());
  if (dim == 0) throw InvalidArgument("graph has no node features");
  Matrix x(static_cast<Eigen::Index>(nodes.size()), dim);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto f = g.features(nodes[i]);
    for (Eigen::Index j = 0; j < dim; ++j) x(static_cast<Eigen::Index>(i), j) = f[j];
  }
  return x;
}

Matrix forward(const MiniBatch& mb, const Graph& g, const ModelParams& params,
               ForwardTrace* trace) {
  check_params(params, &mb);
  if (static_cast<int>(g.feature_dim()) != params.dims.front()) {
    throw InvalidArgument("feature dim " + std::to_string(g.feature_dim()) +
                          " does not match model input dim " + std::to_string(params.dims[0]));
  }
  if (trace != nullptr) *trace = ForwardTrace{};
  Matrix h = gather_features(g, mb.input_nodes);
  const int layers = params.num_layers();
  for (int l = 0; l < layers; ++l) {
    const LayerBlock& block = mb.blocks[static_cast<std::size_t>(l)];
    if (h.rows() != static_cast<Eigen::Index>(block.src_nodes.size())) {
      throw InvalidArgument("block chain broken at layer " + std::to_string(l));
    }
    LayerOutput out = layer_forward(h, static_cast<std::int64_t>(block.dst_nodes.size()),
                                    block.edges, params.weights[l], params.biases[l]);
    Matrix next = l + 1 < layers ? relu(out.pre) : out.pre;
    if (trace != nullptr) {
      trace->inputs.push_back(std::move(h));
      trace->concat.push_back(std::move(out.concat));
      trace->pre_act.push_back(std::move(out.pre));
      trace->norm.push_back(std::move(out.norm));
    }
    h = std::move(next);
  }
  return h;
}

Matrix full_batch_forward(const Graph& g, const ModelParams& params) {
  check_params(params, nullptr);
  std::vector<BlockEdge> edges;
  edges.reserve(static_cast<std::size_t>(g.num_entries()));
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    for (NodeId u : g.neighbors(v)) edges.push_back({u, v, 1.0, false});
  }
  std::vector<NodeId> all(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v) all[v] = v;
  Matrix h = gather_features(g, all);
  const int layers = params.num_layers();
  for (int l = 0; l < layers; ++l) {
    LayerOutput out = layer_forward(h, g.num_nodes(), edges, params.weights[l], params.biases[l]);
    h = l + 1 < layers ? relu(out.pre) : std::move(out.pre);
  }
  return h;
}

MiniBatch full_neighborhood_batch(const Graph& g, std::span<const NodeId> targets,
                                  int num_layers) {
  SamplerConfig cfg;
  cfg.strategy = Strategy::kNodeWise;
  cfg.fanouts.assign(static_cast<std::size_t>(num_layers),
                     static_cast<int>(std::max<std::int64_t>(1, g.max_degree())));
  return build_minibatch(g, nullptr, targets, cfg, DrawKey{});
}

LossGrad loss_and_grad(const Matrix& logits, std::span<const std::int32_t> labels) {
  const Eigen::Index n = logits.rows();
  const Eigen::Index c = logits.cols();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw InvalidArgument("got " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " rows");
  }
  LossGrad out;
  out.grad = Matrix::Zero(n, c);
  if (n == 0) return out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::int32_t y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= c) {
      throw InvalidArgument("label " + std::to_string(y) + " outside [0, " + std::to_string(c) +
                            ")");
    }
    const double mx = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp().matrix();
    const double z = e.sum();
    out.loss += std::log(z) + mx - logits(i, y);
    out.grad.row(i) = e / z;
    out.grad(i, y) -= 1.0;
  }
  out.loss /= static_cast<double>(n);
  out.grad /= static_cast<double>(n);
  return out;
}

ModelParams backward(const MiniBatch& mb, const ModelParams& params, const ForwardTrace& trace,
                     const Matrix& grad_logits) {
  check_params(params, &mb);
  const int layers = params.num_layers();
  if (static_cast<int>(trace.pre_act.size()) != layers) {
    throw InvalidArgument("forward trace does not match the model");
  }
  ModelParams grads = zeros_like(params);
  Matrix grad = grad_logits;
  for (int l = layers - 1; l >= 0; --l) {
    const LayerBlock& block = mb.blocks[static_cast<std::size_t>(l)];
    const Matrix& pre = trace.pre_act[l];
    if (grad.rows() != pre.rows() || grad.cols() != pre.cols()) {
      throw InvalidArgument("gradient shape mismatch at layer " + std::to_string(l));
    }
    Matrix dz = grad;
    if (l + 1 < layers) dz = dz.cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grads.weights[l] = trace.concat[l].transpose() * dz;
    grads.biases[l] = dz.colwise().sum().transpose();
    if (l == 0) break;
    const Eigen::Index in = trace.inputs[l].cols();
    const Matrix dx = dz * params.weights[l].transpose();
    Matrix dh = Matrix::Zero(trace.inputs[l].rows(), in);
    const auto num_dst = static_cast<Eigen::Index>(block.dst_nodes.size());
    dh.topRows(num_dst) += dx.leftCols(in);
    const Vector& norm = trace.norm[l];
    for (const BlockEdge& e : block.edges) {
      dh.row(e.src) += (e.weight / norm[e.dst]) * dx.row(e.dst).rightCols(in);
    }
    grad = std::move(dh);
  }
  return grads;
}

AdamState adam_init(const ModelParams& params) {
  return AdamState{zeros_like(params), zeros_like(params), 0};
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state,
               const AdamConfig& config) {
  ++state.step;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
    const auto m_hat = m.array() / bc1;
    const auto v_hat = v.array() / bc2;
    param.array() -= config.lr * m_hat / (v_hat.sqrt() + config.eps);
  };
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    update(params.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
    update(params.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
  }
}

std::vector<std::int32_t> gather_labels(const Graph& g, std::span<const NodeId> nodes) {
  if (!g.data().has_labels()) throw InvalidArgument("graph has no labels");
  std::vector<std::int32_t> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = g.data().labels[nodes[i]];
  return out;
}

double micro_f1(const Matrix& logits, std::span<const std::int32_t> labels) {
  if (static_cast<std::size_t>(logits.rows()) != labels.size()) {
    throw InvalidArgument("got " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(logits.rows()) + " rows");
  }
  if (labels.empty()) return 0.0;
  std::size_t correct = 0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index arg = 0;
    logits.row(i).maxCoeff(&arg);
    if (arg == labels[static_cast<std::size_t>(i)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

namespace {

constexpr std::array<char, 4> kWeightMagic = {'G', 'N', 'S', 'W'};
constexpr std::uint16_t kWeightVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw IoError(path.string() + ": truncated checkpoint at offset " +
                  std::to_string(static_cast<long long>(in.gcount())));
  }
  return v;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  check_params(params, nullptr);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kWeightMagic.data(), kWeightMagic.size());
  put<std::uint16_t>(out, kWeightVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.num_layers()));
  for (int d : params.dims) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  for (int l = 0; l < params.num_layers(); ++l) {
    const Matrix& w = params.weights[l];
    for (Eigen::Index i = 0; i < w.size(); ++i) put<float>(out, static_cast<float>(w.data()[i]));
    const Vector& b = params.biases[l];
    for (Eigen::Index i = 0; i < b.size(); ++i) put<float>(out, static_cast<float>(b[i]));
  }
  if (!out) throw IoError("write failed for " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kWeightMagic) {
    throw IoError(path.string() + ": bad magic at offset 0 (expected GNSW)");
  }
  const auto version = get<std::uint16_t>(in, path);
  if (version != kWeightVersion) {
    throw IoError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  const auto layers = get<std::uint32_t>(in, path);
  std::vector<int> dims;
  for (std::uint32_t i = 0; i <= layers; ++i) dims.push_back(static_cast<int>(get<std::uint32_t>(in, path)));
  ModelParams p;
  p.dims = dims;
  for (std::uint32_t l = 0; l < layers; ++l) {
    Matrix w(2 * dims[l], dims[l + 1]);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = get<float>(in, path);
    Vector b(dims[l + 1]);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = get<float>(in, path);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  return p;
}

}  // namespace gns
