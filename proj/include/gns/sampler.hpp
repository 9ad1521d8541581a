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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gns/cache.hpp"
#include "gns/graph.hpp"
#include "gns/random.hpp"

namespace gns {

enum class Strategy { kNodeWise, kGns, kLadies };

// How per-edge importance weights are derived.
enum class WeightPolicy {
  kUniform,   // d / min(k, d), node-wise sampling
  kGnsPaper,  // reciprocal of p^C * k / min(k, |N_C|)
  kGnsExact,  // reciprocal of the marginal edge inclusion probability
  kLadies,    // reciprocal of the layer-wise selection probability
};

std::string_view to_string(Strategy s);
std::string_view to_string(WeightPolicy p);
Strategy parse_strategy(std::string_view s);
WeightPolicy parse_weight_policy(std::string_view s);

struct BlockEdge {
  std::int64_t src;  // index into LayerBlock::src_nodes
  std::int64_t dst;  // index into LayerBlock::dst_nodes
  double weight;
  bool cached;       // cache membership of src; only GNS blocks set it
};

// One layer of a mini-batch. src_nodes starts with dst_nodes in the same
// order, so dst index i and src index i name the same node. Edges are grouped
// by dst in increasing dst order.
struct LayerBlock {
  std::vector<NodeId> dst_nodes;
  std::vector<NodeId> src_nodes;
  std::vector<BlockEdge> edges;
  WeightPolicy policy = WeightPolicy::kUniform;
  // Per-dst bound on sampled in-edges; 0 means unbounded (LADIES).
  int fanout = 0;
};

// Blocks are ordered input layer first. blocks[l].dst_nodes equals
// blocks[l + 1].src_nodes, blocks.back().dst_nodes equals targets, and
// input_nodes equals blocks.front().src_nodes.
struct MiniBatch {
  std::vector<LayerBlock> blocks;
  std::vector<NodeId> targets;
  std::vector<NodeId> input_nodes;

  std::size_t num_layers() const { return blocks.size(); }
};

struct SamplerConfig {
  Strategy strategy = Strategy::kNodeWise;
  // Fanout per layer, output (target) layer first: {15, 10, 5} samples 15
  // neighbors per target, 10 per first-hop node, 5 at the input layer.
  std::vector<int> fanouts = {15, 10, 5};
  int layer_size = 256;  // LADIES nodes per layer
  double cache_fraction = 0.01;
  int cache_period = 1;  // epochs between cache resamples
  bool input_layer_cache_only = true;
  std::int64_t batch_size = 1000;
  std::uint64_t seed = 0;
  WeightPolicy gns_weights = WeightPolicy::kGnsPaper;
  CacheMode cache_mode = CacheMode::kAuto;
  CacheOptions cache_options;
  int exact_resamples = 64;

  int num_layers() const { return static_cast<int>(fanouts.size()); }
  std::int64_t cache_size(NodeId num_nodes) const;
  // Throws InvalidArgument on the first bad field.
  void validate() const;
};

// Identifies one mini-batch draw. Every random choice is derived from this key
// plus (layer, node id), so batches do not depend on which worker built them.
struct DrawKey {
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::uint64_t batch = 0;

  SplitMix64 stream(int layer, NodeId node, std::uint64_t salt = 0) const {
    return SplitMix64(derive_seed({seed, epoch, batch, static_cast<std::uint64_t>(layer),
                                   static_cast<std::uint64_t>(node), salt}));
  }
};

// Uniform subset of min(k, n) distinct indices from [0, n), ascending.
std::vector<std::int64_t> choose_without_replacement(std::int64_t n, std::int64_t k,
                                                     SplitMix64& rng);

// Node-wise sampling: min(k, deg) distinct neighbors per seed, weight
// deg / min(k, deg). Repeated seeds are rejected.
LayerBlock sample_neighbors_uniform(const Graph& g, std::span<const NodeId> seeds, int k,
                                    const DrawKey& key, int layer);

// Marginal probability, over cache draws and neighbor draws, that GNS picks
// neighbor u for node v. Indexed by CSR entry (g.indptr()[v] + position of u).
struct EdgeInclusionTable {
  int fanout = 0;
  bool cache_only = false;
  std::vector<double> prob;
};

// Rao-Blackwellized estimate: averages the exact conditional selection
// probability given each of `resamples` independent caches.
EdgeInclusionTable estimate_edge_inclusion(const Graph& g, const ProbVector& probs,
                                           std::int64_t cache_size, int k, bool cache_only,
                                           int resamples, std::uint64_t seed);

// Conditional probability that v picks u given the cache, with n_cached
// cached neighbors out of deg.
double gns_conditional_prob(bool u_cached, std::int64_t n_cached, std::int64_t deg, int k,
                            bool cache_only);

// 1 / (p_incl * k / min(k, n_cached)). Throws InvalidArgument when p_incl is 0.
double gns_weight_from_inclusion(double p_incl, int k, std::int64_t n_cached);
// Same, with p_incl = inclusion_prob(p_v, cache_size).
double gns_weight_paper(double p_v, std::int64_t cache_size, int k, std::int64_t n_cached);

// Cache-first sampling. Cached neighbors of each seed are drawn first; when
// fewer than k are available and cache_only is false, the rest are drawn
// uniformly from the uncached neighbors. `exact` is required for kGnsExact.
LayerBlock sample_neighbors_gns(const Graph& g, const CacheState& cache,
                                std::span<const NodeId> seeds, int k, bool cache_only,
                                WeightPolicy policy, const EdgeInclusionTable* exact,
                                const DrawKey& key, int layer);

// Layer-wise sampling. Each layer draws min(layer_size, |candidates|) nodes
// from the neighbors of the previous layer with probability proportional to
// the squared column norms of D^-1/2 (A + I) D^-1/2 restricted to those rows.
MiniBatch sample_ladies(const Graph& g, std::span<const NodeId> targets, int layer_size,
                        int num_layers, const DrawKey& key);

// Precomputed gns-exact tables, one per block (input layer first).
using ExactWeights = std::vector<EdgeInclusionTable>;

ExactWeights build_exact_weights(const Graph& g, const ProbVector& probs,
                                 const SamplerConfig& config);

MiniBatch build_minibatch(const Graph& g, const CacheState* cache,
                          std::span<const NodeId> targets, const SamplerConfig& config,
                          const DrawKey& key, const ExactWeights* exact = nullptr);

// Fraction of targets without any in-edge in the input-layer block.
double isolated_fraction(const MiniBatch& mb);

// Checks chaining, edge existence, fanout bounds, positive finite weights
// and, when a cache is given with a GNS policy, cache priority. Throws
// InvariantViolation.
void validate_minibatch(const Graph& g, const MiniBatch& mb,
                        const CacheState* cache = nullptr);

// Layer-by-layer text dump with weights, for golden comparisons.
std::string dump_minibatch(const MiniBatch& mb);

}  // namespace gns
