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
#include <memory>
#include <span>
#include <vector>

#include "gns/graph.hpp"

namespace gns {

// Non-negative per-node weights over V.
struct ProbVector {
  std::vector<double> values;
  bool normalized = false;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double sum() const;
  // Throws InvalidArgument when the total mass is zero.
  ProbVector& normalize();
};

// p_i = deg(i) / sum_k deg(k).
ProbVector degree_probs(const Graph& g);

// Short random-walk reachability from the training set. Starts from the
// uniform vector on `train_set` and applies `layers` steps of
// P <- (D A + I) P, where D = diag(min(fanout, deg) / deg) uses fanouts[step].
// The result is renormalized to sum 1.
ProbVector random_walk_probs(const Graph& g, const NodeSet& train_set,
                             std::span<const int> fanouts, int layers);

enum class CacheMode { kDegree, kRandomWalk, kAuto };

// kAuto picks degree-based probabilities when at least half of the nodes
// are training nodes and random-walk probabilities otherwise.
ProbVector cache_probs(const Graph& g, CacheMode mode, std::span<const int> fanouts,
                       int layers);

// Weighted sampling without replacement by exponential race: each node with
// positive weight draws key -ln(U)/w and the smallest keys win.
NodeSet sample_cache(const ProbVector& probs, std::int64_t cache_size, std::uint64_t seed);

// 1 - (1 - p)^|C|: probability of appearing in |C| with-replacement draws.
double inclusion_prob(double p, std::int64_t cache_size);

// Fraction of `resamples` independent caches that contain each node.
std::vector<double> empirical_inclusion(const ProbVector& probs, std::int64_t cache_size,
                                        int resamples, std::uint64_t seed);

enum class InclusionModel {
  kClosedForm,  // 1 - (1 - p)^|C|
  kEmpirical,   // frequency over resampled caches
};

struct CacheOptions {
  InclusionModel inclusion = InclusionModel::kClosedForm;
  int empirical_resamples = 64;
};

// One sampled cache plus the induced cached-neighbor index. Immutable after
// build_cache returns.
class CacheState {
 public:
  const NodeSet& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId v) const { return nodes_.contains(v); }
  double inclusion_prob(NodeId v) const { return inclusion_[static_cast<std::size_t>(v)]; }
  std::span<const double> inclusion_probs() const { return inclusion_; }

  // N(v) intersected with C, sorted ascending.
  std::span<const NodeId> cached_neighbors(NodeId v) const {
    return {cached_indices_.data() + cached_indptr_[v],
            static_cast<std::size_t>(cached_indptr_[v + 1] - cached_indptr_[v])};
  }
  std::span<const EdgeIndex> cached_indptr() const { return cached_indptr_; }
  std::span<const NodeId> cached_indices() const { return cached_indices_; }

  std::int64_t epoch() const { return epoch_; }
  const std::shared_ptr<const ProbVector>& source_probs() const { return probs_; }

  // Debug dump: "# epoch=<k> size=<n>" then one id per line.
  void export_text(const std::filesystem::path& path) const;

 private:
  friend std::shared_ptr<const CacheState> build_cache(const Graph&,
                                                       std::shared_ptr<const ProbVector>,
                                                       std::int64_t, std::int64_t,
                                                       std::uint64_t, const CacheOptions&);
  NodeSet nodes_;
  std::vector<double> inclusion_;
  std::vector<EdgeIndex> cached_indptr_;
  std::vector<NodeId> cached_indices_;
  std::int64_t epoch_ = 0;
  std::shared_ptr<const ProbVector> probs_;
};

// Builds CacheState by scanning only the cached nodes' adjacency: on an
// undirected graph, v's cached neighbors are the cache nodes that list v.
std::shared_ptr<const CacheState> build_cache(const Graph& g,
                                              std::shared_ptr<const ProbVector> probs,
                                              std::int64_t cache_size, std::int64_t epoch,
                                              std::uint64_t seed,
                                              const CacheOptions& options = {});

// Fraction of `nodes` with at least one neighbor in the cache.
double cache_coverage(const CacheState& cache, std::span<const NodeId> nodes);

}  // namespace gns
