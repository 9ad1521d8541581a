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

#include "gns/cache.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "gns/error.hpp"
#include "gns/random.hpp"

namespace gns {

double ProbVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

ProbVector& ProbVector::normalize() {
  const double total = sum();
  if (!(total > 0.0)) throw InvalidArgument("cannot normalize a zero-mass ProbVector");
  for (double& v : values) v /= total;
  normalized = true;
  return *this;
}

ProbVector degree_probs(const Graph& g) {
  if (g.num_entries() == 0) {
    throw InvalidArgument("degree_probs: graph has no edges (total degree is zero)");
  }
  ProbVector p;
  p.values.resize(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId v = 0; v < g.num_nodes(); ++v) p.values[v] = static_cast<double>(g.degree(v));
  p.normalize();
  return p;
}

ProbVector random_walk_probs(const Graph& g, const NodeSet& train_set,
                             std::span<const int> fanouts, int layers) {
  if (layers < 1) throw InvalidArgument("random_walk_probs: layers must be >= 1");
  if (train_set.empty()) throw InvalidArgument("random_walk_probs: empty train set");
  if (static_cast<int>(fanouts.size()) < layers) {
    throw InvalidArgument("random_walk_probs: need one fanout per layer");
  }
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<double> cur(n, 0.0);
  const double start = 1.0 / static_cast<double>(train_set.size());
  for (NodeId v : train_set.ids()) cur[v] = start;
  std::vector<double> next(n);
  for (int step = 0; step < layers; ++step) {
    const auto k = static_cast<double>(fanouts[step]);
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
      const auto deg = static_cast<double>(g.degree(i));
      double spread = 0.0;
      if (deg > 0) {
        for (NodeId j : g.neighbors(i)) spread += cur[j];
        spread *= std::min(k, deg) / deg;
      }
      next[i] = cur[i] + spread;
    }
    std::swap(cur, next);
  }
  ProbVector p{std::move(cur), false};
  p.normalize();
  return p;
}

ProbVector cache_probs(const Graph& g, CacheMode mode, std::span<const int> fanouts,
                       int layers) {
  const auto train = g.train_nodes();
  if (mode == CacheMode::kAuto) {
    mode = 2 * train.size() >= static_cast<std::size_t>(g.num_nodes()) ? CacheMode::kDegree
                                                                         : CacheMode::kRandomWalk;
  }
  if (mode == CacheMode::kDegree) return degree_probs(g);
  return random_walk_probs(g, NodeSet(train, g.num_nodes()), fanouts, layers);
}

NodeSet sample_cache(const ProbVector& probs, std::int64_t cache_size, std::uint64_t seed) {
  if (cache_size < 0) throw InvalidArgument("sample_cache: cache_size must be >= 0");
  const auto n = static_cast<NodeId>(probs.size());
  SplitMix64 rng(derive_seed({seed, 0x636163686bULL}));
  std::vector<std::pair<double, NodeId>> keyed;
  keyed.reserve(probs.size());
  for (NodeId v = 0; v < n; ++v) {
    const double w = probs.values[v];
    const double u = rng.uniform_open();
    if (w > 0.0) keyed.emplace_back(-std::log(u) / w, v);
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(cache_size), keyed.size());
  std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take),
                   keyed.end());
  std::vector<NodeId> ids(take);
  for (std::size_t i = 0; i < take; ++i) ids[i] = keyed[i].second;
  return NodeSet(std::move(ids), n);
}

double inclusion_prob(double p, std::int64_t cache_size) {
  if (p <= 0.0 || cache_size <= 0) return 0.0;
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(cache_size) * std::log1p(-p));
}

std::vector<double> empirical_inclusion(const ProbVector& probs, std::int64_t cache_size,
                                        int resamples, std::uint64_t seed) {
  if (resamples < 1) throw InvalidArgument("empirical_inclusion: resamples must be >= 1");
  std::vector<double> freq(probs.size(), 0.0);
  for (int r = 0; r < resamples; ++r) {
    const NodeSet c = sample_cache(probs, cache_size, derive_seed({seed, 0x656d70ULL,
                                                                   static_cast<std::uint64_t>(r)}));
    for (NodeId v : c.ids()) freq[v] += 1.0;
  }
  for (double& f : freq) f /= resamples;
  return freq;
}

std::shared_ptr<const CacheState> build_cache(const Graph& g,
                                              std::shared_ptr<const ProbVector> probs,
                                              std::int64_t cache_size, std::int64_t epoch,
                                              std::uint64_t seed, const CacheOptions& options) {
  if (!probs || static_cast<NodeId>(probs->size()) != g.num_nodes()) {
    throw InvalidArgument("build_cache: probability vector does not match the graph");
  }
  auto state = std::make_shared<CacheState>();
  state->nodes_ = sample_cache(*probs, cache_size, seed);
  state->epoch_ = epoch;

  const auto n = static_cast<std::size_t>(g.num_nodes());
  const auto support = static_cast<std::size_t>(
      std::count_if(probs->values.begin(), probs->values.end(), [](double w) { return w > 0.0; }));
  if (state->size() == support) {
    // Every positive-mass node is in every draw, so inclusion is certain.
    state->inclusion_.resize(n);
    for (std::size_t v = 0; v < n; ++v) state->inclusion_[v] = probs->values[v] > 0.0 ? 1.0 : 0.0;
  } else if (options.inclusion == InclusionModel::kEmpirical) {
    state->inclusion_ = empirical_inclusion(*probs, static_cast<std::int64_t>(state->size()),
                                            options.empirical_resamples, seed);
  } else {
    state->inclusion_.resize(n);
    const auto c = static_cast<std::int64_t>(state->size());
    for (std::size_t v = 0; v < n; ++v) state->inclusion_[v] = inclusion_prob(probs->values[v], c);
  }

  std::vector<EdgeIndex>& indptr = state->cached_indptr_;
  indptr.assign(n + 1, 0);
  for (NodeId c : state->nodes_.ids()) {
    for (NodeId v : g.neighbors(c)) ++indptr[v + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) indptr[i] += indptr[i - 1];
  std::vector<EdgeIndex> cursor(indptr.begin(), indptr.end() - 1);
  state->cached_indices_.resize(static_cast<std::size_t>(indptr.back()));
  // Cache ids are visited in increasing order, so every list comes out sorted.
  for (NodeId c : state->nodes_.ids()) {
    for (NodeId v : g.neighbors(c)) state->cached_indices_[cursor[v]++] = c;
  }
  state->probs_ = std::move(probs);
  return state;
}

void CacheState::export_text(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "# epoch=" << epoch_ << " size=" << nodes_.size() << "\n";
  for (NodeId v : nodes_.ids()) out << v << "\n";
  if (!out) throw IoError("write failed for " + path.string());
}

double cache_coverage(const CacheState& cache, std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t covered = 0;
  for (NodeId v : nodes) {
    if (!cache.cached_neighbors(v).empty()) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(nodes.size());
}

}  // namespace gns
