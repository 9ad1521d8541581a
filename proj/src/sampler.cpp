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

#include "gns/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "gns/error.hpp"

namespace gns {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kNodeWise:
      return "ns";
    case Strategy::kGns:
      return "gns";
    case Strategy::kLadies:
      return "ladies";
  }
  return "?";
}

std::string_view to_string(WeightPolicy p) {
  switch (p) {
    case WeightPolicy::kUniform:
      return "uniform";
    case WeightPolicy::kGnsPaper:
      return "gns-paper";
    case WeightPolicy::kGnsExact:
      return "gns-exact";
    case WeightPolicy::kLadies:
      return "ladies";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "ns" || s == "NS") return Strategy::kNodeWise;
  if (s == "gns" || s == "GNS") return Strategy::kGns;
  if (s == "ladies" || s == "LADIES") return Strategy::kLadies;
  throw InvalidArgument("unknown strategy '" + std::string(s) + "' (ns|gns|ladies)");
}

WeightPolicy parse_weight_policy(std::string_view s) {
  if (s == "uniform") return WeightPolicy::kUniform;
  if (s == "gns-paper") return WeightPolicy::kGnsPaper;
  if (s == "gns-exact") return WeightPolicy::kGnsExact;
  if (s == "ladies") return WeightPolicy::kLadies;
  throw InvalidArgument("unknown weight policy '" + std::string(s) +
                        "' (uniform|gns-paper|gns-exact|ladies)");
}

std::int64_t SamplerConfig::cache_size(NodeId num_nodes) const {
  if (cache_fraction <= 0.0) return 0;
  const auto c = static_cast<std::int64_t>(std::llround(cache_fraction * num_nodes));
  return std::clamp<std::int64_t>(c, 1, num_nodes);
}

void SamplerConfig::validate() const {
  if (fanouts.empty()) throw InvalidArgument("fanouts must list at least one layer");
  for (int k : fanouts) {
    if (k < 1) throw InvalidArgument("every fanout must be >= 1");
  }
  if (strategy == Strategy::kLadies && layer_size < 1) {
    throw InvalidArgument("layer_size must be >= 1");
  }
  if (strategy == Strategy::kGns && !(cache_fraction > 0.0 && cache_fraction <= 1.0)) {
    throw InvalidArgument("cache_fraction must be in (0, 1]");
  }
  if (cache_period < 1) throw InvalidArgument("cache period P must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (strategy == Strategy::kGns && gns_weights != WeightPolicy::kGnsPaper &&
      gns_weights != WeightPolicy::kGnsExact) {
    throw InvalidArgument("GNS needs weight policy gns-paper or gns-exact");
  }
  if (exact_resamples < 1) throw InvalidArgument("exact_resamples must be >= 1");
}

std::vector<std::int64_t> choose_without_replacement(std::int64_t n, std::int64_t k,
                                                     SplitMix64& rng) {
  k = std::min(k, n);
  std::vector<std::int64_t> out;
  if (k <= 0) return out;
  out.reserve(static_cast<std::size_t>(k));
  if (k == n) {
    for (std::int64_t i = 0; i < n; ++i) out.push_back(i);
    return out;
  }
  // Floyd's algorithm: one draw per selected element.
  if (k <= 32) {
    for (std::int64_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
      if (std::find(out.begin(), out.end(), t) == out.end()) {
        out.push_back(t);
      } else {
        out.push_back(j);
      }
    }
  } else {
    std::unordered_set<std::int64_t> seen;
    seen.reserve(static_cast<std::size_t>(2 * k));
    for (std::int64_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
      const std::int64_t pick = seen.insert(t).second ? t : (seen.insert(j), j);
      out.push_back(pick);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Maps node ids to src positions. Starts with the dst nodes so the dst
// prefix invariant holds.
class SrcBuilder {
 public:
  SrcBuilder(std::span<const NodeId> dst, LayerBlock& block) : block_(block) {
    block_.dst_nodes.assign(dst.begin(), dst.end());
    block_.src_nodes.assign(dst.begin(), dst.end());
    index_.reserve(dst.size() * 4);
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (!index_.emplace(dst[i], static_cast<std::int64_t>(i)).second) {
        throw InvalidArgument("seed node " + std::to_string(dst[i]) + " listed twice");
      }
    }
  }

  std::int64_t add(NodeId v) {
    auto [it, inserted] = index_.emplace(v, static_cast<std::int64_t>(block_.src_nodes.size()));
    if (inserted) block_.src_nodes.push_back(v);
    return it->second;
  }

  std::int64_t find(NodeId v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
  }

 private:
  LayerBlock& block_;
  std::unordered_map<NodeId, std::int64_t> index_;
};

}  // namespace

LayerBlock sample_neighbors_uniform(const Graph& g, std::span<const NodeId> seeds, int k,
                                    const DrawKey& key, int layer) {
  if (k < 1) throw InvalidArgument("fanout must be >= 1");
  LayerBlock block;
  block.policy = WeightPolicy::kUniform;
  block.fanout = k;
  SrcBuilder src(seeds, block);
  for (std::size_t d = 0; d < seeds.size(); ++d) {
    const NodeId v = seeds[d];
    const auto nbrs = g.neighbors(v);
    const auto deg = static_cast<std::int64_t>(nbrs.size());
    if (deg == 0) continue;
    SplitMix64 rng = key.stream(layer, v);
    const auto picks = choose_without_replacement(deg, k, rng);
    const double w = static_cast<double>(deg) / static_cast<double>(picks.size());
    for (std::int64_t p : picks) {
      block.edges.push_back({src.add(nbrs[p]), static_cast<std::int64_t>(d), w, false});
    }
  }
  return block;
}

double gns_conditional_prob(bool u_cached, std::int64_t n_cached, std::int64_t deg, int k,
                            bool cache_only) {
  if (u_cached) {
    return static_cast<double>(std::min<std::int64_t>(k, n_cached)) /
           static_cast<double>(n_cached);
  }
  if (cache_only || n_cached >= k) return 0.0;
  const std::int64_t uncached = deg - n_cached;
  return static_cast<double>(std::min<std::int64_t>(k - n_cached, uncached)) /
         static_cast<double>(uncached);
}

EdgeInclusionTable estimate_edge_inclusion(const Graph& g, const ProbVector& probs,
                                           std::int64_t cache_size, int k, bool cache_only,
                                           int resamples, std::uint64_t seed) {
  if (resamples < 1) throw InvalidArgument("resamples must be >= 1");
  EdgeInclusionTable table;
  table.fanout = k;
  table.cache_only = cache_only;
  table.prob.assign(static_cast<std::size_t>(g.num_entries()), 0.0);
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<std::int64_t> n_cached(n);
  for (int r = 0; r < resamples; ++r) {
    const NodeSet cache = sample_cache(
        probs, cache_size, derive_seed({seed, 0x6578616374ULL, static_cast<std::uint64_t>(r)}));
    std::fill(n_cached.begin(), n_cached.end(), 0);
    for (NodeId c : cache.ids()) {
      for (NodeId v : g.neighbors(c)) ++n_cached[v];
    }
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      const auto deg = g.degree(v);
      const EdgeIndex base = g.indptr()[v];
      for (std::int64_t i = 0; i < deg; ++i) {
        const bool cached = cache.contains(g.indices()[base + i]);
        table.prob[base + i] += gns_conditional_prob(cached, n_cached[v], deg, k, cache_only);
      }
    }
  }
  for (double& p : table.prob) p /= resamples;
  return table;
}

double gns_weight_from_inclusion(double p_incl, int k, std::int64_t n_cached) {
  if (!(p_incl > 0.0)) {
    throw InvalidArgument("cannot weight a neighbor whose cache inclusion probability is 0");
  }
  if (k < 1 || n_cached < 1) throw InvalidArgument("need k >= 1 and n_cached >= 1");
  const double coeff = p_incl * static_cast<double>(k) /
                       static_cast<double>(std::min<std::int64_t>(k, n_cached));
  return 1.0 / coeff;
}

double gns_weight_paper(double p_v, std::int64_t cache_size, int k, std::int64_t n_cached) {
  return gns_weight_from_inclusion(inclusion_prob(p_v, cache_size), k, n_cached);
}

LayerBlock sample_neighbors_gns(const Graph& g, const CacheState& cache,
                                std::span<const NodeId> seeds, int k, bool cache_only,
                                WeightPolicy policy, const EdgeInclusionTable* exact,
                                const DrawKey& key, int layer) {
  if (k < 1) throw InvalidArgument("fanout must be >= 1");
  if (policy == WeightPolicy::kGnsExact &&
      (exact == nullptr || exact->fanout != k || exact->cache_only != cache_only ||
       static_cast<EdgeIndex>(exact->prob.size()) != g.num_entries())) {
    throw InvalidArgument("gns-exact weights need a matching edge inclusion table");
  }
  if (policy != WeightPolicy::kGnsExact && policy != WeightPolicy::kGnsPaper) {
    throw InvalidArgument("GNS sampling needs weight policy gns-paper or gns-exact");
  }
  LayerBlock block;
  block.policy = policy;
  block.fanout = k;
  SrcBuilder src(seeds, block);
  std::vector<NodeId> uncached;
  for (std::size_t d = 0; d < seeds.size(); ++d) {
    const NodeId v = seeds[d];
    const auto nbrs = g.neighbors(v);
    const auto deg = static_cast<std::int64_t>(nbrs.size());
    const auto in_cache = cache.cached_neighbors(v);
    const auto n_cached = static_cast<std::int64_t>(in_cache.size());
    if (deg == 0) continue;
    SplitMix64 rng = key.stream(layer, v);

    auto exact_weight = [&](NodeId u, bool u_cached) {
      const double p = exact->prob[g.find_entry(v, u)];
      // A pick the table never saw in its resamples falls back to the
      // conditional probability under the current cache.
      const double q = p > 0.0 ? p : gns_conditional_prob(u_cached, n_cached, deg, k, cache_only);
      return 1.0 / q;
    };

    const auto cached_picks = choose_without_replacement(n_cached, k, rng);
    for (std::int64_t p : cached_picks) {
      const NodeId u = in_cache[p];
      const double w = policy == WeightPolicy::kGnsExact
                           ? exact_weight(u, true)
                           : gns_weight_from_inclusion(cache.inclusion_prob(u), k, n_cached);
      block.edges.push_back({src.add(u), static_cast<std::int64_t>(d), w, true});
    }
    const auto taken = static_cast<std::int64_t>(cached_picks.size());
    if (cache_only || taken >= k || deg == n_cached) continue;

    uncached.clear();
    std::set_difference(nbrs.begin(), nbrs.end(), in_cache.begin(), in_cache.end(),
                        std::back_inserter(uncached));
    const auto fill = choose_without_replacement(static_cast<std::int64_t>(uncached.size()),
                                                 k - taken, rng);
    const double fill_weight =
        static_cast<double>(uncached.size()) / static_cast<double>(fill.size());
    for (std::int64_t p : fill) {
      const NodeId u = uncached[p];
      const double w = policy == WeightPolicy::kGnsExact ? exact_weight(u, false) : fill_weight;
      block.edges.push_back({src.add(u), static_cast<std::int64_t>(d), w, false});
    }
  }
  return block;
}

MiniBatch sample_ladies(const Graph& g, std::span<const NodeId> targets, int layer_size,
                        int num_layers, const DrawKey& key) {
  if (layer_size < 1) throw InvalidArgument("layer_size must be >= 1");
  if (num_layers < 1) throw InvalidArgument("num_layers must be >= 1");
  MiniBatch mb;
  mb.targets.assign(targets.begin(), targets.end());
  mb.blocks.resize(static_cast<std::size_t>(num_layers));
  std::vector<NodeId> current(targets.begin(), targets.end());
  std::unordered_map<NodeId, double> score;
  for (int layer = num_layers - 1; layer >= 0; --layer) {
    LayerBlock& block = mb.blocks[static_cast<std::size_t>(layer)];
    block.policy = WeightPolicy::kLadies;
    block.fanout = 0;
    SrcBuilder src(current, block);

    // Squared column norms of the normalized adjacency over the rows in
    // `current`, for every neighbor not already in the layer.
    score.clear();
    for (NodeId v : current) {
      const double dv = static_cast<double>(g.degree(v)) + 1.0;
      for (NodeId u : g.neighbors(v)) {
        if (src.find(u) >= 0) continue;
        const double du = static_cast<double>(g.degree(u)) + 1.0;
        score[u] += 1.0 / (dv * du);
      }
    }
    std::vector<std::pair<NodeId, double>> candidates(score.begin(), score.end());
    std::sort(candidates.begin(), candidates.end());
    double total = 0.0;
    for (const auto& c : candidates) total += c.second;

    const auto take = std::min<std::size_t>(static_cast<std::size_t>(layer_size),
                                            candidates.size());
    std::unordered_map<NodeId, double> selected_weight;
    if (take == candidates.size()) {
      for (const auto& c : candidates) selected_weight.emplace(c.first, 1.0);
    } else {
      std::vector<std::pair<double, std::size_t>> keyed(candidates.size());
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        SplitMix64 rng = key.stream(layer, candidates[i].first, 0x6c6164ULL);
        keyed[i] = {-std::log(rng.uniform_open()) / candidates[i].second, i};
      }
      std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take),
                       keyed.end());
      for (std::size_t j = 0; j < take; ++j) {
        const auto& c = candidates[keyed[j].second];
        const double q = c.second / total;
        const double incl = inclusion_prob(q, static_cast<std::int64_t>(take));
        selected_weight.emplace(c.first, 1.0 / incl);
      }
    }
    std::vector<NodeId> picked;
    picked.reserve(selected_weight.size());
    for (const auto& [u, w] : selected_weight) picked.push_back(u);
    std::sort(picked.begin(), picked.end());
    for (NodeId u : picked) src.add(u);

    // Every graph edge between the new src set and the dst set.
    for (std::size_t d = 0; d < current.size(); ++d) {
      for (NodeId u : g.neighbors(current[d])) {
        const std::int64_t s = src.find(u);
        if (s < 0) continue;
        const auto it = selected_weight.find(u);
        const double w = it == selected_weight.end() ? 1.0 : it->second;
        block.edges.push_back({s, static_cast<std::int64_t>(d), w, false});
      }
    }
    current = block.src_nodes;
  }
  mb.input_nodes = mb.blocks.front().src_nodes;
  return mb;
}

ExactWeights build_exact_weights(const Graph& g, const ProbVector& probs,
                                 const SamplerConfig& config) {
  ExactWeights tables;
  const int layers = config.num_layers();
  const std::int64_t cache_size = config.cache_size(g.num_nodes());
  for (int layer = 0; layer < layers; ++layer) {
    const int k = config.fanouts[static_cast<std::size_t>(layers - 1 - layer)];
    const bool cache_only = layer == 0 && config.input_layer_cache_only;
    tables.push_back(estimate_edge_inclusion(g, probs, cache_size, k, cache_only,
                                             config.exact_resamples,
                                             derive_seed({config.seed, 0x7462ULL})));
  }
  return tables;
}

MiniBatch build_minibatch(const Graph& g, const CacheState* cache,
                          std::span<const NodeId> targets, const SamplerConfig& config,
                          const DrawKey& key, const ExactWeights* exact) {
  config.validate();
  const int layers = config.num_layers();
  if (config.strategy == Strategy::kLadies) {
    return sample_ladies(g, targets, config.layer_size, layers, key);
  }
  if (config.strategy == Strategy::kGns && cache == nullptr) {
    throw InvalidArgument("GNS sampling needs a cache");
  }
  if (config.strategy == Strategy::kGns && config.gns_weights == WeightPolicy::kGnsExact &&
      (exact == nullptr || static_cast<int>(exact->size()) != layers)) {
    throw InvalidArgument("gns-exact sampling needs one edge inclusion table per layer");
  }
  MiniBatch mb;
  mb.targets.assign(targets.begin(), targets.end());
  mb.blocks.resize(static_cast<std::size_t>(layers));
  std::vector<NodeId> current(targets.begin(), targets.end());
  for (int layer = layers - 1; layer >= 0; --layer) {
    const int k = config.fanouts[static_cast<std::size_t>(layers - 1 - layer)];
    LayerBlock block;
    if (config.strategy == Strategy::kNodeWise) {
      block = sample_neighbors_uniform(g, current, k, key, layer);
    } else {
      const bool cache_only = layer == 0 && config.input_layer_cache_only;
      const EdgeInclusionTable* table =
          exact != nullptr && config.gns_weights == WeightPolicy::kGnsExact
              ? &(*exact)[static_cast<std::size_t>(layer)]
              : nullptr;
      block = sample_neighbors_gns(g, *cache, current, k, cache_only, config.gns_weights, table,
                                   key, layer);
    }
    current = block.src_nodes;
    mb.blocks[static_cast<std::size_t>(layer)] = std::move(block);
  }
  mb.input_nodes = mb.blocks.front().src_nodes;
  return mb;
}

double isolated_fraction(const MiniBatch& mb) {
  if (mb.targets.empty() || mb.blocks.empty()) return 0.0;
  // Targets occupy the leading dst positions of every block.
  const auto t = static_cast<std::int64_t>(mb.targets.size());
  std::vector<std::uint8_t> has_edge(mb.targets.size(), 0);
  for (const BlockEdge& e : mb.blocks.front().edges) {
    if (e.dst < t && mb.blocks.front().src_nodes[e.src] != mb.blocks.front().dst_nodes[e.dst]) {
      has_edge[e.dst] = 1;
    }
  }
  const auto connected = std::count(has_edge.begin(), has_edge.end(), 1);
  return static_cast<double>(t - connected) / static_cast<double>(t);
}

void validate_minibatch(const Graph& g, const MiniBatch& mb, const CacheState* cache) {
  auto fail = [](const std::string& what) { throw InvariantViolation("minibatch: " + what); };
  if (mb.blocks.empty()) fail("no blocks");
  if (mb.blocks.back().dst_nodes != mb.targets) fail("last block dst differs from targets");
  if (mb.input_nodes != mb.blocks.front().src_nodes) fail("input_nodes differ from block 0 src");
  for (std::size_t l = 0; l < mb.blocks.size(); ++l) {
    const LayerBlock& b = mb.blocks[l];
    const std::string where = "block " + std::to_string(l) + ": ";
    if (l + 1 < mb.blocks.size() && b.dst_nodes != mb.blocks[l + 1].src_nodes) {
      fail(where + "dst set is not the next block's src set");
    }
    if (b.src_nodes.size() < b.dst_nodes.size() ||
        !std::equal(b.dst_nodes.begin(), b.dst_nodes.end(), b.src_nodes.begin())) {
      fail(where + "src does not start with dst");
    }
    std::unordered_set<NodeId> unique_src(b.src_nodes.begin(), b.src_nodes.end());
    if (unique_src.size() != b.src_nodes.size()) fail(where + "duplicate src node");
    std::vector<int> per_dst(b.dst_nodes.size(), 0);
    std::int64_t last_dst = -1;
    std::unordered_set<std::int64_t> seen_src_for_dst;
    for (const BlockEdge& e : b.edges) {
      if (e.src < 0 || e.src >= static_cast<std::int64_t>(b.src_nodes.size()) || e.dst < 0 ||
          e.dst >= static_cast<std::int64_t>(b.dst_nodes.size())) {
        fail(where + "edge index out of range");
      }
      if (e.dst < last_dst) fail(where + "edges not grouped by dst");
      if (e.dst != last_dst) seen_src_for_dst.clear();
      last_dst = e.dst;
      if (!seen_src_for_dst.insert(e.src).second) fail(where + "duplicate edge");
      const NodeId s = b.src_nodes[e.src];
      const NodeId d = b.dst_nodes[e.dst];
      if (!g.has_edge(d, s)) {
        fail(where + "edge (" + std::to_string(s) + "," + std::to_string(d) + ") not in graph");
      }
      if (!(e.weight > 0.0) || !std::isfinite(e.weight)) fail(where + "non-positive weight");
      const bool cache_aware =
          b.policy == WeightPolicy::kGnsPaper || b.policy == WeightPolicy::kGnsExact;
      if (cache != nullptr && cache_aware && e.cached != cache->contains(s)) {
        fail(where + "wrong cached flag");
      }
      ++per_dst[e.dst];
    }
    if (b.fanout > 0) {
      for (std::size_t d = 0; d < per_dst.size(); ++d) {
        if (per_dst[d] > b.fanout) fail(where + "fanout exceeded");
      }
    }
    const bool gns = b.policy == WeightPolicy::kGnsPaper || b.policy == WeightPolicy::kGnsExact;
    if (gns && cache != nullptr) {
      std::vector<int> uncached(b.dst_nodes.size(), 0);
      for (const BlockEdge& e : b.edges) uncached[e.dst] += e.cached ? 0 : 1;
      for (std::size_t d = 0; d < b.dst_nodes.size(); ++d) {
        const auto nc = static_cast<int>(cache->cached_neighbors(b.dst_nodes[d]).size());
        if (nc >= b.fanout && uncached[d] > 0) fail(where + "cache priority violated");
      }
    }
  }
}

std::string dump_minibatch(const MiniBatch& mb) {
  std::ostringstream out;
  out.precision(17);
  out << "targets";
  for (NodeId v : mb.targets) out << ' ' << v;
  out << '\n';
  for (std::size_t l = 0; l < mb.blocks.size(); ++l) {
    const LayerBlock& b = mb.blocks[l];
    out << "block " << l << " policy=" << to_string(b.policy) << " fanout=" << b.fanout
        << " dst=" << b.dst_nodes.size() << " src=" << b.src_nodes.size() << '\n';
    for (const BlockEdge& e : b.edges) {
      out << b.src_nodes[e.src] << ' ' << b.dst_nodes[e.dst] << ' ' << e.weight
          << (e.cached ? " c" : "") << '\n';
    }
  }
  return out.str();
}

}  // namespace gns
