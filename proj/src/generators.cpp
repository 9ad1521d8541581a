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

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "gns/error.hpp"
#include "gns/graph.hpp"

namespace gns {

Graph generate_powerlaw(NodeId n, int attach, std::uint64_t seed) {
  if (attach < 1 || n <= attach) {
    throw InvalidArgument("powerlaw generator needs n > attach >= 1 (got n=" +
                          std::to_string(n) + ", attach=" + std::to_string(attach) + ")");
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * attach);
  // Every edge endpoint is appended here, so a uniform pick is a
  // degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * static_cast<std::size_t>(n) * attach);
  for (NodeId v = 1; v <= attach; ++v) {
    for (NodeId u = 0; u < v; ++u) {
      edges.push_back({v, u});
      endpoints.push_back(v);
      endpoints.push_back(u);
    }
  }
  std::vector<NodeId> chosen;
  for (NodeId v = attach + 1; v < n; ++v) {
    chosen.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<int>(chosen.size()) < attach) {
      const NodeId u = endpoints[pick(rng)];
      if (std::find(chosen.begin(), chosen.end(), u) == chosen.end()) chosen.push_back(u);
    }
    for (NodeId u : chosen) {
      edges.push_back({v, u});
      endpoints.push_back(v);
      endpoints.push_back(u);
    }
  }
  return build_csr(edges, n);
}

Graph generate_sbm(NodeId n, int num_blocks, double p_in, double p_out, std::uint64_t seed,
                   const SbmOptions& options) {
  if (n < 1 || num_blocks < 1 || num_blocks > n) {
    throw InvalidArgument("sbm needs 1 <= num_blocks <= n");
  }
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw InvalidArgument("sbm needs 0 <= p_out < p_in <= 1 (got p_in=" +
                          std::to_string(p_in) + ", p_out=" + std::to_string(p_out) + ")");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto block_of = [&](NodeId v) {
    return static_cast<std::int32_t>(v * num_blocks / n);
  };

  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = block_of(u) == block_of(v) ? p_in : p_out;
      if (p > 0.0 && unit(rng) < p) edges.push_back({u, v});
    }
  }
  Graph g = build_csr(edges, n);

  NodeData data;
  const auto un = static_cast<std::size_t>(n);
  data.labels.resize(un);
  for (NodeId v = 0; v < n; ++v) data.labels[v] = block_of(v);

  std::vector<NodeId> perm(un);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  data.train_mask.assign(un, 0);
  data.val_mask.assign(un, 0);
  data.test_mask.assign(un, 0);
  const std::size_t n_train = un / 2;
  const std::size_t n_val = un / 4;
  for (std::size_t i = 0; i < un; ++i) {
    if (i < n_train) {
      data.train_mask[perm[i]] = 1;
    } else if (i < n_train + n_val) {
      data.val_mask[perm[i]] = 1;
    } else {
      data.test_mask[perm[i]] = 1;
    }
  }

  if (options.feature_dim > 0) {
    const std::uint32_t dim = options.feature_dim;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> centroids(static_cast<std::size_t>(num_blocks) * dim);
    for (auto& c : centroids) c = options.centroid_scale * normal(rng);
    data.feature_dim = dim;
    data.features.resize(un * dim);
    for (NodeId v = 0; v < n; ++v) {
      const std::size_t b = static_cast<std::size_t>(block_of(v));
      for (std::uint32_t j = 0; j < dim; ++j) {
        data.features[v * dim + j] = static_cast<float>(centroids[b * dim + j] + normal(rng));
      }
    }
  }
  return g.with_data(std::move(data));
}

Graph with_random_features(const Graph& g, std::uint32_t feature_dim, std::uint64_t seed) {
  NodeData data = g.data();
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0F, 1.0F);
  data.feature_dim = feature_dim;
  data.features.resize(static_cast<std::size_t>(g.num_nodes()) * feature_dim);
  for (auto& x : data.features) x = normal(rng);
  return g.with_data(std::move(data));
}

}  // namespace gns
