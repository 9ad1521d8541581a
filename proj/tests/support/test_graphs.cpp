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

#include "test_graphs.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace gns::testing {

Graph erdos_renyi(NodeId n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return build_csr(edges, n);
}

Graph erdos_renyi_m(NodeId n, std::int64_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<NodeId> pick(0, n - 1);
  std::set<std::pair<NodeId, NodeId>> seen;
  while (static_cast<std::int64_t>(seen.size()) < m) {
    NodeId u = pick(rng);
    NodeId v = pick(rng);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    seen.insert({u, v});
  }
  std::vector<Edge> edges;
  for (const auto& [u, v] : seen) edges.push_back({u, v});
  return build_csr(edges, n);
}

Graph path_graph(NodeId n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return build_csr(edges, n);
}

Graph star_graph(NodeId leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return build_csr(edges, leaves + 1);
}

Graph triangle() {
  const std::vector<Edge> edges = {{0, 1}, {1, 2}, {0, 2}};
  return build_csr(edges, 3);
}

Graph with_task(const Graph& g, std::uint32_t feature_dim, int num_classes,
                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal(0.0F, 1.0F);
  std::uniform_int_distribution<int> label(0, num_classes - 1);
  const auto n = static_cast<std::size_t>(g.num_nodes());
  NodeData data;
  data.feature_dim = feature_dim;
  data.features.resize(n * feature_dim);
  for (float& f : data.features) f = normal(rng);
  data.labels.resize(n);
  for (auto& y : data.labels) y = label(rng);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  data.train_mask.assign(n, 0);
  data.val_mask.assign(n, 0);
  data.test_mask.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n / 2) {
      data.train_mask[order[i]] = 1;
    } else if (i < 3 * n / 4) {
      data.val_mask[order[i]] = 1;
    } else {
      data.test_mask[order[i]] = 1;
    }
  }
  return g.with_data(std::move(data));
}

std::vector<std::vector<int>> dense_adjacency(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) a[u][v] = 1;
  }
  return a;
}

}  // namespace gns::testing
