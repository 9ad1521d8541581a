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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "gns/error.hpp"
#include "gns/sampler.hpp"
#include "test_graphs.hpp"

namespace gns {
namespace {

// Dense squared column norms of D^-1/2 (A + I) D^-1/2 over the rows in
// `rows`, restricted to neighbors of `rows` outside `rows`.
std::vector<double> dense_ladies_scores(const Graph& g, const std::vector<NodeId>& rows) {
  const auto n = g.num_nodes();
  const auto adj = testing::dense_adjacency(g);
  std::vector<double> norm(static_cast<std::size_t>(n), 0.0);
  const std::set<NodeId> row_set(rows.begin(), rows.end());
  for (NodeId u = 0; u < n; ++u) {
    if (row_set.count(u)) continue;
    bool candidate = false;
    double s = 0.0;
    for (NodeId v : rows) {
      if (adj[v][u] == 0.0) continue;
      candidate = true;
      const double m = adj[v][u] / std::sqrt((g.degree(v) + 1.0) * (g.degree(u) + 1.0));
      s += m * m;
    }
    if (candidate) norm[u] = s;
  }
  const double total = std::accumulate(norm.begin(), norm.end(), 0.0);
  for (double& x : norm) x /= total;
  return norm;
}

TEST(Ladies, TakesEveryCandidateWhenLayerIsLarge) {
  const Graph g = testing::erdos_renyi(40, 0.1, 1);
  const std::vector<NodeId> targets = {0, 1, 2};
  const MiniBatch mb = sample_ladies(g, targets, 1000, 1, DrawKey{});
  std::set<NodeId> expect(targets.begin(), targets.end());
  for (NodeId v : targets) expect.insert(g.neighbors(v).begin(), g.neighbors(v).end());
  EXPECT_EQ(std::set<NodeId>(mb.input_nodes.begin(), mb.input_nodes.end()), expect);
  for (const BlockEdge& e : mb.blocks[0].edges) EXPECT_EQ(e.weight, 1.0);
  std::size_t edges = 0;
  for (NodeId v : targets) edges += static_cast<std::size_t>(g.degree(v));
  EXPECT_EQ(mb.blocks[0].edges.size(), edges);
  validate_minibatch(g, mb);
}

TEST(Ladies, StarLeavesAreEquallyLikely) {
  const Graph g = testing::star_graph(8);
  const std::vector<NodeId> targets = {0};
  const int trials = 40000;
  std::vector<int> hits(9, 0);
  for (int t = 0; t < trials; ++t) {
    const MiniBatch mb = sample_ladies(g, targets, 2, 1, DrawKey{2, 0, static_cast<std::uint64_t>(t)});
    ASSERT_EQ(mb.input_nodes.size(), 3U);
    for (std::size_t i = 1; i < mb.input_nodes.size(); ++i) ++hits[mb.input_nodes[i]];
  }
  const double sigma = std::sqrt(trials * 0.25 * 0.75);
  for (int u = 1; u <= 8; ++u) EXPECT_NEAR(hits[u], trials * 0.25, 4.5 * sigma);
}

TEST(Ladies, SingleDrawMatchesDenseColumnNorms) {
  const Graph g = testing::erdos_renyi(20, 0.25, 3);
  const std::vector<NodeId> rows = {0, 1, 2, 3};
  const auto q = dense_ladies_scores(g, rows);
  const int trials = 50000;
  std::vector<int> hits(20, 0);
  for (int t = 0; t < trials; ++t) {
    const MiniBatch mb = sample_ladies(g, rows, 1, 1, DrawKey{4, 0, static_cast<std::uint64_t>(t)});
    ASSERT_EQ(mb.input_nodes.size(), rows.size() + 1);
    ++hits[mb.input_nodes.back()];
  }
  for (NodeId u = 0; u < 20; ++u) {
    const double sigma = std::sqrt(trials * q[u] * (1 - q[u]));
    EXPECT_NEAR(hits[u], trials * q[u], 3.5 * sigma + 1) << "node " << u;
  }
}

TEST(Ladies, WeightsAreInverseInclusion) {
  const Graph g = testing::erdos_renyi(30, 0.2, 5);
  const std::vector<NodeId> rows = {0, 1};
  const auto q = dense_ladies_scores(g, rows);
  const MiniBatch mb = sample_ladies(g, rows, 2, 1, DrawKey{6, 0, 0});
  const LayerBlock& b = mb.blocks[0];
  for (const BlockEdge& e : b.edges) {
    const NodeId u = b.src_nodes[e.src];
    if (std::find(rows.begin(), rows.end(), u) != rows.end()) {
      EXPECT_EQ(e.weight, 1.0);
    } else {
      EXPECT_NEAR(e.weight, 1.0 / inclusion_prob(q[u], 2), 1e-12);
    }
  }
}

TEST(Ladies, LayersChainAndStayDeterministic) {
  const Graph g = generate_powerlaw(500, 3, 7);
  std::vector<NodeId> targets(25);
  std::iota(targets.begin(), targets.end(), 200);
  const MiniBatch a = sample_ladies(g, targets, 32, 3, DrawKey{8, 1, 2});
  const MiniBatch b = sample_ladies(g, targets, 32, 3, DrawKey{8, 1, 2});
  EXPECT_EQ(dump_minibatch(a), dump_minibatch(b));
  ASSERT_EQ(a.blocks.size(), 3U);
  for (std::size_t l = 0; l + 1 < a.blocks.size(); ++l) {
    EXPECT_EQ(a.blocks[l].dst_nodes, a.blocks[l + 1].src_nodes);
    EXPECT_LE(a.blocks[l].src_nodes.size(), a.blocks[l].dst_nodes.size() + 32);
  }
  validate_minibatch(g, a);
}

TEST(Ladies, RejectsBadSizes) {
  const Graph g = testing::triangle();
  const std::vector<NodeId> targets = {0};
  EXPECT_THROW(sample_ladies(g, targets, 0, 1, DrawKey{}), InvalidArgument);
  EXPECT_THROW(sample_ladies(g, targets, 1, 0, DrawKey{}), InvalidArgument);
}

}  // namespace
}  // namespace gns
