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
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gns {

using NodeId = std::int64_t;
using EdgeIndex = std::int64_t;

struct Edge {
  NodeId u;
  NodeId v;
};

// Per-node payload carried alongside the adjacency.
struct NodeData {
  std::uint32_t feature_dim = 0;
  std::vector<float> features;  // num_nodes x feature_dim, row-major
  std::vector<std::int32_t> labels;
  std::vector<std::uint8_t> train_mask;
  std::vector<std::uint8_t> val_mask;
  std::vector<std::uint8_t> test_mask;

  bool has_features() const { return feature_dim > 0; }
  bool has_labels() const { return !labels.empty(); }
  bool has_masks() const { return !train_mask.empty(); }
};

// Immutable undirected graph in CSR form. Neighbor lists are sorted ascending
// and free of duplicates and self loops. Safe for concurrent reads.
class Graph {
 public:
  Graph() : indptr_{0} {}

  // Validates every CSR invariant and throws InvariantViolation otherwise.
  Graph(std::vector<EdgeIndex> indptr, std::vector<NodeId> indices,
        NodeData data = {});

  NodeId num_nodes() const { return static_cast<NodeId>(indptr_.size()) - 1; }
  // Directed entry count, i.e. twice the undirected edge count.
  EdgeIndex num_entries() const { return static_cast<EdgeIndex>(indices_.size()); }
  EdgeIndex num_undirected_edges() const { return num_entries() / 2; }

  std::int64_t degree(NodeId v) const { return indptr_[v + 1] - indptr_[v]; }
  std::int64_t max_degree() const;

  std::span<const NodeId> neighbors(NodeId v) const {
    return {indices_.data() + indptr_[v], static_cast<std::size_t>(degree(v))};
  }
  bool has_edge(NodeId u, NodeId v) const;
  // Offset of v inside u's neighbor list (global entry index), or -1.
  EdgeIndex find_entry(NodeId u, NodeId v) const;

  std::span<const EdgeIndex> indptr() const { return indptr_; }
  std::span<const NodeId> indices() const { return indices_; }

  const NodeData& data() const { return data_; }
  std::uint32_t feature_dim() const { return data_.feature_dim; }
  std::span<const float> features(NodeId v) const {
    return {data_.features.data() + static_cast<std::size_t>(v) * data_.feature_dim,
            data_.feature_dim};
  }

  // Copy with the node payload replaced; payload is validated against the
  // adjacency.
  Graph with_data(NodeData data) const;

  // Nodes in the training mask, or every node when no masks are present.
  std::vector<NodeId> train_nodes() const;
  std::vector<NodeId> val_nodes() const;
  std::vector<NodeId> test_nodes() const;

  bool operator==(const Graph& other) const;

 private:
  std::vector<EdgeIndex> indptr_;
  std::vector<NodeId> indices_;
  NodeData data_;
};

// Throws InvariantViolation describing the first broken invariant.
void validate(std::span<const EdgeIndex> indptr, std::span<const NodeId> indices);
void validate(const Graph& g);

// Sorted id set with O(1) membership over [0, universe).
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::vector<NodeId> ids, NodeId universe);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  NodeId universe() const { return static_cast<NodeId>(member_.size()); }
  bool contains(NodeId v) const {
    return v >= 0 && v < universe() && member_[static_cast<std::size_t>(v)] != 0;
  }
  std::span<const NodeId> ids() const { return ids_; }

  bool operator==(const NodeSet& other) const { return ids_ == other.ids_; }

 private:
  std::vector<NodeId> ids_;
  std::vector<std::uint8_t> member_;
};

// Symmetrizes, drops self loops and parallel edges. Endpoint out of range
// raises InvalidArgument naming the pair.
Graph build_csr(std::span<const Edge> edges, NodeId num_nodes);

std::int64_t degree(const Graph& g, NodeId v);

// Barabasi-Albert preferential attachment. Nodes 0..attach form a clique;
// every later node attaches to `attach` distinct earlier nodes.
Graph generate_powerlaw(NodeId n, int attach, std::uint64_t seed);

struct SbmOptions {
  std::uint32_t feature_dim = 16;
  // Per-dimension standard deviation of the block centroids; unit noise is
  // added on top, so smaller values make features alone less informative.
  double centroid_scale = 0.5;
};

// Stochastic block model with contiguous equal-size blocks. Labels are block
// ids, masks split 50/25/25 over a seeded permutation, and features are a
// noisy per-block centroid.
Graph generate_sbm(NodeId n, int num_blocks, double p_in, double p_out,
                   std::uint64_t seed, const SbmOptions& options = {});

// Adds seeded standard-normal features to a graph without features.
Graph with_random_features(const Graph& g, std::uint32_t feature_dim,
                           std::uint64_t seed);

// One edge per line, whitespace-separated decimal ids, '#' comments. The node
// count is max id + 1 unless num_nodes is given.
Graph load_edgelist(const std::filesystem::path& path,
                    std::optional<NodeId> num_nodes = std::nullopt);

void save_binary(const Graph& g, const std::filesystem::path& path);
Graph load_binary(const std::filesystem::path& path);

// CSV rows "node_id,label,f_0,...,f_{d-1}". Every node must appear once.
// Existing masks are kept.
Graph attach_feature_csv(const Graph& g, const std::filesystem::path& path);

}  // namespace gns
