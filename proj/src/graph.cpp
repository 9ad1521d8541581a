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

#include "gns/graph.hpp"

#include <algorithm>
#include <string>

#include "gns/error.hpp"

namespace gns {

namespace {

void validate_data(const NodeData& d, NodeId n) {
  const auto un = static_cast<std::size_t>(n);
  if (d.features.size() != un * d.feature_dim) {
    throw InvariantViolation("feature matrix has " + std::to_string(d.features.size()) +
                             " entries, expected " + std::to_string(un * d.feature_dim));
  }
  if (!d.labels.empty() && d.labels.size() != un) {
    throw InvariantViolation("label array length " + std::to_string(d.labels.size()) +
                             " != num_nodes " + std::to_string(n));
  }
  const bool any_mask = !d.train_mask.empty() || !d.val_mask.empty() || !d.test_mask.empty();
  if (any_mask && (d.train_mask.size() != un || d.val_mask.size() != un ||
                   d.test_mask.size() != un)) {
    throw InvariantViolation("train/val/test masks must all have num_nodes entries");
  }
}

std::vector<NodeId> mask_nodes(const std::vector<std::uint8_t>& mask) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

}  // namespace

void validate(std::span<const EdgeIndex> indptr, std::span<const NodeId> indices) {
  if (indptr.empty() || indptr.front() != 0) {
    throw InvariantViolation("indptr must start at 0");
  }
  if (indptr.back() != static_cast<EdgeIndex>(indices.size())) {
    throw InvariantViolation("indptr[num_nodes]=" + std::to_string(indptr.back()) +
                             " but len(indices)=" + std::to_string(indices.size()));
  }
  const auto n = static_cast<NodeId>(indptr.size()) - 1;
  for (NodeId v = 0; v < n; ++v) {
    if (indptr[v + 1] < indptr[v]) {
      throw InvariantViolation("indptr decreases at node " + std::to_string(v));
    }
    for (EdgeIndex e = indptr[v]; e < indptr[v + 1]; ++e) {
      const NodeId u = indices[e];
      if (u < 0 || u >= n) {
        throw InvariantViolation("neighbor " + std::to_string(u) + " of node " +
                                 std::to_string(v) + " out of range");
      }
      if (u == v) {
        throw InvariantViolation("self loop at node " + std::to_string(v));
      }
      if (e > indptr[v] && indices[e - 1] >= u) {
        throw InvariantViolation("neighbor list of node " + std::to_string(v) +
                                 " not strictly increasing");
      }
    }
  }
  // Symmetry: every (v,u) needs a matching (u,v).
  for (NodeId v = 0; v < n; ++v) {
    for (EdgeIndex e = indptr[v]; e < indptr[v + 1]; ++e) {
      const NodeId u = indices[e];
      const auto first = indices.begin() + indptr[u];
      const auto last = indices.begin() + indptr[u + 1];
      if (!std::binary_search(first, last, v)) {
        throw InvariantViolation("edge (" + std::to_string(v) + "," + std::to_string(u) +
                                 ") has no reverse");
      }
    }
  }
}

void validate(const Graph& g) {
  validate(g.indptr(), g.indices());
  validate_data(g.data(), g.num_nodes());
}

Graph::Graph(std::vector<EdgeIndex> indptr, std::vector<NodeId> indices, NodeData data)
    : indptr_(std::move(indptr)), indices_(std::move(indices)), data_(std::move(data)) {
  validate(indptr_, indices_);
  validate_data(data_, num_nodes());
}

std::int64_t Graph::max_degree() const {
  std::int64_t m = 0;
  for (NodeId v = 0; v < num_nodes(); ++v) m = std::max(m, degree(v));
  return m;
}

bool Graph::has_edge(NodeId u, NodeId v) const { return find_entry(u, v) >= 0; }

EdgeIndex Graph::find_entry(NodeId u, NodeId v) const {
  const auto first = indices_.begin() + indptr_[u];
  const auto last = indices_.begin() + indptr_[u + 1];
  const auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return -1;
  return static_cast<EdgeIndex>(it - indices_.begin());
}

Graph Graph::with_data(NodeData data) const {
  Graph out;
  out.indptr_ = indptr_;
  out.indices_ = indices_;
  validate_data(data, num_nodes());
  out.data_ = std::move(data);
  return out;
}

std::vector<NodeId> Graph::train_nodes() const {
  if (!data_.has_masks()) {
    std::vector<NodeId> all(static_cast<std::size_t>(num_nodes()));
    for (NodeId v = 0; v < num_nodes(); ++v) all[v] = v;
    return all;
  }
  return mask_nodes(data_.train_mask);
}

std::vector<NodeId> Graph::val_nodes() const { return mask_nodes(data_.val_mask); }
std::vector<NodeId> Graph::test_nodes() const { return mask_nodes(data_.test_mask); }

bool Graph::operator==(const Graph& o) const {
  const auto& a = data_;
  const auto& b = o.data_;
  return indptr_ == o.indptr_ && indices_ == o.indices_ && a.feature_dim == b.feature_dim &&
         a.features == b.features && a.labels == b.labels && a.train_mask == b.train_mask &&
         a.val_mask == b.val_mask && a.test_mask == b.test_mask;
}

NodeSet::NodeSet(std::vector<NodeId> ids, NodeId universe)
    : ids_(std::move(ids)), member_(static_cast<std::size_t>(universe), 0) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  for (NodeId v : ids_) {
    if (v < 0 || v >= universe) {
      throw InvalidArgument("node id " + std::to_string(v) + " outside [0, " +
                            std::to_string(universe) + ")");
    }
    member_[static_cast<std::size_t>(v)] = 1;
  }
}

Graph build_csr(std::span<const Edge> edges, NodeId num_nodes) {
  if (num_nodes < 0) throw InvalidArgument("num_nodes must be non-negative");
  std::vector<EdgeIndex> counts(static_cast<std::size_t>(num_nodes) + 1, 0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= num_nodes || e.v < 0 || e.v >= num_nodes) {
      throw InvalidArgument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") has an endpoint outside [0, " + std::to_string(num_nodes) +
                            ")");
    }
    if (e.u == e.v) continue;
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  std::vector<NodeId> raw(static_cast<std::size_t>(counts.back()));
  std::vector<EdgeIndex> cursor(counts.begin(), counts.end() - 1);
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    raw[cursor[e.u]++] = e.v;
    raw[cursor[e.v]++] = e.u;
  }
  std::vector<EdgeIndex> indptr(static_cast<std::size_t>(num_nodes) + 1, 0);
  std::vector<NodeId> indices;
  indices.reserve(raw.size());
  for (NodeId v = 0; v < num_nodes; ++v) {
    auto first = raw.begin() + counts[v];
    auto last = raw.begin() + counts[v + 1];
    std::sort(first, last);
    indices.insert(indices.end(), first, std::unique(first, last));
    indptr[v + 1] = static_cast<EdgeIndex>(indices.size());
  }
  return Graph(std::move(indptr), std::move(indices));
}

std::int64_t degree(const Graph& g, NodeId v) {
  if (v < 0 || v >= g.num_nodes()) {
    throw InvalidArgument("node " + std::to_string(v) + " out of range");
  }
  return g.degree(v);
}

}  // namespace gns
