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
#include <vector>

#include "gns/graph.hpp"

namespace gns::testing {

// Independent Erdos-Renyi generator for tests: each pair is an edge with
// probability p. Shares no code with the library generators.
Graph erdos_renyi(NodeId n, double p, std::uint64_t seed);

// Erdos-Renyi graph with exactly m distinct edges.
Graph erdos_renyi_m(NodeId n, std::int64_t m, std::uint64_t seed);

Graph path_graph(NodeId n);
Graph star_graph(NodeId leaves);
Graph triangle();

// Adds seeded features, labels in [0, num_classes) and a 50/25/25 mask split.
Graph with_task(const Graph& g, std::uint32_t feature_dim, int num_classes,
                std::uint64_t seed);

// Dense symmetric 0/1 adjacency.
std::vector<std::vector<int>> dense_adjacency(const Graph& g);

}  // namespace gns::testing
