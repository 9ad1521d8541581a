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
#include <functional>
#include <memory>
#include <vector>

#include "gns/cache.hpp"
#include "gns/graph.hpp"
#include "gns/sampler.hpp"

namespace gns {

struct SampledBatch {
  std::int64_t epoch = 0;
  std::int64_t batch_index = 0;
  MiniBatch batch;
  // Snapshot the batch was sampled against; null for cache-free strategies.
  std::shared_ptr<const CacheState> cache;
  double sample_ms = 0.0;
};

// Worker threads that sample one epoch of mini-batches into a bounded queue.
// Batch content depends only on (seed, epoch, batch index), never on worker
// assignment. The cache is resampled at the start of every epoch that is a
// multiple of the period, while no worker is running.
class SamplerPool {
 public:
  SamplerPool(std::shared_ptr<const Graph> graph, SamplerConfig config, int num_workers,
              std::size_t queue_capacity);

  // Shuffled partition of the training nodes into batches of batch_size (the
  // last one may be short).
  std::vector<std::vector<NodeId>> epoch_batches(std::int64_t epoch) const;

  // Samples every batch of `epoch` exactly once and hands each to `consume`
  // on the calling thread. With `ordered`, batches arrive by batch index;
  // otherwise in completion order. A worker error stops the pool and is
  // rethrown here, as is any exception thrown by `consume`.
  void run_epoch(std::int64_t epoch, const std::function<void(SampledBatch&&)>& consume,
                 bool ordered = true);

  // Cache used for `epoch`, building it if needed. Null unless GNS.
  std::shared_ptr<const CacheState> cache_for_epoch(std::int64_t epoch);
  std::shared_ptr<const CacheState> current_cache() const { return cache_; }
  std::int64_t cache_refreshes() const { return refreshes_; }

  const SamplerConfig& config() const { return config_; }
  const Graph& graph() const { return *graph_; }
  std::shared_ptr<const ProbVector> cache_probs() const { return probs_; }
  int num_workers() const { return num_workers_; }

 private:
  std::shared_ptr<const Graph> graph_;
  SamplerConfig config_;
  int num_workers_;
  std::size_t queue_capacity_;
  std::vector<NodeId> train_nodes_;
  std::shared_ptr<const ProbVector> probs_;
  std::shared_ptr<const CacheState> cache_;
  std::int64_t cache_epoch_ = -1;
  std::int64_t refreshes_ = 0;
  ExactWeights exact_;
};

}  // namespace gns
