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
#include <chrono>
#include <future>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gns/error.hpp"
#include "gns/sampler_pool.hpp"
#include "test_graphs.hpp"

namespace gns {
namespace {

std::shared_ptr<const Graph> task_graph(NodeId n, std::uint64_t seed) {
  return std::make_shared<const Graph>(
      testing::with_task(generate_powerlaw(n, 3, seed), 4, 3, seed + 1));
}

SamplerConfig gns_config() {
  SamplerConfig cfg;
  cfg.strategy = Strategy::kGns;
  cfg.fanouts = {4, 3, 2};
  cfg.cache_fraction = 0.05;
  cfg.batch_size = 37;
  cfg.seed = 9;
  return cfg;
}

std::vector<std::string> collect(SamplerPool& pool, std::int64_t epoch, bool ordered = true) {
  std::vector<std::string> out;
  pool.run_epoch(
      epoch, [&](SampledBatch&& b) { out.push_back(dump_minibatch(b.batch)); }, ordered);
  return out;
}

TEST(SamplerPool, EpochBatchesPartitionTrainingNodes) {
  const auto g = task_graph(500, 1);
  SamplerPool pool(g, gns_config(), 2, 4);
  const auto batches = pool.epoch_batches(3);
  std::vector<NodeId> all;
  for (const auto& b : batches) {
    EXPECT_LE(b.size(), 37U);
    all.insert(all.end(), b.begin(), b.end());
  }
  for (std::size_t i = 0; i + 1 < batches.size(); ++i) EXPECT_EQ(batches[i].size(), 37U);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, g->train_nodes());
  EXPECT_EQ(batches, pool.epoch_batches(3));
  EXPECT_NE(batches, pool.epoch_batches(4));
}

TEST(SamplerPool, SingleWorkerMatchesSerialSampling) {
  const auto g = task_graph(600, 2);
  const SamplerConfig cfg = gns_config();
  SamplerPool pool(g, cfg, 1, 2);
  for (std::int64_t epoch : {0, 1}) {
    const auto got = collect(pool, epoch);
    const auto cache = pool.cache_for_epoch(epoch);
    const auto batches = pool.epoch_batches(epoch);
    ASSERT_EQ(got.size(), batches.size());
    for (std::size_t i = 0; i < batches.size(); ++i) {
      const DrawKey key{cfg.seed, static_cast<std::uint64_t>(epoch), i};
      EXPECT_EQ(got[i], dump_minibatch(build_minibatch(*g, cache.get(), batches[i], cfg, key)));
    }
  }
}

TEST(SamplerPool, WorkerCountDoesNotChangeBatches) {
  const auto g = task_graph(800, 3);
  SamplerPool one(g, gns_config(), 1, 3);
  SamplerPool four(g, gns_config(), 4, 3);
  for (std::int64_t epoch : {0, 1, 2}) {
    EXPECT_EQ(collect(one, epoch), collect(four, epoch));
    EXPECT_EQ(one.current_cache()->nodes(), four.current_cache()->nodes());
  }
}

TEST(SamplerPool, UnorderedDeliveryCoversEveryTargetOnce) {
  const auto g = task_graph(800, 4);
  SamplerPool pool(g, gns_config(), 4, 2);
  std::vector<NodeId> seen;
  std::vector<std::int64_t> indices;
  pool.run_epoch(
      0,
      [&](SampledBatch&& b) {
        indices.push_back(b.batch_index);
        seen.insert(seen.end(), b.batch.targets.begin(), b.batch.targets.end());
      },
      false);
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, g->train_nodes());
  std::sort(indices.begin(), indices.end());
  for (std::size_t i = 0; i < indices.size(); ++i) EXPECT_EQ(indices[i], static_cast<std::int64_t>(i));
}

TEST(SamplerPool, CacheRefreshFollowsPeriod) {
  const auto g = task_graph(500, 5);
  SamplerConfig cfg = gns_config();
  cfg.cache_period = 3;
  SamplerPool pool(g, cfg, 2, 2);
  std::vector<std::shared_ptr<const CacheState>> caches;
  for (std::int64_t epoch = 0; epoch < 7; ++epoch) {
    pool.run_epoch(epoch, [&](SampledBatch&& b) {
      ASSERT_EQ(b.cache, pool.current_cache());
    });
    caches.push_back(pool.current_cache());
  }
  EXPECT_EQ(pool.cache_refreshes(), 3);
  EXPECT_EQ(caches[0], caches[2]);
  EXPECT_NE(caches[2], caches[3]);
  EXPECT_EQ(caches[3], caches[5]);
  EXPECT_EQ(caches[6]->epoch(), 6);
  EXPECT_NE(caches[0]->nodes(), caches[3]->nodes());
}

TEST(SamplerPool, NodeWiseHasNoCache) {
  const auto g = task_graph(300, 6);
  SamplerConfig cfg = gns_config();
  cfg.strategy = Strategy::kNodeWise;
  SamplerPool pool(g, cfg, 2, 2);
  EXPECT_EQ(pool.cache_for_epoch(0), nullptr);
  pool.run_epoch(0, [](SampledBatch&& b) { EXPECT_EQ(b.cache, nullptr); });
}

TEST(SamplerPool, TinyQueueDoesNotDeadlock) {
  const auto g = task_graph(2000, 7);
  SamplerConfig cfg = gns_config();
  cfg.batch_size = 20;
  auto done = std::async(std::launch::async, [&] {
    SamplerPool pool(g, cfg, 4, 1);
    std::int64_t n = 0;
    for (std::int64_t epoch = 0; epoch < 3; ++epoch) {
      pool.run_epoch(epoch, [&](SampledBatch&&) { ++n; });
    }
    return n;
  });
  ASSERT_EQ(done.wait_for(std::chrono::seconds(120)), std::future_status::ready);
  EXPECT_EQ(done.get(), 3 * static_cast<std::int64_t>((g->train_nodes().size() + 19) / 20));
}

TEST(SamplerPool, ConsumerExceptionPropagates) {
  const auto g = task_graph(1000, 8);
  SamplerPool pool(g, gns_config(), 3, 1);
  int calls = 0;
  EXPECT_THROW(pool.run_epoch(0,
                              [&](SampledBatch&&) {
                                if (++calls == 2) throw std::runtime_error("consumer failed");
                              }),
               std::runtime_error);
  EXPECT_EQ(calls, 2);
  // The pool stays usable after a failed epoch.
  EXPECT_NO_THROW(collect(pool, 1));
}

TEST(SamplerPool, WorkerExceptionPropagates) {
  // With one empirical resample, cached nodes missing from that resample get
  // inclusion 0, and their importance weight cannot be formed.
  const auto g = task_graph(1000, 10);
  SamplerConfig cfg = gns_config();
  cfg.cache_fraction = 0.2;
  cfg.input_layer_cache_only = false;
  cfg.cache_options.inclusion = InclusionModel::kEmpirical;
  cfg.cache_options.empirical_resamples = 1;
  SamplerPool pool(g, cfg, 3, 2);
  const auto cache = pool.cache_for_epoch(0);
  const auto missing = std::count_if(cache->nodes().ids().begin(), cache->nodes().ids().end(),
                                     [&](NodeId v) { return cache->inclusion_prob(v) == 0.0; });
  ASSERT_GT(missing, 0);
  int calls = 0;
  EXPECT_THROW(pool.run_epoch(0, [&](SampledBatch&&) { ++calls; }), InvalidArgument);
  EXPECT_LT(calls, static_cast<int>(pool.epoch_batches(0).size()));
}

TEST(SamplerPool, RejectsBadSetup) {
  const auto g = task_graph(100, 9);
  EXPECT_THROW(SamplerPool(nullptr, gns_config(), 1, 1), InvalidArgument);
  EXPECT_THROW(SamplerPool(g, gns_config(), 0, 1), InvalidArgument);
  // Without masks every node trains; an empty graph has nothing to sample.
  const auto bare = std::make_shared<const Graph>(generate_powerlaw(100, 2, 1));
  EXPECT_EQ(SamplerPool(bare, gns_config(), 1, 1).epoch_batches(0).size(), 3U);
  const auto empty = std::make_shared<const Graph>(build_csr({}, 0));
  EXPECT_THROW(SamplerPool(empty, gns_config(), 1, 1), InvalidArgument);
}

}  // namespace
}  // namespace gns
