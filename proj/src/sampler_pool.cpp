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

#include "gns/sampler_pool.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "gns/blocking_queue.hpp"
#include "gns/error.hpp"

namespace gns {

SamplerPool::SamplerPool(std::shared_ptr<const Graph> graph, SamplerConfig config,
                         int num_workers, std::size_t queue_capacity)
    : graph_(std::move(graph)),
      config_(std::move(config)),
      num_workers_(num_workers),
      queue_capacity_(queue_capacity) {
  if (!graph_) throw InvalidArgument("sampler pool needs a graph");
  if (num_workers_ < 1) throw InvalidArgument("num_workers must be >= 1");
  config_.validate();
  train_nodes_ = graph_->train_nodes();
  if (train_nodes_.empty()) throw InvalidArgument("graph has no training nodes");
  if (config_.strategy == Strategy::kGns) {
    probs_ = std::make_shared<const ProbVector>(
        gns::cache_probs(*graph_, config_.cache_mode, config_.fanouts, config_.num_layers()));
    if (config_.gns_weights == WeightPolicy::kGnsExact) {
      exact_ = build_exact_weights(*graph_, *probs_, config_);
    }
  }
}

std::vector<std::vector<NodeId>> SamplerPool::epoch_batches(std::int64_t epoch) const {
  std::vector<NodeId> order = train_nodes_;
  std::mt19937_64 rng(derive_seed({config_.seed, static_cast<std::uint64_t>(epoch), 0x73687566ULL}));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<NodeId>> batches;
  const auto b = static_cast<std::size_t>(config_.batch_size);
  for (std::size_t i = 0; i < order.size(); i += b) {
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                         order.begin() + static_cast<std::ptrdiff_t>(std::min(i + b, order.size())));
  }
  return batches;
}

std::shared_ptr<const CacheState> SamplerPool::cache_for_epoch(std::int64_t epoch) {
  if (config_.strategy != Strategy::kGns) return nullptr;
  const std::int64_t stamp = epoch - epoch % config_.cache_period;
  if (!cache_ || cache_epoch_ != stamp) {
    cache_ = build_cache(*graph_, probs_, config_.cache_size(graph_->num_nodes()), stamp,
                         derive_seed({config_.seed, static_cast<std::uint64_t>(stamp), 0x63ULL}),
                         config_.cache_options);
    cache_epoch_ = stamp;
    ++refreshes_;
  }
  return cache_;
}

void SamplerPool::run_epoch(std::int64_t epoch,
                            const std::function<void(SampledBatch&&)>& consume, bool ordered) {
  // Epoch barrier: no worker is alive here, so swapping the cache is safe.
  const std::shared_ptr<const CacheState> cache = cache_for_epoch(epoch);
  const auto batches = epoch_batches(epoch);
  const auto total = static_cast<std::int64_t>(batches.size());

  BlockingQueue<SampledBatch> queue(queue_capacity_);
  std::atomic<std::int64_t> next{0};
  std::atomic<int> live{num_workers_};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto record_error = [&](std::exception_ptr e) {
    std::lock_guard lock(error_mutex);
    if (!error) error = e;
  };

  auto worker = [&] {
    try {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= total) break;
        const auto t0 = std::chrono::steady_clock::now();
        SampledBatch out;
        out.epoch = epoch;
        out.batch_index = i;
        out.cache = cache;
        const DrawKey key{config_.seed, static_cast<std::uint64_t>(epoch),
                          static_cast<std::uint64_t>(i)};
        out.batch = build_minibatch(*graph_, cache.get(), batches[static_cast<std::size_t>(i)],
                                    config_, key, exact_.empty() ? nullptr : &exact_);
        out.sample_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        if (!queue.push(std::move(out))) break;
      }
    } catch (...) {
      record_error(std::current_exception());
      queue.close();
    }
    if (live.fetch_sub(1) == 1) queue.close();
  };

  std::vector<std::jthread> threads;
  threads.reserve(static_cast<std::size_t>(num_workers_));
  for (int w = 0; w < num_workers_; ++w) threads.emplace_back(worker);

  try {
    std::map<std::int64_t, SampledBatch> pending;
    std::int64_t expected = 0;
    std::int64_t delivered = 0;
    while (auto item = queue.pop()) {
      if (!ordered) {
        consume(std::move(*item));
        ++delivered;
        continue;
      }
      pending.emplace(item->batch_index, std::move(*item));
      for (auto it = pending.find(expected); it != pending.end(); it = pending.find(expected)) {
        consume(std::move(it->second));
        pending.erase(it);
        ++expected;
        ++delivered;
      }
    }
    if (!error && delivered != total) {
      record_error(std::make_exception_ptr(
          InvariantViolation("sampler pool delivered " + std::to_string(delivered) + " of " +
                             std::to_string(total) + " batches")));
    }
  } catch (...) {
    record_error(std::current_exception());
    queue.close();
  }
  threads.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace gns
