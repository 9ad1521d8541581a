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
#include <functional>
#include <memory>
#include <vector>

#include "gns/graph.hpp"
#include "gns/metrics.hpp"
#include "gns/model.hpp"
#include "gns/sampler.hpp"

namespace gns {

struct TrainConfig {
  int epochs = 10;
  AdamConfig adam;
  int hidden = 64;
  std::uint64_t seed = 0;
  int num_workers = 1;
  std::size_t queue_capacity = 4;
};

struct EpochStats {
  int epoch = 0;  // 0 holds the metrics of the initial parameters
  double loss = 0.0;
  double train_f1 = 0.0;
  double val_f1 = 0.0;
  double test_f1 = 0.0;
  double epoch_ms = 0.0;
  double mean_input_nodes = 0.0;
  double mean_cached = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  ModelParams params;

  const EpochStats& final() const { return epochs.back(); }
};

using BatchObserver = std::function<void(const BatchRecord&)>;

// Mini-batch training with the given sampler. Evaluation uses full
// neighborhoods. The cache is refreshed every config.cache_period epochs.
// Batches are consumed in batch-index order, so the result does not depend on
// the number of workers.
TrainReport train(std::shared_ptr<const Graph> g, const SamplerConfig& sampler,
                  const TrainConfig& config, const BatchObserver& observer = {});

inline constexpr const char* kTrainCsvHeader =
    "epoch,loss,train_f1,val_f1,test_f1,epoch_ms,mean_input_nodes,mean_cached";

void write_train_csv(const TrainReport& report, const std::filesystem::path& path);

}  // namespace gns
