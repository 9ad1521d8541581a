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
#include <span>
#include <string>
#include <vector>

#include "gns/cache.hpp"
#include "gns/sampler.hpp"

namespace gns {

struct InputCount {
  std::int64_t total = 0;
  std::int64_t cached = 0;
};

InputCount count_input_nodes(const MiniBatch& mb, const CacheState* cache);

// Modeled host-to-device bytes: uncached input nodes x feature_dim x 4.
std::uint64_t copy_cost(const MiniBatch& mb, const CacheState* cache,
                        std::uint32_t feature_dim);

struct BatchStats {
  std::int64_t num_input_nodes = 0;
  std::int64_t num_cached_input = 0;
  std::uint64_t copy_bytes = 0;
  double sample_ms = 0.0;
  double slice_ms = 0.0;
  double train_step_ms = 0.0;
  double isolated_frac = 0.0;
};

// Everything but the timings, which the caller measures.
BatchStats compute_batch_stats(const MiniBatch& mb, const CacheState* cache,
                               std::uint32_t feature_dim);

struct BatchRecord {
  std::string run_id;
  std::int64_t epoch = 0;
  std::int64_t batch = 0;
  std::string strategy;
  BatchStats stats;
};

struct Summary {
  double mean = 0.0;
  double stdev = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

struct MetricsReport {
  std::string run_id;
  std::string strategy;
  std::string config_text;
  std::uint64_t seed = 0;
  std::string graph_id;
  std::vector<BatchRecord> batches;

  Summary input_nodes() const;
  Summary cached_inputs() const;
  Summary copy_bytes() const;
  Summary isolated() const;
};

// Normative column order.
inline constexpr const char* kBatchCsvHeader =
    "run_id,epoch,batch,strategy,num_input,num_cached,copy_bytes,isolated_frac,sample_ms,train_ms";
inline constexpr const char* kGridCsvHeader = "cache_frac,period_P,test_f1,mean_input,mean_cached";

std::string batch_csv_row(const BatchRecord& r);
void write_batch_csv(const MetricsReport& report, const std::filesystem::path& path);
// Reads a file written by write_batch_csv. Throws IoError on a bad header or
// row.
std::vector<BatchRecord> read_batch_csv(const std::filesystem::path& path);

}  // namespace gns
