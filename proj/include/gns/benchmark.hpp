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

#include <filesystem>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "gns/config.hpp"
#include "gns/graph.hpp"
#include "gns/metrics.hpp"

namespace gns {

struct GridRow {
  std::string run_id;
  double cache_frac = 0.0;  // 0 for cache-free strategies
  int period = 0;
  double test_f1 = 0.0;
  double mean_input = 0.0;
  double mean_cached = 0.0;
};

struct BenchResult {
  std::vector<MetricsReport> reports;
  std::vector<GridRow> grid;
};

// Trains every run of the plan and writes <out_dir>/<run>.csv with one row
// per mini-batch, plus <out_dir>/grid.csv with one row per run. An empty plan
// writes nothing.
BenchResult run_benchmark(std::shared_ptr<const Graph> g, const BenchPlan& plan,
                          const std::filesystem::path& out_dir,
                          const std::string& graph_id = "graph");

void write_grid_csv(const std::vector<GridRow>& rows, const std::filesystem::path& path);
std::vector<GridRow> read_grid_csv(const std::filesystem::path& path);

struct RunSummary {
  std::string run_id;
  std::string strategy;
  std::size_t batches = 0;
  double mean_input = 0.0;
  double mean_cached = 0.0;
  double mean_copy_bytes = 0.0;
  double mean_isolated = 0.0;
  double mean_sample_ms = 0.0;
};

struct TrainSummary {
  std::string name;
  int epochs = 0;
  double final_test_f1 = 0.0;
  double mean_epoch_ms = 0.0;
};

struct ReportData {
  std::vector<RunSummary> runs;
  std::vector<GridRow> grid;
  std::vector<TrainSummary> trainings;

  // Mean NS input nodes over mean GNS input nodes; 0 if either is missing.
  double ns_over_gns_input_ratio() const;
};

// Scans a directory for batch, grid and training CSVs.
ReportData collect_report(const std::filesystem::path& dir);
// Aligned text tables: per-run input/copy statistics, the NS/GNS ratio,
// the cache-size x period grid and training results.
void print_report(const ReportData& data, std::ostream& out);
void write_report_csv(const ReportData& data, const std::filesystem::path& path);

}  // namespace gns
