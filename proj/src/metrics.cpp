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

#include "gns/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gns/error.hpp"

namespace gns {

InputCount count_input_nodes(const MiniBatch& mb, const CacheState* cache) {
  InputCount c;
  c.total = static_cast<std::int64_t>(mb.input_nodes.size());
  if (cache != nullptr) {
    for (NodeId v : mb.input_nodes) c.cached += cache->contains(v) ? 1 : 0;
  }
  return c;
}

std::uint64_t copy_cost(const MiniBatch& mb, const CacheState* cache,
                        std::uint32_t feature_dim) {
  const InputCount c = count_input_nodes(mb, cache);
  return static_cast<std::uint64_t>(c.total - c.cached) * feature_dim * sizeof(float);
}

BatchStats compute_batch_stats(const MiniBatch& mb, const CacheState* cache,
                               std::uint32_t feature_dim) {
  BatchStats s;
  const InputCount c = count_input_nodes(mb, cache);
  s.num_input_nodes = c.total;
  s.num_cached_input = c.cached;
  s.copy_bytes = static_cast<std::uint64_t>(c.total - c.cached) * feature_dim * sizeof(float);
  s.isolated_frac = isolated_fraction(mb);
  return s;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stdev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Nearest-rank percentiles.
  auto rank = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(idx, 1, sorted.size()) - 1];
  };
  s.p50 = rank(0.50);
  s.p95 = rank(0.95);
  return s;
}

namespace {

template <typename F>
Summary summarize_field(const std::vector<BatchRecord>& rows, F field) {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(field(r.stats));
  return summarize(v);
}

}  // namespace

Summary MetricsReport::input_nodes() const {
  return summarize_field(batches, [](const BatchStats& s) { return double(s.num_input_nodes); });
}
Summary MetricsReport::cached_inputs() const {
  return summarize_field(batches, [](const BatchStats& s) { return double(s.num_cached_input); });
}
Summary MetricsReport::copy_bytes() const {
  return summarize_field(batches, [](const BatchStats& s) { return double(s.copy_bytes); });
}
Summary MetricsReport::isolated() const {
  return summarize_field(batches, [](const BatchStats& s) { return s.isolated_frac; });
}

std::string batch_csv_row(const BatchRecord& r) {
  std::ostringstream out;
  out << r.run_id << ',' << r.epoch << ',' << r.batch << ',' << r.strategy << ','
      << r.stats.num_input_nodes << ',' << r.stats.num_cached_input << ',' << r.stats.copy_bytes
      << ',';
  out.precision(6);
  out << std::fixed << r.stats.isolated_frac << ',';
  out << static_cast<long long>(std::llround(r.stats.sample_ms)) << ','
      << static_cast<long long>(std::llround(r.stats.train_step_ms));
  return out.str();
}

void write_batch_csv(const MetricsReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kBatchCsvHeader << '\n';
  for (const auto& r : report.batches) out << batch_csv_row(r) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<BatchRecord> read_batch_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kBatchCsvHeader) {
    throw IoError(path.string() + ": not a batch CSV (header mismatch)");
  }
  std::vector<BatchRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 10 columns");
    }
    try {
      BatchRecord r;
      r.run_id = cells[0];
      r.epoch = std::stoll(cells[1]);
      r.batch = std::stoll(cells[2]);
      r.strategy = cells[3];
      r.stats.num_input_nodes = std::stoll(cells[4]);
      r.stats.num_cached_input = std::stoll(cells[5]);
      r.stats.copy_bytes = std::stoull(cells[6]);
      r.stats.isolated_frac = std::stod(cells[7]);
      r.stats.sample_ms = std::stod(cells[8]);
      r.stats.train_step_ms = std::stod(cells[9]);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed value");
    }
  }
  return rows;
}

}  // namespace gns
