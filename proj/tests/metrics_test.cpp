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

#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "gns/error.hpp"
#include "gns/metrics.hpp"
#include "test_graphs.hpp"

namespace gns {
namespace {

MiniBatch star_batch() {
  // Target 0 whose input layer is {0, 1, 2, 3}.
  MiniBatch mb;
  mb.targets = {0};
  LayerBlock b;
  b.dst_nodes = {0};
  b.src_nodes = {0, 1, 2, 3};
  b.edges = {{1, 0, 1.0, true}, {2, 0, 1.0, false}, {3, 0, 1.0, true}};
  b.fanout = 3;
  mb.blocks = {b};
  mb.input_nodes = b.src_nodes;
  return mb;
}

std::shared_ptr<const CacheState> cache_13(const Graph& g) {
  ProbVector p;
  p.values = {0.0, 0.5, 0.0, 0.5};
  return build_cache(g, std::make_shared<const ProbVector>(p), 2, 0, 1);
}

TEST(Metrics, CountsAndCopyCost) {
  const Graph g = testing::star_graph(3);
  const auto cache = cache_13(g);
  const MiniBatch mb = star_batch();
  const InputCount c = count_input_nodes(mb, cache.get());
  EXPECT_EQ(c.total, 4);
  EXPECT_EQ(c.cached, 2);
  EXPECT_EQ(copy_cost(mb, cache.get(), 100), 2U * 100U * 4U);
  EXPECT_EQ(copy_cost(mb, nullptr, 100), 4U * 100U * 4U);
  EXPECT_EQ(count_input_nodes(mb, nullptr).cached, 0);
}

TEST(Metrics, BatchStats) {
  const Graph g = testing::star_graph(3);
  const auto cache = cache_13(g);
  const BatchStats s = compute_batch_stats(star_batch(), cache.get(), 8);
  EXPECT_EQ(s.num_input_nodes, 4);
  EXPECT_EQ(s.num_cached_input, 2);
  EXPECT_EQ(s.copy_bytes, 2U * 8U * 4U);
  EXPECT_EQ(s.isolated_frac, 0.0);
  EXPECT_EQ(s.sample_ms, 0.0);
}

TEST(Metrics, SummarizeMatchesHandComputation) {
  const std::vector<double> v = {4, 1, 3, 2, 5, 6, 7, 8, 9, 10};
  const Summary s = summarize(v);
  EXPECT_EQ(s.count, 10U);
  EXPECT_DOUBLE_EQ(s.mean, 5.5);
  EXPECT_NEAR(s.stdev, 3.0276503540974917, 1e-12);
  EXPECT_EQ(s.p50, 5.0);
  EXPECT_EQ(s.p95, 10.0);
  const Summary one = summarize(std::vector<double>{7});
  EXPECT_EQ(one.stdev, 0.0);
  EXPECT_EQ(one.p95, 7.0);
  EXPECT_EQ(summarize({}).count, 0U);
}

TEST(Metrics, ReportSummaries) {
  MetricsReport r;
  for (int i = 1; i <= 4; ++i) {
    BatchRecord b;
    b.stats.num_input_nodes = 10 * i;
    b.stats.num_cached_input = i;
    b.stats.copy_bytes = 100U * i;
    b.stats.isolated_frac = 0.1 * i;
    r.batches.push_back(b);
  }
  EXPECT_DOUBLE_EQ(r.input_nodes().mean, 25.0);
  EXPECT_DOUBLE_EQ(r.cached_inputs().mean, 2.5);
  EXPECT_DOUBLE_EQ(r.copy_bytes().p50, 200.0);
  EXPECT_NEAR(r.isolated().mean, 0.25, 1e-12);
}

TEST(Metrics, CsvRowFormat) {
  BatchRecord b;
  b.run_id = "run1";
  b.epoch = 2;
  b.batch = 7;
  b.strategy = "gns";
  b.stats.num_input_nodes = 120;
  b.stats.num_cached_input = 30;
  b.stats.copy_bytes = 4800;
  b.stats.isolated_frac = 0.25;
  b.stats.sample_ms = 3.6;
  b.stats.train_step_ms = 10.2;
  EXPECT_EQ(batch_csv_row(b), "run1,2,7,gns,120,30,4800,0.250000,4,10");
}

class MetricsCsvTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() /
            (std::string("gns_metrics_") +
             ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".csv");
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::filesystem::path path_;
};

TEST_F(MetricsCsvTest, RoundTrip) {
  MetricsReport r;
  for (int i = 0; i < 3; ++i) {
    BatchRecord b;
    b.run_id = "r";
    b.epoch = 0;
    b.batch = i;
    b.strategy = "ns";
    b.stats.num_input_nodes = 50 + i;
    b.stats.copy_bytes = 800U + i;
    b.stats.isolated_frac = 0.5;
    b.stats.sample_ms = 2;
    r.batches.push_back(b);
  }
  write_batch_csv(r, path_);
  {
    std::ifstream in(path_);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, kBatchCsvHeader);
  }
  const auto back = read_batch_csv(path_);
  ASSERT_EQ(back.size(), 3U);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].batch, i);
    EXPECT_EQ(back[i].strategy, "ns");
    EXPECT_EQ(back[i].stats.num_input_nodes, 50 + i);
    EXPECT_EQ(back[i].stats.copy_bytes, 800U + i);
    EXPECT_DOUBLE_EQ(back[i].stats.isolated_frac, 0.5);
    EXPECT_DOUBLE_EQ(back[i].stats.sample_ms, 2.0);
  }
}

TEST_F(MetricsCsvTest, RejectsBadInput) {
  {
    std::ofstream out(path_);
    out << "run_id,epoch\n";
  }
  EXPECT_THROW(read_batch_csv(path_), IoError);
  {
    std::ofstream out(path_);
    out << kBatchCsvHeader << "\nr,0,0,ns,abc,0,0,0,0,0\n";
  }
  EXPECT_THROW(read_batch_csv(path_), IoError);
  {
    std::ofstream out(path_);
    out << kBatchCsvHeader << "\nr,0,0,ns,1,0\n";
  }
  EXPECT_THROW(read_batch_csv(path_), IoError);
  EXPECT_THROW(read_batch_csv(path_.string() + ".missing"), IoError);
}

}  // namespace
}  // namespace gns
