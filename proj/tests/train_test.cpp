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
#include <string>
#include <vector>

#include "gns/error.hpp"
#include "gns/train.hpp"
#include "test_graphs.hpp"

namespace gns {
namespace {

std::shared_ptr<const Graph> sbm_graph() {
  static const auto g = std::make_shared<const Graph>(generate_sbm(600, 3, 0.04, 0.004, 1));
  return g;
}

SamplerConfig small_sampler(Strategy s) {
  SamplerConfig cfg;
  cfg.strategy = s;
  cfg.fanouts = {5, 5};
  cfg.batch_size = 50;
  cfg.cache_fraction = 0.1;
  cfg.layer_size = 64;
  cfg.seed = 2;
  return cfg;
}

TrainConfig small_train(int epochs) {
  TrainConfig t;
  t.epochs = epochs;
  t.hidden = 16;
  t.adam.lr = 0.01;
  t.seed = 3;
  return t;
}

TEST(Train, EveryStrategyLearnsTheBlocks) {
  for (Strategy s : {Strategy::kNodeWise, Strategy::kGns, Strategy::kLadies}) {
    const TrainReport r = train(sbm_graph(), small_sampler(s), small_train(5));
    ASSERT_EQ(r.epochs.size(), 6U);
    EXPECT_EQ(r.epochs.front().epoch, 0);
    EXPECT_EQ(r.final().epoch, 5);
    EXPECT_GT(r.final().test_f1, 0.8) << to_string(s);
    EXPECT_GT(r.final().test_f1, r.epochs.front().test_f1) << to_string(s);
    EXPECT_LT(r.final().loss, r.epochs[1].loss) << to_string(s);
    EXPECT_GT(r.final().mean_input_nodes, 0.0);
  }
}

TEST(Train, ZeroEpochsReportsInitialModel) {
  const TrainReport r = train(sbm_graph(), small_sampler(Strategy::kNodeWise), small_train(0));
  ASSERT_EQ(r.epochs.size(), 1U);
  EXPECT_EQ(r.final().epoch, 0);
  EXPECT_EQ(r.params.dims, (std::vector<int>{16, 16, 3}));
  const TrainReport again = train(sbm_graph(), small_sampler(Strategy::kNodeWise), small_train(0));
  EXPECT_EQ(again.params.weights[0], r.params.weights[0]);
}

TEST(Train, DeterministicAcrossRunsAndWorkerCounts) {
  const SamplerConfig s = small_sampler(Strategy::kGns);
  TrainConfig one = small_train(2);
  TrainConfig three = one;
  three.num_workers = 3;
  three.queue_capacity = 1;
  const TrainReport a = train(sbm_graph(), s, one);
  const TrainReport b = train(sbm_graph(), s, one);
  const TrainReport c = train(sbm_graph(), s, three);
  for (int l = 0; l < a.params.num_layers(); ++l) {
    EXPECT_EQ(a.params.weights[l], b.params.weights[l]);
    EXPECT_EQ(a.params.weights[l], c.params.weights[l]);
  }
  for (std::size_t e = 0; e < a.epochs.size(); ++e) {
    EXPECT_EQ(a.epochs[e].loss, c.epochs[e].loss);
    EXPECT_EQ(a.epochs[e].test_f1, c.epochs[e].test_f1);
  }
}

TEST(Train, ObserverSeesEveryBatch) {
  const SamplerConfig s = small_sampler(Strategy::kGns);
  std::vector<BatchRecord> seen;
  train(sbm_graph(), s, small_train(2), [&](const BatchRecord& r) { seen.push_back(r); });
  const std::size_t per_epoch = (sbm_graph()->train_nodes().size() + 49) / 50;
  ASSERT_EQ(seen.size(), 2 * per_epoch);
  // Batch records carry the zero-based sampling epoch.
  EXPECT_EQ(seen.front().epoch, 0);
  EXPECT_EQ(seen.front().batch, 0);
  EXPECT_EQ(seen.back().epoch, 1);
  EXPECT_EQ(seen.back().batch, static_cast<std::int64_t>(per_epoch) - 1);
  for (const BatchRecord& r : seen) {
    EXPECT_EQ(r.strategy, "gns");
    EXPECT_GT(r.stats.num_input_nodes, 0);
    EXPECT_LE(r.stats.num_cached_input, r.stats.num_input_nodes);
    EXPECT_EQ(r.stats.copy_bytes,
              static_cast<std::uint64_t>(r.stats.num_input_nodes - r.stats.num_cached_input) *
                  sbm_graph()->feature_dim() * 4);
  }
}

TEST(Train, RequiresLabelsAndFeatures) {
  const auto bare = std::make_shared<const Graph>(generate_powerlaw(100, 2, 4));
  EXPECT_THROW(train(bare, small_sampler(Strategy::kNodeWise), small_train(1)), InvalidArgument);
  TrainConfig bad = small_train(-1);
  EXPECT_THROW(train(sbm_graph(), small_sampler(Strategy::kNodeWise), bad), InvalidArgument);
}

TEST(Train, CsvHasHeaderAndOneRowPerEpoch) {
  const TrainReport r = train(sbm_graph(), small_sampler(Strategy::kNodeWise), small_train(2));
  const auto path = std::filesystem::temp_directory_path() / "gns_train_test.csv";
  write_train_csv(r, path);
  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  std::filesystem::remove(path);
  ASSERT_EQ(lines.size(), 4U);
  EXPECT_EQ(lines[0], kTrainCsvHeader);
  EXPECT_EQ(lines[1].rfind("0,", 0), 0U);
  EXPECT_EQ(lines[3].rfind("2,", 0), 0U);
}

}  // namespace
}  // namespace gns
