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

#include "gns/config.hpp"
#include "gns/error.hpp"

namespace gns {
namespace {

TEST(KeyValueConfig, ParsesCommentsAndWhitespace) {
  const auto kv = KeyValueConfig::parse("# header\n a = 1 \n\nb=x,y # trailing\nc=\n");
  EXPECT_EQ(kv.get("a"), "1");
  EXPECT_EQ(kv.get("b"), "x,y");
  EXPECT_EQ(kv.get("c"), "");
  EXPECT_FALSE(kv.has("# header"));
  EXPECT_EQ(kv.values().size(), 3U);
}

TEST(KeyValueConfig, ReportsLineOfSyntaxErrors) {
  try {
    KeyValueConfig::parse("a=1\nnot a pair\n", "f.cfg");
    FAIL() << "expected an error";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("f.cfg:2"), std::string::npos);
  }
  EXPECT_THROW(KeyValueConfig::parse("=3"), InvalidArgument);
  EXPECT_THROW(KeyValueConfig::parse("a=1").get("b"), InvalidArgument);
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/x.cfg"), IoError);
}

TEST(KeyValueConfig, ScopedAndRejectUnknown) {
  const auto kv = KeyValueConfig::parse("gns.strategy=gns\ngns.cache_frac=0.1\nns.strategy=ns\n");
  const auto g = kv.scoped("gns");
  EXPECT_EQ(g.values().size(), 2U);
  EXPECT_EQ(g.get("cache_frac"), "0.1");
  EXPECT_NO_THROW(g.reject_unknown(sampler_keys()));
  EXPECT_THROW(KeyValueConfig::parse("bogus=1").reject_unknown(sampler_keys()), InvalidArgument);
}

TEST(ConfigKeys, SamplerKeysApply) {
  SamplerConfig cfg;
  apply_sampler_keys(KeyValueConfig::parse("strategy=gns\nfanouts=10, 5\nlayer_size=32\n"
                                           "cache_frac=0.05\nperiod=4\ninput_cache_only=false\n"
                                           "batch_size=64\nweights=gns-exact\ncache_mode=walk\n"
                                           "inclusion=empirical\nexact_resamples=128\n"),
                     cfg);
  EXPECT_EQ(cfg.strategy, Strategy::kGns);
  EXPECT_EQ(cfg.fanouts, (std::vector<int>{10, 5}));
  EXPECT_EQ(cfg.layer_size, 32);
  EXPECT_DOUBLE_EQ(cfg.cache_fraction, 0.05);
  EXPECT_EQ(cfg.cache_period, 4);
  EXPECT_FALSE(cfg.input_layer_cache_only);
  EXPECT_EQ(cfg.batch_size, 64);
  EXPECT_EQ(cfg.gns_weights, WeightPolicy::kGnsExact);
  EXPECT_EQ(cfg.cache_mode, CacheMode::kRandomWalk);
  EXPECT_EQ(cfg.cache_options.inclusion, InclusionModel::kEmpirical);
  EXPECT_EQ(cfg.exact_resamples, 128);
}

TEST(ConfigKeys, BadValuesThrow) {
  SamplerConfig cfg;
  for (const char* text : {"period=two", "cache_frac=0.1x", "input_cache_only=maybe",
                           "strategy=fast", "cache_mode=random", "fanouts=1,a"}) {
    EXPECT_THROW(apply_sampler_keys(KeyValueConfig::parse(text), cfg), InvalidArgument) << text;
  }
}

TEST(ConfigKeys, TrainKeysApply) {
  TrainConfig t;
  apply_train_keys(KeyValueConfig::parse("epochs=3\nlr=0.01\nhidden=32\nseed=9\nworkers=4\n"
                                         "queue_capacity=2\n"),
                   t);
  EXPECT_EQ(t.epochs, 3);
  EXPECT_DOUBLE_EQ(t.adam.lr, 0.01);
  EXPECT_EQ(t.hidden, 32);
  EXPECT_EQ(t.seed, 9U);
  EXPECT_EQ(t.num_workers, 4);
  EXPECT_EQ(t.queue_capacity, 2U);
}

TEST(ConfigLists, Parse) {
  EXPECT_EQ(parse_int_list("15,10,5"), (std::vector<int>{15, 10, 5}));
  EXPECT_EQ(parse_double_list("0.1, 0.01"), (std::vector<double>{0.1, 0.01}));
  EXPECT_TRUE(parse_int_list("").empty());
}

TEST(BenchPlan, RunsInheritDefaultsAndOverride) {
  const auto plan = parse_bench_plan(KeyValueConfig::parse(
      "epochs=2\nseed=5\nfanouts=4,3\nruns=ns,gns\nns.strategy=ns\n"
      "gns.strategy=gns\ngns.cache_frac=0.1\n"));
  EXPECT_EQ(plan.train.epochs, 2);
  EXPECT_EQ(plan.train.seed, 5U);
  ASSERT_EQ(plan.runs.size(), 2U);
  EXPECT_EQ(plan.runs[0].name, "ns");
  EXPECT_EQ(plan.runs[0].sampler.strategy, Strategy::kNodeWise);
  EXPECT_EQ(plan.runs[1].sampler.strategy, Strategy::kGns);
  EXPECT_DOUBLE_EQ(plan.runs[1].sampler.cache_fraction, 0.1);
  EXPECT_EQ(plan.runs[0].sampler.fanouts, (std::vector<int>{4, 3}));
}

TEST(BenchPlan, GridExpandsInOrder) {
  const auto plan = parse_bench_plan(KeyValueConfig::parse(
      "runs=gns\ngns.strategy=gns\ngns.fanouts=5\ngrid.base=gns\n"
      "grid.cache_fracs=0.1,0.01\ngrid.periods=1,10\n"));
  ASSERT_EQ(plan.runs.size(), 5U);
  EXPECT_EQ(plan.runs[1].name, "grid_c0.1_p1");
  EXPECT_EQ(plan.runs[2].name, "grid_c0.1_p10");
  EXPECT_EQ(plan.runs[4].name, "grid_c0.01_p10");
  EXPECT_EQ(plan.runs[4].sampler.cache_period, 10);
  EXPECT_DOUBLE_EQ(plan.runs[4].sampler.cache_fraction, 0.01);
  EXPECT_EQ(plan.runs[4].sampler.fanouts, (std::vector<int>{5}));
}

TEST(BenchPlan, RejectsMistakes) {
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("runs=a\nb.strategy=ns\n")), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("runs=a\na.epochs=3\n")), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("typo=1\n")), InvalidArgument);
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("grid.base=zzz\ngrid.cache_fracs=0.1\n"
                                                      "grid.periods=1\n")),
               InvalidArgument);
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("runs=a\na.strategy=gns\na.cache_frac=0\n")),
               InvalidArgument);
  EXPECT_THROW(parse_bench_plan(KeyValueConfig::parse("grid.cache_fracs=0.1\n")), InvalidArgument);
}

TEST(KeyValueConfig, LoadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "gns_config_test.cfg";
  {
    std::ofstream out(path);
    out << "epochs=7\n";
  }
  EXPECT_EQ(KeyValueConfig::load(path).get("epochs"), "7");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace gns
