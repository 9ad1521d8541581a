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
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gns/sampler.hpp"
#include "gns/train.hpp"

namespace gns {

// Flat "key=value" text, one entry per line, '#' starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& origin = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  // Entries of the form "<prefix>.<rest>", keyed by rest.
  KeyValueConfig scoped(const std::string& prefix) const;

  // Throws InvalidArgument on the first key outside `allowed`.
  void reject_unknown(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

// Keys understood by apply_sampler_keys / apply_train_keys.
const std::set<std::string>& sampler_keys();
const std::set<std::string>& train_keys();

// Overwrites fields named in kv; keys outside the set are ignored here.
void apply_sampler_keys(const KeyValueConfig& kv, SamplerConfig& cfg);
void apply_train_keys(const KeyValueConfig& kv, TrainConfig& cfg);

std::vector<int> parse_int_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

struct BenchRun {
  std::string name;
  SamplerConfig sampler;
};

struct BenchPlan {
  TrainConfig train;
  std::vector<BenchRun> runs;
};

// Bench file layout:
//   epochs=10              train keys, and sampler keys as defaults for runs
//   runs=ns,gns            named runs
//   gns.strategy=gns       per-run sampler overrides
//   grid.base=gns          optional grid: one run per (cache_frac, period)
//   grid.cache_fracs=0.1,0.01
//   grid.periods=1,2,5,10
BenchPlan parse_bench_plan(const KeyValueConfig& kv);

}  // namespace gns
