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

#include "gns/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gns/error.hpp"

namespace gns {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw InvalidArgument("'" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw InvalidArgument("'" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidArgument("'" + key + "' expects a boolean, got '" + v + "'");
}

CacheMode to_cache_mode(const std::string& v) {
  if (v == "degree") return CacheMode::kDegree;
  if (v == "walk") return CacheMode::kRandomWalk;
  if (v == "auto") return CacheMode::kAuto;
  throw InvalidArgument("cache_mode must be degree|walk|auto, got '" + v + "'");
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
  KeyValueConfig kv;
  kv.origin_ = origin;
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(std::string_view(line).substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) {
      throw InvalidArgument(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    kv.values_[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return kv;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw InvalidArgument("missing config key '" + key + "'");
  return it->second;
}

KeyValueConfig KeyValueConfig::scoped(const std::string& prefix) const {
  KeyValueConfig out;
  out.origin_ = origin_;
  const std::string p = prefix + ".";
  for (const auto& [k, v] : values_) {
    if (k.rfind(p, 0) == 0) out.values_[k.substr(p.size())] = v;
  }
  return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : values_) {
    if (allowed.count(k) == 0) throw InvalidArgument(origin_ + ": unknown key '" + k + "'");
  }
}

const std::set<std::string>& sampler_keys() {
  static const std::set<std::string> keys = {
      "strategy", "fanouts", "layer_size", "cache_frac", "period", "input_cache_only",
      "batch_size", "weights", "cache_mode", "inclusion", "exact_resamples"};
  return keys;
}

const std::set<std::string>& train_keys() {
  static const std::set<std::string> keys = {"epochs", "lr", "hidden", "seed", "workers",
                                             "queue_capacity"};
  return keys;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& s : split(text, ',')) out.push_back(static_cast<int>(to_int("list", s)));
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double("list", s));
  return out;
}

void apply_sampler_keys(const KeyValueConfig& kv, SamplerConfig& cfg) {
  for (const auto& [k, v] : kv.values()) {
    if (k == "strategy") {
      cfg.strategy = parse_strategy(v);
    } else if (k == "fanouts") {
      cfg.fanouts = parse_int_list(v);
    } else if (k == "layer_size") {
      cfg.layer_size = static_cast<int>(to_int(k, v));
    } else if (k == "cache_frac") {
      cfg.cache_fraction = to_double(k, v);
    } else if (k == "period") {
      cfg.cache_period = static_cast<int>(to_int(k, v));
    } else if (k == "input_cache_only") {
      cfg.input_layer_cache_only = to_bool(k, v);
    } else if (k == "batch_size") {
      cfg.batch_size = to_int(k, v);
    } else if (k == "weights") {
      cfg.gns_weights = parse_weight_policy(v);
    } else if (k == "cache_mode") {
      cfg.cache_mode = to_cache_mode(v);
    } else if (k == "inclusion") {
      if (v == "closed-form") {
        cfg.cache_options.inclusion = InclusionModel::kClosedForm;
      } else if (v == "empirical") {
        cfg.cache_options.inclusion = InclusionModel::kEmpirical;
      } else {
        throw InvalidArgument("inclusion must be closed-form|empirical, got '" + v + "'");
      }
    } else if (k == "exact_resamples") {
      cfg.exact_resamples = static_cast<int>(to_int(k, v));
      cfg.cache_options.empirical_resamples = cfg.exact_resamples;
    }
  }
}

void apply_train_keys(const KeyValueConfig& kv, TrainConfig& cfg) {
  for (const auto& [k, v] : kv.values()) {
    if (k == "epochs") {
      cfg.epochs = static_cast<int>(to_int(k, v));
    } else if (k == "lr") {
      cfg.adam.lr = to_double(k, v);
    } else if (k == "hidden") {
      cfg.hidden = static_cast<int>(to_int(k, v));
    } else if (k == "seed") {
      cfg.seed = static_cast<std::uint64_t>(to_int(k, v));
    } else if (k == "workers") {
      cfg.num_workers = static_cast<int>(to_int(k, v));
    } else if (k == "queue_capacity") {
      cfg.queue_capacity = static_cast<std::size_t>(to_int(k, v));
    }
  }
}

BenchPlan parse_bench_plan(const KeyValueConfig& kv) {
  BenchPlan plan;
  KeyValueConfig top;
  std::vector<std::string> run_names;
  if (kv.has("runs")) run_names = split(kv.get("runs"), ',');
  std::set<std::string> scopes(run_names.begin(), run_names.end());
  scopes.insert("grid");
  for (const auto& [k, v] : kv.values()) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) {
      if (k != "runs" && sampler_keys().count(k) == 0 && train_keys().count(k) == 0) {
        throw InvalidArgument("unknown bench key '" + k + "'");
      }
      top.set(k, v);
    } else if (scopes.count(k.substr(0, dot)) == 0) {
      throw InvalidArgument("bench key '" + k + "' names an undeclared run");
    }
  }
  apply_train_keys(top, plan.train);
  SamplerConfig defaults;
  apply_sampler_keys(top, defaults);

  for (const auto& name : run_names) {
    const KeyValueConfig scoped = kv.scoped(name);
    scoped.reject_unknown(sampler_keys());
    BenchRun run{name, defaults};
    apply_sampler_keys(scoped, run.sampler);
    run.sampler.validate();
    plan.runs.push_back(std::move(run));
  }

  const KeyValueConfig grid = kv.scoped("grid");
  grid.reject_unknown({"base", "cache_fracs", "periods"});
  if (!grid.values().empty()) {
    SamplerConfig base = defaults;
    if (grid.has("base")) {
      const std::string& b = grid.get("base");
      const auto it = std::find_if(plan.runs.begin(), plan.runs.end(),
                                   [&](const BenchRun& r) { return r.name == b; });
      if (it == plan.runs.end()) throw InvalidArgument("grid.base names unknown run '" + b + "'");
      base = it->sampler;
    }
    base.strategy = Strategy::kGns;
    for (double frac : parse_double_list(grid.get("cache_fracs"))) {
      for (int period : parse_int_list(grid.get("periods"))) {
        BenchRun run{"", base};
        run.sampler.cache_fraction = frac;
        run.sampler.cache_period = period;
        run.sampler.validate();
        std::ostringstream name;
        name << "grid_c" << frac << "_p" << period;
        run.name = name.str();
        plan.runs.push_back(std::move(run));
      }
    }
  }
  return plan;
}

}  // namespace gns
