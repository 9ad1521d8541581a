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

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>

#include "gns/benchmark.hpp"
#include "gns/cache.hpp"
#include "gns/config.hpp"
#include "gns/error.hpp"
#include "gns/graph.hpp"
#include "gns/model.hpp"
#include "gns/train.hpp"

namespace gns::cli {

namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  std::string out;
  std::string config;
};

struct GenFlags {
  std::string kind;
  long long n = 1000;
  int attach = 5;
  int blocks = 4;
  double p_in = 0.02;
  double p_out = 0.002;
  int feature_dim = -1;
};

struct CacheFlags {
  std::string graph;
  std::string mode = "degree";
  double size_frac = 0.01;
  std::string fanouts = "15,10,5";
};

// Sampler/train flags; each is optional so that unset flags leave the
// config-file value in place.
struct TrainFlags {
  std::string graph;
  std::string name;
  std::map<std::string, std::string> overrides;
};

fs::path ensure_dir(const std::string& dir) {
  const fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
  return p;
}

int cmd_gen(const GenFlags& f, const GlobalFlags& g, std::ostream& out) {
  if (g.out.empty()) throw InvalidArgument("gen needs --out <file>");
  Graph graph;
  if (f.kind == "powerlaw") {
    graph = generate_powerlaw(f.n, f.attach, g.seed);
    if (f.feature_dim > 0) {
      graph = with_random_features(graph, static_cast<std::uint32_t>(f.feature_dim), g.seed + 1);
    }
  } else {
    SbmOptions opts;
    if (f.feature_dim >= 0) opts.feature_dim = static_cast<std::uint32_t>(f.feature_dim);
    graph = generate_sbm(f.n, f.blocks, f.p_in, f.p_out, g.seed, opts);
  }
  save_binary(graph, g.out);
  const double avg = graph.num_nodes() > 0 ? static_cast<double>(graph.num_entries()) /
                                                 static_cast<double>(graph.num_nodes())
                                           : 0.0;
  out << "nodes=" << graph.num_nodes() << " edges=" << graph.num_undirected_edges()
      << " avg_degree=" << std::fixed << std::setprecision(2) << avg << '\n';
  return kOk;
}

int cmd_cache(const CacheFlags& f, const GlobalFlags& g, std::ostream& out) {
  if (!(f.size_frac >= 0.0 && f.size_frac <= 1.0)) {
    throw InvalidArgument("--size-frac must be in [0, 1]");
  }
  const auto fanouts = parse_int_list(f.fanouts);
  if (fanouts.empty()) throw InvalidArgument("--fanouts needs at least one value");
  const CacheMode mode = f.mode == "walk" ? CacheMode::kRandomWalk : CacheMode::kDegree;
  const Graph graph = load_binary(f.graph);
  auto probs = std::make_shared<const ProbVector>(
      cache_probs(graph, mode, fanouts, static_cast<int>(fanouts.size())));
  const auto size = static_cast<std::int64_t>(
      std::llround(f.size_frac * static_cast<double>(graph.num_nodes())));
  const auto cache = build_cache(graph, probs, size, 0, g.seed);
  const auto train = graph.train_nodes();
  const double coverage = cache_coverage(*cache, train);
  if (!g.out.empty()) cache->export_text(g.out);
  out << "cache_size=" << cache->size() << " coverage=" << std::fixed << std::setprecision(6)
      << coverage << '\n';
  return kOk;
}

KeyValueConfig merged_config(const GlobalFlags& g,
                             const std::map<std::string, std::string>& overrides,
                             const std::set<std::string>& allowed) {
  KeyValueConfig kv;
  if (!g.config.empty()) kv = KeyValueConfig::load(g.config);
  kv.reject_unknown(allowed);
  for (const auto& [k, v] : overrides) kv.set(k, v);
  if (g.seed_given) kv.set("seed", std::to_string(g.seed));
  kv.set("workers", std::to_string(g.workers));
  return kv;
}

int cmd_train(const TrainFlags& f, const GlobalFlags& g, std::ostream& out) {
  std::set<std::string> allowed = sampler_keys();
  allowed.insert(train_keys().begin(), train_keys().end());
  const KeyValueConfig kv = merged_config(g, f.overrides, allowed);
  SamplerConfig sc;
  TrainConfig tc;
  apply_sampler_keys(kv, sc);
  apply_train_keys(kv, tc);
  sc.validate();
  if (tc.epochs < 0) throw InvalidArgument("--epochs must be >= 0");
  if (tc.num_workers < 1) throw InvalidArgument("--workers must be >= 1");

  const fs::path dir = ensure_dir(g.out);
  auto graph = std::make_shared<const Graph>(load_binary(f.graph));
  const TrainReport report = train(graph, sc, tc);
  const std::string name = f.name.empty() ? std::string(to_string(sc.strategy)) : f.name;
  write_train_csv(report, dir / ("train_" + name + ".csv"));
  save_checkpoint(report.params, dir / ("model_" + name + ".gnsw"));
  const EpochStats& last = report.final();
  out << "epochs=" << report.epochs.size() - 1 << std::fixed << std::setprecision(4)
      << " loss=" << last.loss << " train_f1=" << last.train_f1 << " val_f1=" << last.val_f1
      << " test_f1=" << last.test_f1 << '\n';
  return kOk;
}

int cmd_bench(const std::string& graph_path, const GlobalFlags& g, std::ostream& out) {
  if (g.config.empty()) throw InvalidArgument("bench needs --config <file>");
  KeyValueConfig kv = KeyValueConfig::load(g.config);
  if (g.seed_given) kv.set("seed", std::to_string(g.seed));
  kv.set("workers", std::to_string(g.workers));
  const BenchPlan plan = parse_bench_plan(kv);
  if (plan.runs.empty()) {
    out << "no runs configured\n";
    return kOk;
  }
  const fs::path dir = ensure_dir(g.out);
  auto graph = std::make_shared<const Graph>(load_binary(graph_path));
  const BenchResult result = run_benchmark(graph, plan, dir, fs::path(graph_path).stem().string());
  for (const auto& r : result.reports) {
    out << r.run_id << ": batches=" << r.batches.size() << std::fixed << std::setprecision(1)
        << " mean_input=" << r.input_nodes().mean << " mean_cached=" << r.cached_inputs().mean
        << '\n';
  }
  return kOk;
}

int cmd_report(const std::string& dir, const GlobalFlags& g, std::ostream& out) {
  const ReportData data = collect_report(dir);
  print_report(data, out);
  const fs::path csv = g.out.empty() ? fs::path(dir) / "summary.csv" : fs::path(g.out);
  if (csv.has_parent_path()) ensure_dir(csv.parent_path().string());
  write_report_csv(data, csv);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mini-batch sampling engine: graph generation, caches, training and benchmarks",
               "gns"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Seed for all randomness")->each([&](const std::string&) {
    g.seed_given = true;
  });
  app.add_option("--workers", g.workers, "Sampler worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (gen, cache, report) or directory (train, bench)");
  app.add_option("--config", g.config, "key=value config file");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic graph file");
  gen_cmd->add_option("kind", gen.kind)->required()->check(CLI::IsMember({"powerlaw", "sbm"}));
  gen_cmd->add_option("--n", gen.n, "Number of nodes")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--attach", gen.attach, "Edges per new node (powerlaw)");
  gen_cmd->add_option("--blocks", gen.blocks, "Number of blocks (sbm)");
  gen_cmd->add_option("--p-in", gen.p_in, "Within-block edge probability (sbm)");
  gen_cmd->add_option("--p-out", gen.p_out, "Cross-block edge probability (sbm)");
  gen_cmd->add_option("--feature-dim", gen.feature_dim, "Node feature width");

  CacheFlags cache;
  auto* cache_cmd = app.add_subcommand("cache", "Sample a node cache and report coverage");
  cache_cmd->add_option("graph", cache.graph)->required();
  cache_cmd->add_option("--mode", cache.mode)->check(CLI::IsMember({"degree", "walk"}));
  cache_cmd->add_option("--size-frac", cache.size_frac, "Cache size as a fraction of |V|");
  cache_cmd->add_option("--fanouts", cache.fanouts, "Comma-separated fanouts, target layer first");

  TrainFlags tr;
  auto* train_cmd = app.add_subcommand("train", "Train the reference model with one sampler");
  train_cmd->add_option("graph", tr.graph)->required();
  train_cmd->add_option("--name", tr.name, "Suffix for output files (default: strategy)");
  auto add_override = [&](const std::string& flag, const std::string& key,
                          const std::string& help) {
    train_cmd->add_option_function<std::string>(
        flag, [&tr, key](const std::string& v) { tr.overrides[key] = v; }, help);
  };
  add_override("--strategy", "strategy", "ns | gns | ladies");
  add_override("--fanouts", "fanouts", "Comma-separated fanouts, target layer first");
  add_override("--layer-size", "layer_size", "LADIES nodes per layer");
  add_override("--cache-frac", "cache_frac", "GNS cache size as a fraction of |V|");
  add_override("--period", "period", "Epochs between cache refreshes");
  add_override("--input-cache-only", "input_cache_only", "Input layer samples only cached nodes");
  add_override("--weights", "weights", "gns-paper | gns-exact");
  add_override("--cache-mode", "cache_mode", "degree | walk | auto");
  add_override("--inclusion", "inclusion", "closed-form | empirical");
  add_override("--exact-resamples", "exact_resamples", "Cache resamples for gns-exact");
  add_override("--batch-size", "batch_size", "Targets per mini-batch");
  add_override("--epochs", "epochs", "Training epochs");
  add_override("--lr", "lr", "Adam learning rate");
  add_override("--hidden", "hidden", "Hidden width");
  add_override("--queue-capacity", "queue_capacity", "Bounded queue capacity");

  std::string bench_graph;
  auto* bench_cmd = app.add_subcommand("bench", "Run every configured sampler and write CSVs");
  bench_cmd->add_option("graph", bench_graph)->required();

  std::string report_dir;
  auto* report_cmd = app.add_subcommand("report", "Summarize CSVs from a bench/train directory");
  report_cmd->add_option("dir", report_dir)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "gns: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, g, out);
    if (cache_cmd->parsed()) return cmd_cache(cache, g, out);
    if (train_cmd->parsed()) return cmd_train(tr, g, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_graph, g, out);
    if (report_cmd->parsed()) return cmd_report(report_dir, g, out);
  } catch (const InvalidArgument& e) {
    err << "gns: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "gns: " << e.what() << '\n';
    return kIo;
  } catch (const InvariantViolation& e) {
    err << "gns: invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    err << "gns: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}

}  // namespace gns::cli
