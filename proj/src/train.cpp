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

#include "gns/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "gns/error.hpp"
#include "gns/sampler_pool.hpp"

namespace gns {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void evaluate(const Graph& g, const ModelParams& params, EpochStats& stats) {
  const Matrix logits = full_batch_forward(g, params);
  auto f1 = [&](const std::vector<NodeId>& nodes) {
    if (nodes.empty()) return 0.0;
    Matrix rows(static_cast<Eigen::Index>(nodes.size()), logits.cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = logits.row(nodes[i]);
    return micro_f1(rows, gather_labels(g, nodes));
  };
  stats.train_f1 = f1(g.train_nodes());
  stats.val_f1 = f1(g.val_nodes());
  stats.test_f1 = f1(g.test_nodes());
}

}  // namespace

TrainReport train(std::shared_ptr<const Graph> g, const SamplerConfig& sampler,
                  const TrainConfig& config, const BatchObserver& observer) {
  if (!g) throw InvalidArgument("train needs a graph");
  if (!g->data().has_labels() || !g->data().has_features()) {
    throw InvalidArgument("training needs node features and labels");
  }
  if (config.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  if (!(config.adam.lr > 0.0)) throw InvalidArgument("learning rate must be > 0");
  if (config.hidden < 1) throw InvalidArgument("hidden dim must be >= 1");
  sampler.validate();

  const auto labels = g->data().labels;
  const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> dims{static_cast<int>(g->feature_dim())};
  for (int l = 1; l < sampler.num_layers(); ++l) dims.push_back(config.hidden);
  dims.push_back(num_classes);

  TrainReport report;
  report.params = init_params(dims, derive_seed({config.seed, 0x696e6974ULL}));
  AdamState adam = adam_init(report.params);

  EpochStats init;
  {
    const auto train_nodes = g->train_nodes();
    const Matrix logits = full_batch_forward(*g, report.params);
    Matrix rows(static_cast<Eigen::Index>(train_nodes.size()), logits.cols());
    for (std::size_t i = 0; i < train_nodes.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) = logits.row(train_nodes[i]);
    }
    init.loss = loss_and_grad(rows, gather_labels(*g, train_nodes)).loss;
    evaluate(*g, report.params, init);
  }
  report.epochs.push_back(init);
  if (config.epochs == 0) return report;

  SamplerConfig sc = sampler;
  sc.seed = derive_seed({config.seed, sampler.seed});
  SamplerPool pool(g, sc, config.num_workers, config.queue_capacity);
  const std::string strategy(to_string(sampler.strategy));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto t_epoch = Clock::now();
    double loss_sum = 0.0;
    double input_sum = 0.0;
    double cached_sum = 0.0;
    std::int64_t batches = 0;
    pool.run_epoch(epoch, [&](SampledBatch&& sb) {
      const auto t0 = Clock::now();
      ForwardTrace trace;
      const Matrix logits = forward(sb.batch, *g, report.params, &trace);
      const LossGrad lg = loss_and_grad(logits, gather_labels(*g, sb.batch.targets));
      const ModelParams grads = backward(sb.batch, report.params, trace, lg.grad);
      adam_step(report.params, grads, adam, config.adam);

      BatchRecord rec;
      rec.epoch = epoch;
      rec.batch = sb.batch_index;
      rec.strategy = strategy;
      rec.stats = compute_batch_stats(sb.batch, sb.cache.get(), g->feature_dim());
      rec.stats.sample_ms = sb.sample_ms;
      rec.stats.train_step_ms = ms_since(t0);
      loss_sum += lg.loss;
      input_sum += static_cast<double>(rec.stats.num_input_nodes);
      cached_sum += static_cast<double>(rec.stats.num_cached_input);
      ++batches;
      if (observer) observer(rec);
    });
    EpochStats stats;
    stats.epoch = epoch + 1;
    stats.loss = batches > 0 ? loss_sum / static_cast<double>(batches) : 0.0;
    stats.mean_input_nodes = batches > 0 ? input_sum / static_cast<double>(batches) : 0.0;
    stats.mean_cached = batches > 0 ? cached_sum / static_cast<double>(batches) : 0.0;
    stats.epoch_ms = ms_since(t_epoch);
    evaluate(*g, report.params, stats);
    report.epochs.push_back(stats);
  }
  return report;
}

void write_train_csv(const TrainReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kTrainCsvHeader << '\n';
  out.precision(6);
  out << std::fixed;
  for (const EpochStats& e : report.epochs) {
    out << e.epoch << ',' << e.loss << ',' << e.train_f1 << ',' << e.val_f1 << ',' << e.test_f1
        << ',' << std::llround(e.epoch_ms) << ','
        << e.mean_input_nodes << ',' << e.mean_cached << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace gns
