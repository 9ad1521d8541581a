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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "gns/cache.hpp"
#include "gns/error.hpp"
#include "gns/graph.hpp"
#include "gns/sampler.hpp"
#include "gns/train.hpp"

namespace py = pybind11;

namespace {

template <typename T>
py::array_t<T> to_numpy(std::span<const T> values) {
  py::array_t<T> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

gns::ProbVector probs_from(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  gns::ProbVector p;
  p.values.assign(a.data(), a.data() + a.size());
  return p;
}

py::dict block_to_dict(const gns::LayerBlock& b) {
  py::array_t<std::int64_t> src(static_cast<py::ssize_t>(b.edges.size()));
  py::array_t<std::int64_t> dst(static_cast<py::ssize_t>(b.edges.size()));
  py::array_t<double> w(static_cast<py::ssize_t>(b.edges.size()));
  py::array_t<bool> cached(static_cast<py::ssize_t>(b.edges.size()));
  for (std::size_t i = 0; i < b.edges.size(); ++i) {
    src.mutable_data()[i] = b.edges[i].src;
    dst.mutable_data()[i] = b.edges[i].dst;
    w.mutable_data()[i] = b.edges[i].weight;
    cached.mutable_data()[i] = b.edges[i].cached;
  }
  py::dict d;
  d["edge_src"] = src;
  d["edge_dst"] = dst;
  d["edge_weight"] = w;
  d["edge_cached"] = cached;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GNS mini-batch sampling engine";

  py::register_exception<gns::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<gns::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<gns::InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<gns::Graph, std::shared_ptr<gns::Graph>>(m, "Graph")
      .def_property_readonly("num_nodes", &gns::Graph::num_nodes)
      .def_property_readonly("num_edges", &gns::Graph::num_undirected_edges)
      .def_property_readonly("feature_dim", &gns::Graph::feature_dim)
      .def_property_readonly("indptr", [](const gns::Graph& g) { return to_numpy(g.indptr()); })
      .def_property_readonly("indices", [](const gns::Graph& g) { return to_numpy(g.indices()); })
      .def("degree", [](const gns::Graph& g, gns::NodeId v) { return gns::degree(g, v); })
      .def("neighbors",
           [](const gns::Graph& g, gns::NodeId v) {
             gns::degree(g, v);
             return to_numpy(g.neighbors(v));
           })
      .def("train_nodes", &gns::Graph::train_nodes)
      .def("test_nodes", &gns::Graph::test_nodes)
      .def("__eq__", [](const gns::Graph& a, const gns::Graph& b) { return a == b; });

  m.def(
      "build_csr",
      [](const std::vector<std::pair<gns::NodeId, gns::NodeId>>& edges, gns::NodeId n) {
        std::vector<gns::Edge> e;
        e.reserve(edges.size());
        for (const auto& [u, v] : edges) e.push_back({u, v});
        return std::make_shared<gns::Graph>(gns::build_csr(e, n));
      },
      py::arg("edges"), py::arg("num_nodes"));
  m.def(
      "generate_powerlaw",
      [](gns::NodeId n, int attach, std::uint64_t seed) {
        return std::make_shared<gns::Graph>(gns::generate_powerlaw(n, attach, seed));
      },
      py::arg("n"), py::arg("attach"), py::arg("seed") = 0);
  m.def(
      "generate_sbm",
      [](gns::NodeId n, int blocks, double p_in, double p_out, std::uint64_t seed,
         std::uint32_t feature_dim) {
        gns::SbmOptions opts;
        opts.feature_dim = feature_dim;
        return std::make_shared<gns::Graph>(gns::generate_sbm(n, blocks, p_in, p_out, seed, opts));
      },
      py::arg("n"), py::arg("num_blocks"), py::arg("p_in"), py::arg("p_out"),
      py::arg("seed") = 0, py::arg("feature_dim") = 16);
  m.def("save_binary", [](const gns::Graph& g, const std::string& path) {
    gns::save_binary(g, path);
  });
  m.def("load_binary", [](const std::string& path) {
    return std::make_shared<gns::Graph>(gns::load_binary(path));
  });

  m.def("degree_probs", [](const gns::Graph& g) {
    return to_numpy(std::span<const double>(gns::degree_probs(g).values));
  });
  m.def(
      "random_walk_probs",
      [](const gns::Graph& g, const std::vector<gns::NodeId>& train,
         const std::vector<int>& fanouts, int layers) {
        const auto p = gns::random_walk_probs(g, gns::NodeSet(train, g.num_nodes()), fanouts, layers);
        return to_numpy(std::span<const double>(p.values));
      },
      py::arg("graph"), py::arg("train_nodes"), py::arg("fanouts"), py::arg("layers"));
  m.def(
      "sample_cache",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> probs,
         std::int64_t size, std::uint64_t seed) {
        const auto set = gns::sample_cache(probs_from(probs), size, seed);
        return std::vector<gns::NodeId>(set.ids().begin(), set.ids().end());
      },
      py::arg("probs"), py::arg("cache_size"), py::arg("seed") = 0);
  m.def("inclusion_prob", &gns::inclusion_prob, py::arg("p"), py::arg("cache_size"));
  m.def("gns_weight_paper", &gns::gns_weight_paper, py::arg("p"), py::arg("cache_size"),
        py::arg("k"), py::arg("n_cached"));

  py::class_<gns::CacheState, std::shared_ptr<gns::CacheState>>(m, "CacheState")
      .def_property_readonly("size", &gns::CacheState::size)
      .def_property_readonly("epoch", &gns::CacheState::epoch)
      .def_property_readonly("nodes",
                             [](const gns::CacheState& c) { return to_numpy(c.nodes().ids()); })
      .def_property_readonly("inclusion_probs",
                             [](const gns::CacheState& c) { return to_numpy(c.inclusion_probs()); })
      .def("contains", &gns::CacheState::contains)
      .def("cached_neighbors",
           [](const gns::CacheState& c, gns::NodeId v) { return to_numpy(c.cached_neighbors(v)); });

  m.def(
      "build_cache",
      [](const gns::Graph& g, py::array_t<double, py::array::c_style | py::array::forcecast> probs,
         std::int64_t size, std::int64_t epoch, std::uint64_t seed) {
        auto p = std::make_shared<const gns::ProbVector>(probs_from(probs));
        return std::const_pointer_cast<gns::CacheState>(gns::build_cache(g, p, size, epoch, seed));
      },
      py::arg("graph"), py::arg("probs"), py::arg("cache_size"), py::arg("epoch") = 0,
      py::arg("seed") = 0);

  py::class_<gns::SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_property(
          "strategy", [](const gns::SamplerConfig& c) { return std::string(gns::to_string(c.strategy)); },
          [](gns::SamplerConfig& c, const std::string& s) { c.strategy = gns::parse_strategy(s); })
      .def_property(
          "weights", [](const gns::SamplerConfig& c) { return std::string(gns::to_string(c.gns_weights)); },
          [](gns::SamplerConfig& c, const std::string& s) { c.gns_weights = gns::parse_weight_policy(s); })
      .def_readwrite("fanouts", &gns::SamplerConfig::fanouts)
      .def_readwrite("layer_size", &gns::SamplerConfig::layer_size)
      .def_readwrite("cache_fraction", &gns::SamplerConfig::cache_fraction)
      .def_readwrite("cache_period", &gns::SamplerConfig::cache_period)
      .def_readwrite("input_layer_cache_only", &gns::SamplerConfig::input_layer_cache_only)
      .def_readwrite("batch_size", &gns::SamplerConfig::batch_size)
      .def_readwrite("seed", &gns::SamplerConfig::seed)
      .def("validate", &gns::SamplerConfig::validate);

  py::class_<gns::LayerBlock>(m, "LayerBlock")
      .def_readonly("dst_nodes", &gns::LayerBlock::dst_nodes)
      .def_readonly("src_nodes", &gns::LayerBlock::src_nodes)
      .def_readonly("fanout", &gns::LayerBlock::fanout)
      .def_property_readonly("policy", [](const gns::LayerBlock& b) { return std::string(gns::to_string(b.policy)); })
      .def_property_readonly("num_edges", [](const gns::LayerBlock& b) { return b.edges.size(); })
      .def("edges", &block_to_dict);

  py::class_<gns::MiniBatch>(m, "MiniBatch")
      .def_readonly("blocks", &gns::MiniBatch::blocks)
      .def_readonly("targets", &gns::MiniBatch::targets)
      .def_readonly("input_nodes", &gns::MiniBatch::input_nodes)
      .def("dump", &gns::dump_minibatch);

  m.def(
      "build_minibatch",
      [](const gns::Graph& g, std::shared_ptr<gns::CacheState> cache,
         const std::vector<gns::NodeId>& targets, const gns::SamplerConfig& config,
         std::uint64_t epoch, std::uint64_t batch) {
        const gns::DrawKey key{config.seed, epoch, batch};
        return gns::build_minibatch(g, cache.get(), targets, config, key);
      },
      py::arg("graph"), py::arg("cache"), py::arg("targets"), py::arg("config"),
      py::arg("epoch") = 0, py::arg("batch") = 0);
  m.def(
      "sample_ladies",
      [](const gns::Graph& g, const std::vector<gns::NodeId>& targets, int layer_size,
         int layers, std::uint64_t seed) {
        return gns::sample_ladies(g, targets, layer_size, layers, gns::DrawKey{seed, 0, 0});
      },
      py::arg("graph"), py::arg("targets"), py::arg("layer_size"), py::arg("num_layers"),
      py::arg("seed") = 0);
  m.def("isolated_fraction", &gns::isolated_fraction);

  m.def(
      "train",
      [](std::shared_ptr<gns::Graph> g, const gns::SamplerConfig& sampler, int epochs, double lr,
         int hidden, std::uint64_t seed, int workers) {
        gns::TrainConfig tc;
        tc.epochs = epochs;
        tc.adam.lr = lr;
        tc.hidden = hidden;
        tc.seed = seed;
        tc.num_workers = workers;
        gns::TrainReport report;
        {
          py::gil_scoped_release release;
          report = gns::train(g, sampler, tc);
        }
        py::list rows;
        for (const auto& e : report.epochs) {
          py::dict d;
          d["epoch"] = e.epoch;
          d["loss"] = e.loss;
          d["train_f1"] = e.train_f1;
          d["val_f1"] = e.val_f1;
          d["test_f1"] = e.test_f1;
          d["epoch_ms"] = e.epoch_ms;
          d["mean_input_nodes"] = e.mean_input_nodes;
          d["mean_cached"] = e.mean_cached;
          rows.append(d);
        }
        return rows;
      },
      py::arg("graph"), py::arg("sampler"), py::arg("epochs") = 10, py::arg("lr") = 0.003,
      py::arg("hidden") = 64, py::arg("seed") = 0, py::arg("workers") = 1);
}
