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

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "gns/error.hpp"
#include "gns/graph.hpp"

namespace gns {

namespace {

constexpr std::array<char, 4> kGraphMagic = {'G', 'N', 'S', 'G'};
constexpr std::uint16_t kGraphVersion = 1;
// magic + version + num_nodes + num_edges + feature_dim + has_labels + has_masks
constexpr std::size_t kHeaderBytes = 4 + 2 + 8 + 8 + 4 + 1 + 1;

static_assert(std::endian::native == std::endian::little,
              "binary graph I/O assumes a little-endian host");

class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    const auto* p = reinterpret_cast<const char*>(&value);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  template <typename T>
  void put_array(std::span<const T> values) {
    const auto* p = reinterpret_cast<const char*>(values.data());
    buf_.insert(buf_.end(), p, p + values.size_bytes());
  }
  void put_raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<char> buf) : buf_(std::move(buf)) {}
  template <typename T>
  T get() {
    T value;
    std::memcpy(&value, take(sizeof(T)), sizeof(T));
    return value;
  }
  template <typename T>
  std::vector<T> get_array(std::size_t count) {
    std::vector<T> out(count);
    if (count > 0) std::memcpy(out.data(), take(count * sizeof(T)), count * sizeof(T));
    return out;
  }
  const char* take(std::size_t n) {
    if (pos_ + n > buf_.size()) {
      throw IoError("unexpected end of data at offset " + std::to_string(pos_));
    }
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::size_t size() const { return buf_.size(); }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Graph load_edgelist(const std::filesystem::path& path, std::optional<NodeId> num_nodes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Edge> edges;
  NodeId max_id = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    long long u = 0;
    long long v = 0;
    std::string rest;
    if (!(ss >> u >> v) || (ss >> rest) || u < 0 || v < 0) {
      throw IoError(path.string() + ":" + std::to_string(lineno) +
                    ": expected two non-negative integers, got '" + t + "'");
    }
    edges.push_back({u, v});
    max_id = std::max<NodeId>({max_id, u, v});
  }
  return build_csr(edges, num_nodes.value_or(max_id + 1));
}

void save_binary(const Graph& g, const std::filesystem::path& path) {
  const NodeData& d = g.data();
  ByteWriter w;
  w.put_raw(kGraphMagic.data(), kGraphMagic.size());
  w.put<std::uint16_t>(kGraphVersion);
  w.put<std::uint64_t>(static_cast<std::uint64_t>(g.num_nodes()));
  w.put<std::uint64_t>(static_cast<std::uint64_t>(g.num_entries()));
  w.put<std::uint32_t>(d.feature_dim);
  w.put<std::uint8_t>(d.has_labels() ? 1 : 0);
  w.put<std::uint8_t>(d.has_masks() ? 1 : 0);
  w.put_array(g.indptr());
  w.put_array(g.indices());
  w.put_array(std::span<const float>(d.features));
  if (d.has_labels()) w.put_array(std::span<const std::int32_t>(d.labels));
  if (d.has_masks()) {
    w.put_array(std::span<const std::uint8_t>(d.train_mask));
    w.put_array(std::span<const std::uint8_t>(d.val_mask));
    w.put_array(std::span<const std::uint8_t>(d.test_mask));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Graph load_binary(const std::filesystem::path& path) {
  ByteReader r(read_file(path));
  if (r.size() < kHeaderBytes) {
    throw IoError(path.string() + ": expected at least " + std::to_string(kHeaderBytes) +
                  " header bytes, file has " + std::to_string(r.size()));
  }
  const char* magic = r.take(4);
  if (!std::equal(kGraphMagic.begin(), kGraphMagic.end(), magic)) {
    throw IoError(path.string() + ": bad magic at offset 0 (expected GNSG)");
  }
  const auto version = r.get<std::uint16_t>();
  if (version != kGraphVersion) {
    throw IoError(path.string() + ": unsupported version " + std::to_string(version) +
                  " at offset 4");
  }
  const auto n = r.get<std::uint64_t>();
  const auto m = r.get<std::uint64_t>();
  const auto dim = r.get<std::uint32_t>();
  const auto has_labels = r.get<std::uint8_t>();
  const auto has_masks = r.get<std::uint8_t>();

  const std::uint64_t expected = kHeaderBytes + (n + 1) * 8 + m * 8 + n * dim * 4 +
                                 (has_labels ? n * 4 : 0) + (has_masks ? 3 * n : 0);
  if (expected != r.size()) {
    throw IoError(path.string() + ": expected " + std::to_string(expected) +
                  " bytes from header, file has " + std::to_string(r.size()));
  }
  auto indptr = r.get_array<EdgeIndex>(n + 1);
  auto indices = r.get_array<NodeId>(m);
  NodeData d;
  d.feature_dim = dim;
  d.features = r.get_array<float>(n * dim);
  if (has_labels) d.labels = r.get_array<std::int32_t>(n);
  if (has_masks) {
    d.train_mask = r.get_array<std::uint8_t>(n);
    d.val_mask = r.get_array<std::uint8_t>(n);
    d.test_mask = r.get_array<std::uint8_t>(n);
  }
  return Graph(std::move(indptr), std::move(indices), std::move(d));
}

Graph attach_feature_csv(const Graph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  const auto n = static_cast<std::size_t>(g.num_nodes());
  NodeData d = g.data();
  d.labels.assign(n, -1);
  std::vector<std::uint8_t> seen(n, 0);
  std::optional<std::uint32_t> dim;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    auto where = [&] { return path.string() + ":" + std::to_string(lineno) + ": "; };
    if (cells.size() < 2) throw IoError(where() + "expected node_id,label,features...");
    long long id = -1;
    int label = -1;
    if (std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), id).ec !=
            std::errc{} ||
        id < 0 || static_cast<std::size_t>(id) >= n) {
      // Tolerate a single header row.
      if (lineno == 1 && !cells[0].empty() && !std::isdigit(cells[0][0])) continue;
      throw IoError(where() + "bad node id '" + cells[0] + "'");
    }
    if (std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), label).ec !=
        std::errc{}) {
      throw IoError(where() + "bad label '" + cells[1] + "'");
    }
    const auto row_dim = static_cast<std::uint32_t>(cells.size() - 2);
    if (!dim) {
      dim = row_dim;
      d.feature_dim = row_dim;
      d.features.assign(n * row_dim, 0.0F);
    } else if (*dim != row_dim) {
      throw IoError(where() + "expected " + std::to_string(*dim) + " features, got " +
                    std::to_string(row_dim));
    }
    if (seen[id]) throw IoError(where() + "duplicate node id " + cells[0]);
    seen[id] = 1;
    d.labels[id] = label;
    for (std::uint32_t j = 0; j < row_dim; ++j) {
      try {
        d.features[id * row_dim + j] = std::stof(cells[j + 2]);
      } catch (const std::exception&) {
        throw IoError(where() + "bad feature value '" + cells[j + 2] + "'");
      }
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) {
    throw IoError(path.string() + ": not every node has a feature row");
  }
  return g.with_data(std::move(d));
}

}  // namespace gns
