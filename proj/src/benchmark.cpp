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

#include "gns/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "gns/error.hpp"
#include "gns/train.hpp"

namespace gns {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

BenchResult run_benchmark(std::shared_ptr<const Graph> g, const BenchPlan& plan,
                          const std::filesystem::path& out_dir, const std::string& graph_id) {
  BenchResult result;
  if (plan.runs.empty()) return result;
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  for (const BenchRun& run : plan.runs) {
    MetricsReport report;
    report.run_id = run.name;
    report.strategy = std::string(to_string(run.sampler.strategy));
    report.seed = plan.train.seed;
    report.graph_id = graph_id;
    const TrainReport tr = train(g, run.sampler, plan.train, [&](const BatchRecord& rec) {
      BatchRecord r = rec;
      r.run_id = run.name;
      report.batches.push_back(std::move(r));
    });
    write_batch_csv(report, out_dir / (run.name + ".csv"));

    GridRow row;
    row.run_id = run.name;
    if (run.sampler.strategy == Strategy::kGns) {
      row.cache_frac = run.sampler.cache_fraction;
      row.period = run.sampler.cache_period;
    }
    row.test_f1 = tr.final().test_f1;
    row.mean_input = report.input_nodes().mean;
    row.mean_cached = report.cached_inputs().mean;
    result.grid.push_back(row);
    result.reports.push_back(std::move(report));
  }
  write_grid_csv(result.grid, out_dir / "grid.csv");
  return result;
}

void write_grid_csv(const std::vector<GridRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kGridCsvHeader << '\n';
  out << std::setprecision(6) << std::fixed;
  for (const GridRow& r : rows) {
    out << r.cache_frac << ',' << r.period << ',' << r.test_f1 << ',' << r.mean_input << ','
        << r.mean_cached << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<GridRow> read_grid_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kGridCsvHeader) {
    throw IoError(path.string() + ": not a grid CSV (header mismatch)");
  }
  std::vector<GridRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto c = split_csv(line);
    if (c.size() != 5) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    try {
      GridRow r;
      r.cache_frac = std::stod(c[0]);
      r.period = std::stoi(c[1]);
      r.test_f1 = std::stod(c[2]);
      r.mean_input = std::stod(c[3]);
      r.mean_cached = std::stod(c[4]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed value");
    }
  }
  return rows;
}

double ReportData::ns_over_gns_input_ratio() const {
  double ns = 0.0;
  double gns = 0.0;
  std::size_t n_ns = 0;
  std::size_t n_gns = 0;
  for (const RunSummary& r : runs) {
    if (r.strategy == "ns") {
      ns += r.mean_input;
      ++n_ns;
    } else if (r.strategy == "gns") {
      gns += r.mean_input;
      ++n_gns;
    }
  }
  if (n_ns == 0 || n_gns == 0 || gns <= 0.0) return 0.0;
  return (ns / static_cast<double>(n_ns)) / (gns / static_cast<double>(n_gns));
}

ReportData collect_report(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ReportData data;
  for (const auto& f : files) {
    const std::string header = first_line(f);
    if (header == kBatchCsvHeader) {
      const auto rows = read_batch_csv(f);
      RunSummary s;
      s.run_id = f.stem().string();
      s.batches = rows.size();
      for (const auto& r : rows) {
        s.strategy = r.strategy;
        s.mean_input += static_cast<double>(r.stats.num_input_nodes);
        s.mean_cached += static_cast<double>(r.stats.num_cached_input);
        s.mean_copy_bytes += static_cast<double>(r.stats.copy_bytes);
        s.mean_isolated += r.stats.isolated_frac;
        s.mean_sample_ms += r.stats.sample_ms;
      }
      if (!rows.empty()) {
        const auto n = static_cast<double>(rows.size());
        s.mean_input /= n;
        s.mean_cached /= n;
        s.mean_copy_bytes /= n;
        s.mean_isolated /= n;
        s.mean_sample_ms /= n;
      }
      data.runs.push_back(s);
    } else if (header == kGridCsvHeader) {
      auto rows = read_grid_csv(f);
      data.grid.insert(data.grid.end(), rows.begin(), rows.end());
    } else if (header == kTrainCsvHeader) {
      std::ifstream in(f);
      std::string line;
      std::getline(in, line);
      TrainSummary t;
      t.name = f.stem().string();
      double ms = 0.0;
      while (std::getline(in, line)) {
        const auto c = split_csv(line);
        if (c.size() != 8) throw IoError(f.string() + ": malformed training row");
        const int epoch = std::stoi(c[0]);
        t.final_test_f1 = std::stod(c[4]);
        if (epoch > 0) {
          ++t.epochs;
          ms += std::stod(c[5]);
        }
      }
      t.mean_epoch_ms = t.epochs > 0 ? ms / t.epochs : 0.0;
      data.trainings.push_back(t);
    }
  }
  return data;
}

void print_report(const ReportData& data, std::ostream& out) {
  out << std::fixed;
  if (!data.runs.empty()) {
    out << "Mini-batch input nodes\n";
    out << std::left << std::setw(24) << "run" << std::setw(9) << "strategy" << std::right
        << std::setw(9) << "batches" << std::setw(14) << "mean_input" << std::setw(14)
        << "mean_cached" << std::setw(16) << "mean_copy_MB" << std::setw(12) << "isolated"
        << '\n';
    for (const RunSummary& r : data.runs) {
      out << std::left << std::setw(24) << r.run_id << std::setw(9) << r.strategy << std::right
          << std::setw(9) << r.batches << std::setw(14) << std::setprecision(1) << r.mean_input
          << std::setw(14) << r.mean_cached << std::setw(16) << std::setprecision(3)
          << r.mean_copy_bytes / 1e6 << std::setw(12) << r.mean_isolated << '\n';
    }
    const double ratio = data.ns_over_gns_input_ratio();
    if (ratio > 0.0) {
      out << "NS/GNS input-node ratio: " << std::setprecision(3) << ratio << '\n';
    }
    out << '\n';
  }
  if (!data.grid.empty()) {
    std::set<double, std::greater<>> fracs;
    std::set<int> periods;
    std::map<std::pair<double, int>, double> f1;
    for (const GridRow& r : data.grid) {
      if (r.period == 0) continue;
      fracs.insert(r.cache_frac);
      periods.insert(r.period);
      f1[{r.cache_frac, r.period}] = r.test_f1;
    }
    if (!fracs.empty()) {
      out << "Test F1 by cache size (rows) and update period P (columns)\n";
      out << std::setw(12) << "cache_frac";
      for (int p : periods) out << std::setw(10) << ("P=" + std::to_string(p));
      out << '\n';
      for (double c : fracs) {
        out << std::setw(12) << std::setprecision(4) << c;
        for (int p : periods) {
          const auto it = f1.find({c, p});
          if (it == f1.end()) {
            out << std::setw(10) << "-";
          } else {
            out << std::setw(10) << std::setprecision(4) << it->second;
          }
        }
        out << '\n';
      }
      out << '\n';
    }
  }
  if (!data.trainings.empty()) {
    out << "Training runs\n";
    out << std::left << std::setw(24) << "run" << std::right << std::setw(8) << "epochs"
        << std::setw(10) << "test_f1" << std::setw(14) << "ms/epoch" << '\n';
    for (const TrainSummary& t : data.trainings) {
      out << std::left << std::setw(24) << t.name << std::right << std::setw(8) << t.epochs
          << std::setw(10) << std::setprecision(4) << t.final_test_f1 << std::setw(14)
          << std::setprecision(0) << t.mean_epoch_ms << '\n';
    }
  }
}

void write_report_csv(const ReportData& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "kind,name,strategy,batches,mean_input,mean_cached,mean_copy_bytes,mean_isolated,"
         "cache_frac,period_P,test_f1\n";
  out << std::setprecision(6) << std::fixed;
  for (const RunSummary& r : data.runs) {
    out << "run," << r.run_id << ',' << r.strategy << ',' << r.batches << ',' << r.mean_input
        << ',' << r.mean_cached << ',' << r.mean_copy_bytes << ',' << r.mean_isolated << ",,,\n";
  }
  for (const GridRow& g : data.grid) {
    out << "grid,,,," << g.mean_input << ',' << g.mean_cached << ",,," << g.cache_frac << ','
        << g.period << ',' << g.test_f1 << '\n';
  }
  for (const TrainSummary& t : data.trainings) {
    out << "train," << t.name << ",," << t.epochs << ",,,,,,," << t.final_test_f1 << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace gns
