#include "ftsim/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>

#include "ftsim/error.hpp"

namespace ftsim::harness {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string series_csv(const engine::MetricsSeries& series) {
  std::string out = "time_ns,delivered_frac,injected_frac\n";
  for (std::size_t i = 0; i < series.bins.size(); ++i) {
    out += std::to_string(series.bins[i].start_ns) + "," + fixed6(series.delivered_frac(i)) + "," +
           fixed6(series.injected_frac(i)) + "\n";
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "config_id,load_frac,throughput_frac,throughput_min,throughput_max\n";
  for (const SweepRow& r : rows) {
    out += r.config_id + "," + fixed6(r.load) + "," + fixed6(r.throughput) + "," + fixed6(r.throughput_min) + "," +
           fixed6(r.throughput_max) + "\n";
  }
  return out;
}

std::string mapping_csv(const std::vector<route_sets::MappingEntry>& entries) {
  std::string out = "stage,switch,port,vc,dsts\n";
  for (const route_sets::MappingEntry& e : entries) {
    out += std::to_string(e.sw.stage) + "," + std::to_string(e.sw.index) + "," + std::to_string(e.in_port) + "," +
           std::to_string(e.vc) + ",{";
    bool first = true;
    for (NodeId d : e.dsts) {
      if (!first) out += ' ';
      out += std::to_string(d);
      first = false;
    }
    out += "}\n";
  }
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing: " + std::strerror(errno));
  f << content;
  f.flush();
  if (!f) throw Error("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace ftsim::harness
