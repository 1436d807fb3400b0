#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftsim/config.hpp"
#include "ftsim/metrics.hpp"

namespace ftsim::harness {

struct SweepRow {
  std::string config_id;
  double load = 0.0;
  double throughput = 0.0;  // mean over seeds
  double throughput_min = 0.0;
  double throughput_max = 0.0;
  int runs = 0;
};

struct SweepOptions {
  int jobs = 0;  // 0: one per hardware thread
};

// One run per (spec, load, seed). Runs execute on independent worker threads;
// rows come back sorted by (config_id, load). Run failures are rethrown with
// the configuration, load and seed attached.
std::vector<SweepRow> sweep(const std::vector<ExperimentSpec>& specs, const SweepOptions& options = {});

// Median steady-state throughput over the given seeds for one spec.
double median_throughput(const ExperimentSpec& spec, const std::vector<std::uint64_t>& seeds,
                         const SweepOptions& options = {});

}  // namespace ftsim::harness
