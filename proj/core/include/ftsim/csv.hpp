#pragma once

#include <string>
#include <vector>

#include "ftsim/metrics.hpp"
#include "ftsim/route_sets.hpp"
#include "ftsim/sweep.hpp"

namespace ftsim::harness {

// `time_ns,delivered_frac,injected_frac`, one row per bin.
std::string series_csv(const engine::MetricsSeries& series);

// `config_id,load_frac,throughput_frac,throughput_min,throughput_max`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// `stage,switch,port,vc,dsts` with destinations space-separated in braces.
std::string mapping_csv(const std::vector<route_sets::MappingEntry>& entries);

// Fixed six-decimal rendering used by every CSV.
std::string fixed6(double v);

// Writes `content` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& content);

}  // namespace ftsim::harness
