#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ftsim/config.hpp"
#include "ftsim/csv.hpp"
#include "ftsim/error.hpp"
#include "ftsim/route_sets.hpp"
#include "ftsim/simulator.hpp"
#include "ftsim/sweep.hpp"
#include "ftsim/topology.hpp"

namespace {

using namespace ftsim;

int cmd_run(const std::string& config, const std::string& out) {
  const harness::ExperimentSpec spec = harness::load_config(config);
  const auto start = std::chrono::steady_clock::now();
  const engine::MetricsSeries series = engine::run(spec.run);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  harness::write_output(out, harness::series_csv(series));
  std::cerr << spec.config_id() << " load " << harness::fixed6(spec.run.traffic.load) << ": steady throughput "
            << harness::fixed6(series.steady_state_throughput()) << ", injected " << series.injected_packets << ", refused " << series.refused_packets
            << ", delivered " << series.delivered_packets << ", mean latency "
            << harness::fixed6(series.mean_latency_ns()) << " ns, " << series.audits << " audits passed ("
            << secs << " s)\n";
  return 0;
}

int cmd_sweep(const std::vector<std::string>& configs, const std::string& out, int jobs) {
  std::vector<harness::ExperimentSpec> specs;
  for (const std::string& c : configs) specs.push_back(harness::load_config(c));
  const auto rows = harness::sweep(specs, {jobs});
  harness::write_output(out, harness::sweep_csv(rows));
  return 0;
}

int cmd_paths(int ports, int stages, NodeId src, NodeId dst, const std::string& out) {
  const topology::Rlft rlft(topology::RlftParams{ports, stages});
  rlft.validate_node(src);
  rlft.validate_node(dst);
  const auto paths = topology::enumerate_shortest_paths(rlft, src, dst);
  std::string text;
  for (const auto& p : paths) text += topology::format_path(p) + "\n";
  harness::write_output(out, text);
  std::cerr << paths.size() << " shortest paths from " << src << " to " << dst << " (common ancestor stage "
            << rlft.common_ancestor_stage(src, dst) << ")\n";
  return 0;
}

int cmd_mapping(int ports, int stages, const std::string& routing_id, const std::string& scheme, int vcs,
                const std::string& out) {
  const topology::Rlft rlft(topology::RlftParams{ports, stages});
  const routing::RoutingConfig cfg = routing::parse_config_id(routing_id);
  cfg.validate(rlft.arity(), rlft.stages(), 1 << 30);
  queuing::QueueScheme qs{queuing::parse_scheme(scheme), vcs};
  qs.validate();
  harness::write_output(out, harness::mapping_csv(route_sets::mapping_table(qs, rlft, cfg)));
  return 0;
}

int cmd_table_check(const std::vector<int>& arities, const std::vector<int>& stage_list, const std::string& out,
                    bool verbose) {
  std::string text;
  bool all_pass = true;
  int checked = 0;
  for (int k : arities) {
    for (int t : stage_list) {
      for (int delta = 1; delta <= k; ++delta) {
        if (k % delta != 0) continue;
        for (const route_sets::RowCheck& row : route_sets::check_table(k, t, delta)) {
          ++checked;
          all_pass = all_pass && row.pass;
          text += std::string(row.pass ? "PASS" : "FAIL") + " K=" + std::to_string(k) + " T=" + std::to_string(t) +
                  " delta=" + std::to_string(delta) + " " + route_sets::row_name(row.row) + " (" + row.routing_id +
                  ")";
          if (verbose || !row.pass) {
            for (const auto& c : row.cells) {
              text += " " + route_sets::column_name(c.column) + "=" + std::to_string(c.expected);
              if (!c.pass) {
                text += "[saw " + std::to_string(c.observed_min) + ".." + std::to_string(c.observed_max) + "]";
              }
            }
          }
          text += "\n";
        }
      }
    }
  }
  text += std::string(all_pass ? "table-check: all " : "table-check: FAILURES among ") + std::to_string(checked) +
          " rows\n";
  harness::write_output(out, text);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fat-tree interconnect simulator with restricted adaptive routing"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("--out", out, "Output path (default: stdout)");

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run one simulation and write its metrics series as CSV");
  run->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output path (default: stdout)");

  std::vector<std::string> sweep_configs;
  int jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "Run every load point and seed of one or more configs");
  sweep->add_option("config", sweep_configs, "Config files")->required()->check(CLI::ExistingFile);
  sweep->add_option("--jobs,-j", jobs, "Parallel runs (default: hardware threads)");
  sweep->add_option("--out", out, "Output path (default: stdout)");

  int ports = 4;
  int stages = 3;
  NodeId src = 0;
  NodeId dst = 1;
  auto* paths = app.add_subcommand("paths", "List the shortest paths between two end-nodes");
  paths->add_option("--ports,-p", ports, "Switch port count P")->capture_default_str();
  paths->add_option("--stages,-t", stages, "Stage count T")->capture_default_str();
  paths->add_option("--src", src, "Source node")->required();
  paths->add_option("--dst", dst, "Destination node")->required();
  paths->add_option("--out", out, "Output path (default: stdout)");

  std::string routing_id = "DMODK";
  std::string scheme = "dbbm";
  int vcs = 2;
  auto* mapping = app.add_subcommand("mapping", "Destinations held by each VC of each switch input buffer");
  mapping->add_option("--ports,-p", ports, "Switch port count P")->capture_default_str();
  mapping->add_option("--stages,-t", stages, "Stage count T")->capture_default_str();
  mapping->add_option("--routing,-r", routing_id, "Routing id, e.g. DMODK, OBLIV, ADAP-NOTH-AS-K")
      ->capture_default_str();
  mapping->add_option("--scheme,-s", scheme, "Queuing scheme: 1q, dbbm, vftree, flow2sl")->capture_default_str();
  mapping->add_option("--vcs,-q", vcs, "VC count")->capture_default_str();
  mapping->add_option("--out", out, "Output path (default: stdout)");

  std::vector<int> arities = {2, 3, 4};
  std::vector<int> stage_list = {2, 3};
  bool verbose = false;
  auto* table = app.add_subcommand("table-check", "Check destinations-per-port counts against the closed forms");
  table->add_option("--arity,-k", arities, "Arities K")->capture_default_str();
  table->add_option("--stages,-t", stage_list, "Stage counts T")->capture_default_str();
  table->add_flag("--verbose,-v", verbose, "Print every cell");
  table->add_option("--out", out, "Output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_config, out);
    if (*sweep) return cmd_sweep(sweep_configs, out, jobs);
    if (*paths) return cmd_paths(ports, stages, src, dst, out);
    if (*mapping) return cmd_mapping(ports, stages, routing_id, scheme, vcs, out);
    if (*table) return cmd_table_check(arities, stage_list, out, verbose);
  } catch (const ftsim::Error& e) {
    std::cerr << "ftsim: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
