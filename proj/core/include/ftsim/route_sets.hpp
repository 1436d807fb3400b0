#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "ftsim/queuing.hpp"
#include "ftsim/routing.hpp"
#include "ftsim/topology.hpp"

// Static analysis of the route sets a routing configuration allows, ignoring
// dynamic credit state.
namespace ftsim::route_sets {

using DestSet = std::set<NodeId>;

// Calls `visit(switch_id, in_port, out_port)` once for every distinct switch
// traversal on any allowed route from src to dst.
void for_each_route_step(const topology::Rlft& rlft, const routing::RoutingConfig& cfg, NodeId src,
                         NodeId dst, const std::function<void(int, PortIndex, PortIndex)>& visit);

struct PortDestinations {
  int ports = 0;
  std::vector<DestSet> switch_ports;  // [switch_id * ports + port]
  std::vector<DestSet> node_uplinks;  // [node]

  const DestSet& at(int switch_id, PortIndex port) const {
    return switch_ports.at(static_cast<std::size_t>(switch_id) * ports + port);
  }
};

PortDestinations destinations_per_port(const topology::Rlft& rlft, const routing::RoutingConfig& cfg);

// Destinations occupying one VC of one switch input buffer.
struct MappingEntry {
  topology::SwitchPosition sw;
  PortIndex in_port = 0;
  VcIndex vc = 0;
  DestSet dsts;
};

// One entry per (reachable input buffer, VC), VCs with no destination included.
// Ordered by (stage, switch index, port, vc).
std::vector<MappingEntry> mapping_table(const queuing::QueueScheme& scheme, const topology::Rlft& rlft,
                                        const routing::RoutingConfig& cfg);

// Rows of the destinations-per-output-port table.
enum class TableRow : std::uint8_t {
  deterministic,
  fully_adaptive,
  stage1,
  stage2,
  all_stages_kd,
  stage1_kd,
  stage2_kd,
};

inline constexpr TableRow kAllRows[] = {
    TableRow::deterministic, TableRow::fully_adaptive, TableRow::stage1,   TableRow::stage2,
    TableRow::all_stages_kd, TableRow::stage1_kd,      TableRow::stage2_kd,
};

std::string row_name(TableRow row);

// Network element column: end-node uplink, or stage s in the up/down phase.
struct TableColumn {
  bool end_node = false;
  int stage = 0;
  bool up = true;
};

// EU, S1U..S(T-1)U, STD..S1D.
std::vector<TableColumn> table_columns(int stages);
std::string column_name(const TableColumn& col);

// Routing configurations a row stands for (the fully adaptive row also covers
// oblivious routing).
std::vector<routing::RoutingConfig> row_configs(TableRow row, int delta);

// Closed-form destination count for one cell.
std::int64_t expected_cell(TableRow row, const TableColumn& col, int arity, int stages, int delta);

struct CellCheck {
  TableColumn column;
  std::int64_t expected = 0;
  std::int64_t observed_min = 0;
  std::int64_t observed_max = 0;
  bool pass = false;
};

struct RowCheck {
  TableRow row;
  std::string routing_id;
  int arity = 0;
  int stages = 0;
  int delta = 1;
  std::vector<CellCheck> cells;
  bool pass = false;
};

// Compares every port of the topology against the closed forms.
std::vector<RowCheck> check_table(int arity, int stages, int delta);

}  // namespace ftsim::route_sets
