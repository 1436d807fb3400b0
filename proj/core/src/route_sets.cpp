#include "ftsim/route_sets.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "ftsim/error.hpp"

namespace ftsim::route_sets {

using topology::Endpoint;
using topology::PeerKind;
using topology::Rlft;

void for_each_route_step(const Rlft& rlft, const routing::RoutingConfig& cfg, NodeId src, NodeId dst,
                         const std::function<void(int, PortIndex, PortIndex)>& visit) {
  if (src == dst) return;
  const Endpoint start = rlft.attachment(src);
  std::vector<std::pair<int, PortIndex>> frontier{{start.id, start.port}};
  std::set<std::pair<int, PortIndex>> seen{{start.id, start.port}};
  while (!frontier.empty()) {
    const auto [sw, in_port] = frontier.back();
    frontier.pop_back();
    const topology::SwitchPosition pos = rlft.position(sw);
    std::vector<PortIndex> outs;
    if (rlft.in_subtree(pos, dst)) {
      outs.push_back(routing::down_port(rlft, pos, dst));
    } else {
      for (int up : routing::allowed_up_ports(rlft, pos, dst, cfg)) outs.push_back(rlft.arity() + up);
    }
    for (PortIndex out : outs) {
      visit(sw, in_port, out);
      const Endpoint& next = rlft.peer(sw, out);
      if (next.kind != PeerKind::sw) continue;
      if (seen.insert({next.id, next.port}).second) frontier.push_back({next.id, next.port});
    }
  }
}

PortDestinations destinations_per_port(const Rlft& rlft, const routing::RoutingConfig& cfg) {
  PortDestinations out;
  out.ports = rlft.ports();
  out.switch_ports.resize(static_cast<std::size_t>(rlft.switch_count()) * rlft.ports());
  out.node_uplinks.resize(static_cast<std::size_t>(rlft.node_count()));
  const auto n = static_cast<NodeId>(rlft.node_count());
  for (NodeId src = 0; src < n; ++src) {
    for (NodeId dst = 0; dst < n; ++dst) {
      if (src == dst) continue;
      out.node_uplinks[src].insert(dst);
      for_each_route_step(rlft, cfg, src, dst, [&](int sw, PortIndex, PortIndex port) {
        out.switch_ports[static_cast<std::size_t>(sw) * out.ports + port].insert(dst);
      });
    }
  }
  return out;
}

std::vector<MappingEntry> mapping_table(const queuing::QueueScheme& scheme, const Rlft& rlft,
                                        const routing::RoutingConfig& cfg) {
  scheme.validate();
  // (switch_id, in_port) -> per-VC destinations
  std::map<std::pair<int, PortIndex>, std::vector<DestSet>> buffers;
  const auto n = static_cast<NodeId>(rlft.node_count());
  for (NodeId src = 0; src < n; ++src) {
    for (NodeId dst = 0; dst < n; ++dst) {
      if (src == dst) continue;
      const VcIndex vc = queuing::map_to_vc(scheme, src, dst, rlft);
      for_each_route_step(rlft, cfg, src, dst, [&](int sw, PortIndex in_port, PortIndex) {
        auto& per_vc = buffers[{sw, in_port}];
        if (per_vc.empty()) per_vc.resize(static_cast<std::size_t>(scheme.vcs));
        per_vc[static_cast<std::size_t>(vc)].insert(dst);
      });
    }
  }
  std::vector<MappingEntry> out;
  for (auto& [key, per_vc] : buffers) {
    for (VcIndex vc = 0; vc < scheme.vcs; ++vc) {
      out.push_back({rlft.position(key.first), key.second, vc, std::move(per_vc[static_cast<std::size_t>(vc)])});
    }
  }
  // Global switch ids already order by (stage, index).
  return out;
}

std::string row_name(TableRow row) {
  switch (row) {
    case TableRow::deterministic: return "Deterministic (D-mod-K)";
    case TableRow::fully_adaptive: return "Fully adaptive and oblivious";
    case TableRow::stage1: return "Adaptive Stage 1 (1S)";
    case TableRow::stage2: return "Adaptive Stage 2 (2S)";
    case TableRow::all_stages_kd: return "All stages (*S) and K/Delta";
    case TableRow::stage1_kd: return "Adaptive Stage 1 (1S) and K/Delta";
    case TableRow::stage2_kd: return "Adaptive Stage 2 (2S) and K/Delta";
  }
  return "?";
}

std::vector<TableColumn> table_columns(int stages) {
  std::vector<TableColumn> cols;
  cols.push_back({true, 0, true});
  for (int s = 1; s < stages; ++s) cols.push_back({false, s, true});
  for (int s = stages; s >= 1; --s) cols.push_back({false, s, false});
  return cols;
}

std::string column_name(const TableColumn& col) {
  if (col.end_node) return "EU";
  return "S" + std::to_string(col.stage) + (col.up ? "U" : "D");
}

namespace {

struct RowShape {
  int only_stage = 0;  // 0 = all stages adaptive
  bool adaptive = true;
  bool restricted_ports = false;
};

RowShape shape_of(TableRow row) {
  switch (row) {
    case TableRow::deterministic: return {0, false, false};
    case TableRow::fully_adaptive: return {0, true, false};
    case TableRow::stage1: return {1, true, false};
    case TableRow::stage2: return {2, true, false};
    case TableRow::all_stages_kd: return {0, true, true};
    case TableRow::stage1_kd: return {1, true, true};
    case TableRow::stage2_kd: return {2, true, true};
  }
  return {};
}

// How many of the K upward ports a destination may use at `stage`.
std::int64_t port_share_divisor(const RowShape& shape, int stage, int arity, int delta) {
  const bool adaptive_here = shape.adaptive && (shape.only_stage == 0 || shape.only_stage == stage);
  if (!adaptive_here) return arity;
  return shape.restricted_ports ? delta : 1;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<routing::RoutingConfig> row_configs(TableRow row, int delta) {
  const RowShape shape = shape_of(row);
  routing::RoutingConfig cfg;
  if (!shape.adaptive) return {cfg};
  cfg.mode = routing::Mode::adaptive;
  cfg.triggering = routing::Triggering::none;
  cfg.stages.only_stage = shape.only_stage;
  cfg.delta = shape.restricted_ports ? delta : 1;
  if (row == TableRow::fully_adaptive) {
    routing::RoutingConfig obliv;
    obliv.mode = routing::Mode::oblivious;
    return {cfg, obliv};
  }
  return {cfg};
}

std::int64_t expected_cell(TableRow row, const TableColumn& col, int arity, int stages, int delta) {
  const std::int64_t k = arity;
  const std::int64_t n = 2 * ipow(k, stages);
  if (col.end_node) return n - 1;
  const RowShape shape = shape_of(row);
  // Destinations outside the subtree (upward) or inside the reached subtree
  // (downward), thinned by the port share taken at every upward hop so far.
  std::int64_t count = col.up ? n - ipow(k, col.stage) : ipow(k, col.stage - 1);
  const int last = col.up ? col.stage : col.stage - 1;
  std::int64_t divisor = 1;
  for (int s = 1; s <= last && s < stages; ++s) divisor *= port_share_divisor(shape, s, arity, delta);
  if (count % divisor != 0) {
    throw RoutingError("closed form not integral for " + column_name(col));
  }
  return count / divisor;
}

std::vector<RowCheck> check_table(int arity, int stages, int delta) {
  const Rlft rlft({2 * arity, stages, topology::kDefaultNodeLimit});
  const std::vector<TableColumn> cols = table_columns(stages);
  std::vector<RowCheck> out;
  for (TableRow row : kAllRows) {
    for (const routing::RoutingConfig& cfg : row_configs(row, delta)) {
      cfg.validate(arity, stages, 1);
      const PortDestinations dests = destinations_per_port(rlft, cfg);
      RowCheck rc{row, routing::config_id(cfg), arity, stages, delta, {}, true};
      for (const TableColumn& col : cols) {
        CellCheck cell{col, expected_cell(row, col, arity, stages, delta),
                       std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::min(),
                       false};
        auto observe = [&](std::size_t size) {
          cell.observed_min = std::min<std::int64_t>(cell.observed_min, static_cast<std::int64_t>(size));
          cell.observed_max = std::max<std::int64_t>(cell.observed_max, static_cast<std::int64_t>(size));
        };
        if (col.end_node) {
          for (const DestSet& s : dests.node_uplinks) observe(s.size());
        } else {
          const int first = rlft.first_switch_id(col.stage);
          for (int i = 0; i < rlft.switches_in_stage(col.stage); ++i) {
            const bool top = rlft.is_top(col.stage);
            const int lo = col.up ? arity : 0;
            const int hi = col.up ? 2 * arity : (top ? 2 * arity : arity);
            for (int p = lo; p < hi; ++p) observe(dests.at(first + i, p).size());
          }
        }
        cell.pass = cell.observed_min == cell.expected && cell.observed_max == cell.expected;
        rc.pass = rc.pass && cell.pass;
        rc.cells.push_back(cell);
      }
      out.push_back(std::move(rc));
    }
  }
  return out;
}

}  // namespace ftsim::route_sets
