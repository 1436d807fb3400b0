#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "ftsim/error.hpp"
#include "ftsim/topology.hpp"
#include "oracles.hpp"

using namespace ftsim;
using namespace ftsim::topology;

TEST_SUITE("topology") {
  TEST_CASE("node and switch counts") {
    const Rlft big(RlftParams{36, 3});
    CHECK(big.node_count() == 11664);
    CHECK(big.switch_count() == 11664 * 5 / 36);
    CHECK(big.switch_count() == 1620);
    const Rlft small(RlftParams{4, 2});
    CHECK(small.node_count() == 8);
    CHECK(small.switch_count() == 6);
    for (int p : {4, 6, 8, 12}) {
      for (int t = 1; t <= 3; ++t) {
        const Rlft r(RlftParams{p, t});
        const int k = p / 2;
        CHECK(r.node_count() == 2 * oracle::ipow(k, t));
        CHECK(r.switch_count() * 2 * k == r.node_count() * (2 * t - 1));
        CHECK(static_cast<int>(r.links().size()) == r.node_count() * t);
      }
    }
  }

  TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(Rlft(RlftParams{5, 2}), TopologyError);
    CHECK_THROWS_AS(Rlft(RlftParams{4, 0}), TopologyError);
    CHECK_THROWS_AS(Rlft(RlftParams{0, 2}), TopologyError);
    CHECK_THROWS_AS(Rlft(RlftParams{36, 4}), TopologyError);  // beyond the node limit
    const Rlft r(RlftParams{4, 2});
    CHECK_THROWS_AS(r.validate_node(8), TopologyError);
    CHECK_THROWS_AS(enumerate_shortest_paths(r, 3, 3), TopologyError);
  }

  TEST_CASE("peers are symmetric and every port is wired") {
    for (int p : {4, 6, 8}) {
      for (int t = 1; t <= 3; ++t) {
        const Rlft r(RlftParams{p, t});
        for (int sw = 0; sw < r.switch_count(); ++sw) {
          for (PortIndex port = 0; port < r.ports(); ++port) {
            const Endpoint& e = r.peer(sw, port);
            REQUIRE(e.kind != PeerKind::none);
            if (e.kind == PeerKind::sw) {
              const Endpoint& back = r.peer(e.id, e.port);
              CHECK(back.kind == PeerKind::sw);
              CHECK(back.id == sw);
              CHECK(back.port == port);
            } else {
              const Endpoint a = r.attachment(static_cast<NodeId>(e.id));
              CHECK(a.id == sw);
              CHECK(a.port == port);
            }
          }
        }
      }
    }
  }

  TEST_CASE("switch ids and positions round-trip") {
    const Rlft r(RlftParams{6, 3});
    for (int sw = 0; sw < r.switch_count(); ++sw) CHECK(r.switch_id(r.position(sw)) == sw);
  }

  TEST_CASE("subtree membership agrees with a down-edge search") {
    const Rlft r(RlftParams{6, 3});
    const oracle::Graph g(r);
    for (int sw = 0; sw < r.switch_count(); ++sw) {
      CHECK(g.stage[static_cast<std::size_t>(sw)] == r.position(sw).stage);
      for (NodeId n = 0; n < static_cast<NodeId>(r.node_count()); ++n) {
        CHECK(r.in_subtree(r.position(sw), n) == g.below[static_cast<std::size_t>(sw)][n]);
      }
    }
  }

  TEST_CASE("worked path examples") {
    const Rlft r(RlftParams{4, 3});
    // Node 0 and node 15 only meet at the top stage.
    CHECK(r.common_ancestor_stage(0, 15) == 3);
    CHECK(enumerate_shortest_paths(r, 0, 15).size() == 4);
    // Nodes 0 and 1 share a stage-1 switch.
    const auto local = enumerate_shortest_paths(r, 0, 1);
    REQUIRE(local.size() == 1);
    CHECK(local.front().size() == 1);
    const Rlft r3(RlftParams{6, 2});
    CHECK(r3.common_ancestor_stage(0, 17) == 2);
    CHECK(enumerate_shortest_paths(r3, 0, 17).size() == 3);
  }

  TEST_CASE("path counts match a breadth-first oracle") {
    for (int p : {4, 6}) {
      for (int t = 1; t <= 3; ++t) {
        const Rlft r(RlftParams{p, t});
        const oracle::Graph g(r);
        const int k = p / 2;
        for (NodeId s = 0; s < static_cast<NodeId>(r.node_count()); ++s) {
          for (NodeId d = 0; d < static_cast<NodeId>(r.node_count()); ++d) {
            if (s == d) continue;
            const auto paths = enumerate_shortest_paths(r, s, d);
            const int stage = r.common_ancestor_stage(s, d);
            REQUIRE(static_cast<std::int64_t>(paths.size()) == oracle::bfs_path_count(g, s, d));
            REQUIRE(static_cast<int>(paths.size()) == oracle::ipow(k, stage - 1));
            std::set<std::string> distinct;
            for (const Path& path : paths) distinct.insert(format_path(path));
            REQUIRE(distinct.size() == paths.size());
            for (const Path& path : paths) REQUIRE(static_cast<int>(path.size()) == 2 * stage - 1);
          }
        }
      }
    }
  }

  TEST_CASE("paths follow real links and end at the destination") {
    const Rlft r(RlftParams{4, 3});
    for (NodeId s = 0; s < 16; ++s) {
      for (NodeId d = 0; d < 16; ++d) {
        if (s == d) continue;
        for (const Path& path : enumerate_shortest_paths(r, s, d)) {
          CHECK(r.switch_id(path.front().sw) == r.attachment(s).id);
          for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const Endpoint& e = r.peer(r.switch_id(path[i].sw), path[i].out_port);
            CHECK(e.kind == PeerKind::sw);
            CHECK(e.id == r.switch_id(path[i + 1].sw));
          }
          const Endpoint& last = r.peer(r.switch_id(path.back().sw), path.back().out_port);
          CHECK(last.kind == PeerKind::node);
          CHECK(last.id == static_cast<int>(d));
        }
      }
    }
  }
}
