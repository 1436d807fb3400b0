#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "ftsim/error.hpp"
#include "ftsim/routing.hpp"
#include "oracles.hpp"

using namespace ftsim;
using namespace ftsim::routing;
using topology::Rlft;
using topology::RlftParams;
using topology::SwitchPosition;

namespace {

// Credits for K upward ports with one VC.
struct Credits {
  std::vector<int> free;
  int capacity = 16;
  CreditView view() const { return CreditView{free, 1, capacity}; }
};

RoutingConfig adaptive(Triggering trig, int ltth = 0, int htth = 0, int delta = 1, int only_stage = 0) {
  RoutingConfig cfg;
  cfg.mode = Mode::adaptive;
  cfg.triggering = trig;
  cfg.ltth = ltth;
  cfg.htth = htth;
  cfg.delta = delta;
  cfg.stages.only_stage = only_stage;
  return cfg;
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("D-mod-K digits") {
    const Rlft r(RlftParams{4, 3});
    CHECK(dmodk_up_port(r, {1, 0}, 5) == 1);
    CHECK(dmodk_up_port(r, {2, 0}, 5) == 0);
    for (int stage = 1; stage < 3; ++stage) CHECK(dmodk_up_port(r, {stage, 0}, 0) == 0);
    CHECK_THROWS_AS(dmodk_up_port(r, {3, 0}, 5), RoutingError);
  }

  TEST_CASE("D-mod-K spreads destinations evenly over upward ports") {
    const Rlft r(RlftParams{6, 3});
    for (int stage = 1; stage < 3; ++stage) {
      std::vector<int> counts(3, 0);
      for (NodeId d = 0; d < static_cast<NodeId>(r.node_count()); ++d) ++counts[dmodk_up_port(r, {stage, 0}, d)];
      CHECK(counts[0] == counts[1]);
      CHECK(counts[1] == counts[2]);
    }
  }

  TEST_CASE("down ports lead to the destination") {
    const Rlft r(RlftParams{4, 3});
    // The stage-1 switch hosting a node uses its attachment port.
    for (NodeId d = 0; d < 16; ++d) {
      const auto a = r.attachment(d);
      CHECK(down_port(r, r.position(a.id), d) == a.port);
    }
    // Top stage, dst=5: follow the single downward path.
    for (int top = 0; top < r.switches_in_stage(3); ++top) {
      const SwitchPosition pos{3, top};
      int sw = r.switch_id(pos);
      PortIndex port = down_port(r, pos, 5);
      for (int hops = 0; hops < 3; ++hops) {
        const auto& e = r.peer(sw, port);
        if (e.kind == topology::PeerKind::node) {
          CHECK(e.id == 5);
          CHECK(hops == 2);
          break;
        }
        sw = e.id;
        port = down_port(r, r.position(sw), 5);
      }
    }
    // Node 8 is not below the stage-1 switch of node 0.
    CHECK_THROWS_AS(down_port(r, {1, 0}, 8), RoutingError);
  }

  TEST_CASE("candidate ports") {
    CHECK(candidate_ports(7, 6, 3) == std::vector<int>{1, 4});
    CHECK(candidate_ports(11, 4, 1) == std::vector<int>{0, 1, 2, 3});
    CHECK(candidate_ports(4, 2, 2) == std::vector<int>{0});
    for (int k = 1; k <= 6; ++k) {
      for (int delta = 1; delta <= k; ++delta) {
        if (k % delta != 0) continue;
        for (std::uint64_t key = 0; key < 20; ++key) {
          const auto c = candidate_ports(key, k, delta);
          CHECK(static_cast<int>(c.size()) == k / delta);
          for (int j : c) CHECK(static_cast<std::uint64_t>(j) % delta == key % delta);
        }
      }
    }
  }

  TEST_CASE("TH keeps D-mod-K above the threshold") {
    const Rlft r(RlftParams{8, 2});  // K=4
    // dst=2 makes port 2 the D-mod-K choice at stage 1.
    const RoutingConfig cfg = adaptive(Triggering::one_threshold, 4);
    CongestionFlags flags(4, 1);
    Credits c{{16, 16, 10, 16}};
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 2);
  }

  TEST_CASE("TH scans for the most credits below the threshold") {
    const Rlft r(RlftParams{8, 2});
    const RoutingConfig cfg = adaptive(Triggering::one_threshold, 4);
    CongestionFlags flags(4, 1);
    Credits c{{12, 0, 3, 5}};
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 0);
    // No candidate strictly above ltth: keep D-mod-K.
    Credits low{{4, 1, 3, 4}};
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, low.view(), flags) == 2);
    // Equal maxima: the lowest index wins.
    Credits tie{{7, 9, 3, 9}};
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, tie.view(), flags) == 1);
    CHECK_FALSE(flags.any());
  }

  TEST_CASE("2TH hysteresis trace 3 -> 6 -> 9") {
    const Rlft r(RlftParams{8, 2});
    const RoutingConfig cfg = adaptive(Triggering::two_thresholds, 4, 8);
    CongestionFlags flags(4, 1);
    Credits c{{12, 0, 3, 5}};
    // 3 < ltth: adapt and raise the flag.
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 0);
    CHECK(flags.get(2, 0));
    // 6 >= ltth but the flag holds and 6 < htth: still adapting.
    c.free[2] = 6;
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 0);
    CHECK(flags.get(2, 0));
    // 9 >= htth: revert and clear.
    c.free[2] = 9;
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 2);
    CHECK_FALSE(flags.get(2, 0));
    // Without the flag, 6 is above ltth and D-mod-K stays.
    c.free[2] = 6;
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, cfg, c.view(), flags) == 2);
    CHECK_FALSE(flags.get(2, 0));
  }

  TEST_CASE("2TH flags only clear at or above htth") {
    const Rlft r(RlftParams{8, 2});
    const RoutingConfig cfg = adaptive(Triggering::two_thresholds, 4, 8);
    CongestionFlags flags(4, 1);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> credit(0, 16);
    for (int i = 0; i < 20000; ++i) {
      Credits c{{credit(rng), credit(rng), credit(rng), credit(rng)}};
      const NodeId dst = static_cast<NodeId>(rng() % 32);
      const int dk = dmodk_up_port(r, {1, 0}, dst);
      const bool before = flags.get(dk, 0);
      restricted_path_selection(r, {1, 0}, dst, 0, cfg, c.view(), flags);
      if (before && !flags.get(dk, 0)) REQUIRE(c.free[static_cast<std::size_t>(dk)] >= 8);
      if (!before && flags.get(dk, 0)) REQUIRE(c.free[static_cast<std::size_t>(dk)] < 4);
    }
  }

  TEST_CASE("NoTH picks the strict maximum with early exit") {
    const Rlft r(RlftParams{8, 2});
    const RoutingConfig cfg = adaptive(Triggering::none);
    CongestionFlags flags(4, 1);
    Credits c{{3, 9, 16, 9}};
    CHECK(restricted_path_selection(r, {1, 0}, 0, 0, cfg, c.view(), flags) == 2);
    Credits tie{{5, 9, 2, 9}};
    CHECK(restricted_path_selection(r, {1, 0}, 0, 0, cfg, tie.view(), flags) == 1);
    // All empty: nothing beats MaxCredits = 0 and D-mod-K stays.
    Credits none{{0, 0, 0, 0}};
    CHECK(restricted_path_selection(r, {1, 0}, 3, 0, cfg, none.view(), flags) == 3);
  }

  TEST_CASE("K/delta restriction and stage restriction") {
    const Rlft r(RlftParams{8, 3});  // K=4
    CongestionFlags flags(4, 1);
    Credits c{{16, 16, 0, 16}};
    // dst=2: digit 2 at stage 1, candidates {0, 2} with delta=2.
    const RoutingConfig kd = adaptive(Triggering::none, 0, 0, 2);
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, kd, c.view(), flags) == 0);
    Credits c2{{0, 16, 0, 16}};
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, kd, c2.view(), flags) == 2);
    // Adaptive only at stage 2: stage 1 follows D-mod-K.
    const RoutingConfig s2 = adaptive(Triggering::none, 0, 0, 1, 2);
    CHECK(restricted_path_selection(r, {1, 0}, 2, 0, s2, c.view(), flags) == 2);
    CHECK(restricted_path_selection(r, {2, 0}, 2, 0, s2, c.view(), flags) == 0);
  }

  TEST_CASE("deterministic mode ignores credits") {
    const Rlft r(RlftParams{8, 3});
    RoutingConfig cfg;
    CongestionFlags flags(4, 1);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
      Credits c{{static_cast<int>(rng() % 17), static_cast<int>(rng() % 17), static_cast<int>(rng() % 17),
                 static_cast<int>(rng() % 17)}};
      const NodeId dst = static_cast<NodeId>(rng() % 128);
      const int stage = 1 + static_cast<int>(rng() % 2);
      REQUIRE(restricted_path_selection(r, {stage, 0}, dst, 0, cfg, c.view(), flags) ==
              dmodk_up_port(r, {stage, 0}, dst));
    }
  }

  TEST_CASE("oblivious draws are uniform and seeded") {
    std::mt19937_64 one(1);
    CHECK(oblivious_port(1, one) == 0);
    std::mt19937_64 a(42);
    std::mt19937_64 b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(oblivious_port(4, a) == oblivious_port(4, b));
    std::mt19937_64 rng(9);
    std::vector<std::int64_t> counts(4, 0);
    for (int i = 0; i < 100000; ++i) ++counts[static_cast<std::size_t>(oblivious_port(4, rng))];
    CHECK(oracle::chi_square_uniform(counts) < oracle::chi_square_bound(3));
  }

  TEST_CASE("allowed ports equal the union over sampled credit states") {
    for (int p : {4, 6}) {
      const Rlft r(RlftParams{p, 3});
      const int k = p / 2;
      std::vector<RoutingConfig> cfgs;
      for (int delta = 1; delta <= k; ++delta) {
        if (k % delta != 0) continue;
        for (int stage = 0; stage <= 2; ++stage) {
          cfgs.push_back(adaptive(Triggering::none, 0, 0, delta, stage));
          cfgs.push_back(adaptive(Triggering::one_threshold, 4, 0, delta, stage));
          cfgs.push_back(adaptive(Triggering::two_thresholds, 4, 8, delta, stage));
        }
      }
      cfgs.push_back(RoutingConfig{});
      std::mt19937_64 rng(11);
      for (const RoutingConfig& cfg : cfgs) {
        for (int stage = 1; stage < 3; ++stage) {
          for (NodeId dst = 0; dst < static_cast<NodeId>(r.node_count()); ++dst) {
            std::set<int> seen;
            CongestionFlags flags(k, 1);
            for (int i = 0; i < 400; ++i) {
              Credits c;
              for (int j = 0; j < k; ++j) c.free.push_back(static_cast<int>(rng() % 17));
              seen.insert(restricted_path_selection(r, {stage, 0}, dst, 0, cfg, c.view(), flags));
            }
            const auto allowed = allowed_up_ports(r, {stage, 0}, dst, cfg);
            REQUIRE(std::vector<int>(seen.begin(), seen.end()) == allowed);
            const auto expect = oracle::adaptive_rule(k, cfg.mode == Mode::adaptive ? cfg.stages.only_stage : -1,
                                                      cfg.delta)(stage, dst);
            if (cfg.mode == Mode::adaptive) REQUIRE(allowed == expect);
          }
        }
      }
    }
  }

  TEST_CASE("config ids round-trip") {
    for (const char* id : {"DMODK", "OBLIV", "ADAP-NOTH-AS-K", "ADAP-TH-1S-Kd2", "ADAP-2TH-2S-Kd3", "ADAP-2TH-AS-K"}) {
      CHECK(config_id(parse_config_id(id)) == id);
    }
    for (const char* bad : {"", "DMOD", "ADAP-2TH-AS", "ADAP-3TH-AS-K", "ADAP-2TH-0S-K", "ADAP-2TH-AS-Kdx"}) {
      CHECK_THROWS_AS(parse_config_id(bad), RoutingError);
    }
  }

  TEST_CASE("config validation") {
    CHECK_THROWS_AS(adaptive(Triggering::none, 0, 0, 4).validate(6, 3, 16), RoutingError);
    CHECK_THROWS_AS(adaptive(Triggering::none, 0, 0, 1, 4).validate(6, 3, 16), RoutingError);
    CHECK_THROWS_AS(adaptive(Triggering::one_threshold, 0).validate(6, 3, 16), RoutingError);
    CHECK_THROWS_AS(adaptive(Triggering::two_thresholds, 8, 8).validate(6, 3, 16), RoutingError);
    CHECK_NOTHROW(adaptive(Triggering::two_thresholds, 4, 8, 3).validate(6, 3, 16));
  }
}
