#include "doctest.h"
#include "ftsim/error.hpp"
#include "ftsim/queuing.hpp"

using namespace ftsim;
using namespace ftsim::queuing;
using topology::Rlft;
using topology::RlftParams;

TEST_SUITE("queuing") {
  TEST_CASE("worked examples") {
    const Rlft r(RlftParams{4, 3});
    CHECK(map_to_vc({Scheme::dbbm, 3}, 0, 7, r) == 1);
    CHECK(map_to_vc({Scheme::flow2sl, 2}, 1, 9, r) == 1);
    CHECK(map_to_vc({Scheme::vftree, 2}, 0, 6, r) == 1);
    CHECK(map_to_vc({Scheme::one_queue, 1}, 3, 12, r) == 0);
  }

  TEST_CASE("scheme definitions") {
    const Rlft r(RlftParams{6, 3});
    const int n = r.node_count();
    for (int q = 1; q <= 4; ++q) {
      const int group = (n + q - 1) / q;
      for (NodeId s = 0; s < static_cast<NodeId>(n); s += 7) {
        for (NodeId d = 0; d < static_cast<NodeId>(n); ++d) {
          REQUIRE(map_to_vc({Scheme::dbbm, q}, s, d, r) == static_cast<int>(d) % q);
          const int g = (static_cast<int>(d) / group - static_cast<int>(s) / group + q) % q;
          REQUIRE(map_to_vc({Scheme::flow2sl, q}, s, d, r) == g);
          const int leaf = ((r.leaf_switch(d) - r.leaf_switch(s)) % q + q) % q;
          REQUIRE(map_to_vc({Scheme::vftree, q}, s, d, r) == leaf);
        }
      }
    }
  }

  TEST_CASE("VCs stay in range") {
    const Rlft r(RlftParams{8, 3});
    for (Scheme sc : {Scheme::one_queue, Scheme::dbbm, Scheme::vftree, Scheme::flow2sl}) {
      const int q = sc == Scheme::one_queue ? 1 : 3;
      for (NodeId s = 0; s < 128; ++s) {
        for (NodeId d = 0; d < 128; ++d) {
          const VcIndex vc = map_to_vc({sc, q}, s, d, r);
          REQUIRE(vc >= 0);
          REQUIRE(vc < q);
        }
      }
    }
  }

  TEST_CASE("names and validation") {
    CHECK(scheme_id({Scheme::one_queue, 1}) == "1Q");
    CHECK(scheme_id({Scheme::dbbm, 3}) == "DBBM3");
    CHECK(scheme_id({Scheme::vftree, 2}) == "VFTREE2");
    CHECK(scheme_id({Scheme::flow2sl, 3}) == "FLOW2SL3");
    for (Scheme sc : {Scheme::one_queue, Scheme::dbbm, Scheme::vftree, Scheme::flow2sl}) {
      CHECK(parse_scheme(to_string(sc)) == sc);
    }
    CHECK_THROWS_AS(parse_scheme("fifo"), Error);
    CHECK_THROWS_AS((QueueScheme{Scheme::dbbm, 0}).validate(), Error);
    CHECK_THROWS_AS((QueueScheme{Scheme::one_queue, 2}).validate(), Error);
  }
}
