#include <random>
#include <vector>

#include "doctest.h"
#include "ftsim/islip.hpp"
#include "oracles.hpp"

using namespace ftsim::switching;

TEST_SUITE("islip") {
  TEST_CASE("disjoint requests both match") {
    const std::vector<std::uint64_t> req = {0b01, 0b10};
    IslipPointers ptr(2);
    const Matching m = islip_arbitrate(req, ptr, 2);
    CHECK(m.out_of_input == std::vector<int>{0, 1});
    CHECK(m.size() == 2);
  }

  TEST_CASE("overlapping requests give a maximal matching") {
    const std::vector<std::uint64_t> req = {0b11, 0b01};
    IslipPointers ptr(2);
    const Matching m = islip_arbitrate(req, ptr, 2);
    CHECK(oracle::is_valid_matching(req, m.out_of_input));
    CHECK(oracle::is_maximal(req, m.out_of_input, 2));
    // Both outputs grant input 0, which takes output 0; input 1 only wants
    // output 0, so nothing can be added.
    CHECK(m.out_of_input == std::vector<int>{0, -1});
  }

  TEST_CASE("empty requests") {
    const std::vector<std::uint64_t> req(4, 0);
    IslipPointers ptr(4);
    CHECK(islip_arbitrate(req, ptr, 4).size() == 0);
  }

  TEST_CASE("pointers move only on first-iteration accepts") {
    const std::vector<std::uint64_t> req = {0b11, 0b11};
    IslipPointers ptr(2);
    const Matching m = islip_arbitrate(req, ptr, 2);
    // Both outputs grant input 0; it accepts output 0. Output 1 then grants
    // input 1 in the second round.
    CHECK(m.out_of_input == std::vector<int>{0, 1});
    CHECK(ptr.grant == std::vector<int>{1, 0});
    CHECK(ptr.accept == std::vector<int>{1, 0});
    // The next epoch starts from the moved pointers and desynchronizes.
    const Matching next = islip_arbitrate(req, ptr, 1);
    CHECK(next.size() == 2);
  }

  TEST_CASE("every 3x3 request matrix yields a valid maximal matching") {
    for (std::uint32_t bits = 0; bits < (1u << 9); ++bits) {
      const std::vector<std::uint64_t> req = {bits & 7u, (bits >> 3) & 7u, (bits >> 6) & 7u};
      for (int g = 0; g < 27; ++g) {
        IslipPointers ptr(3);
        ptr.grant = {g % 3, (g / 3) % 3, g / 9};
        ptr.accept = {g / 9, g % 3, (g / 3) % 3};
        const Matching m = islip_arbitrate(req, ptr, 3);
        REQUIRE(oracle::is_valid_matching(req, m.out_of_input));
        REQUIRE(oracle::is_maximal(req, m.out_of_input, 3));
      }
    }
  }

  TEST_CASE("random 8x8 matrices are maximal") {
    std::mt19937_64 rng(2024);
    IslipPointers ptr(8);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::uint64_t> req(8);
      const auto density = rng() % 4;
      for (auto& r : req) {
        r = rng() & 0xffu;
        for (std::uint64_t i = 0; i < density; ++i) r &= rng();
      }
      const Matching m = islip_arbitrate(req, ptr, 8);
      REQUIRE(oracle::is_valid_matching(req, m.out_of_input));
      REQUIRE(oracle::is_maximal(req, m.out_of_input, 8));
    }
  }
}
