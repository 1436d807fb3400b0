#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace ftsim::switching {

// Round-robin state of an n x n iSLIP arbiter.
struct IslipPointers {
  std::vector<int> grant;   // per output
  std::vector<int> accept;  // per input

  explicit IslipPointers(int n = 0) : grant(static_cast<std::size_t>(n), 0), accept(static_cast<std::size_t>(n), 0) {}
  int size() const { return static_cast<int>(accept.size()); }
};

// Result of one arbitration: `out_of_input[i]` is the output matched to input
// i, or -1.
struct Matching {
  std::vector<int> out_of_input;

  std::vector<std::pair<int, int>> pairs() const;
  int size() const;
};

// iSLIP request/grant/accept. `requests[i]` is a bitmask of the outputs input i
// requests (n <= 64). Pointers advance only on grants accepted in the first
// iteration. Runs up to `iterations` rounds, stopping early once a round adds
// no pair (later rounds could not add any either).
Matching islip_arbitrate(std::span<const std::uint64_t> requests, IslipPointers& pointers, int iterations);

}  // namespace ftsim::switching
