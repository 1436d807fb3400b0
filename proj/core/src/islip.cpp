#include "ftsim/islip.hpp"

#include <bit>

namespace ftsim::switching {

std::vector<std::pair<int, int>> Matching::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < out_of_input.size(); ++i) {
    if (out_of_input[i] >= 0) out.emplace_back(static_cast<int>(i), out_of_input[i]);
  }
  return out;
}

int Matching::size() const {
  int n = 0;
  for (int o : out_of_input) n += o >= 0 ? 1 : 0;
  return n;
}

namespace {

// First set bit at or after `start`, wrapping around.
int round_robin_pick(std::uint64_t mask, int start) {
  const std::uint64_t high = start >= 64 ? 0 : mask & (~std::uint64_t{0} << start);
  return std::countr_zero(high ? high : mask);
}

}  // namespace

Matching islip_arbitrate(std::span<const std::uint64_t> requests, IslipPointers& pointers, int iterations) {
  const int n = pointers.size();
  Matching m{std::vector<int>(static_cast<std::size_t>(n), -1)};
  std::uint64_t free_in = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::uint64_t free_out = free_in;

  // Column view: inputs requesting each output.
  std::uint64_t requesting[64] = {};
  for (int i = 0; i < n; ++i) {
    std::uint64_t outs = requests[static_cast<std::size_t>(i)];
    while (outs) {
      requesting[std::countr_zero(outs)] |= std::uint64_t{1} << i;
      outs &= outs - 1;
    }
  }

  std::uint64_t grants[64];
  for (int iter = 0; iter < iterations; ++iter) {
    // Grant: every free output picks one free requesting input.
    for (int i = 0; i < n; ++i) grants[i] = 0;
    bool any_grant = false;
    std::uint64_t outs = free_out;
    while (outs) {
      const int o = std::countr_zero(outs);
      outs &= outs - 1;
      const std::uint64_t requesters = requesting[o] & free_in;
      if (!requesters) continue;
      const int i = round_robin_pick(requesters, pointers.grant[static_cast<std::size_t>(o)]);
      grants[i] |= std::uint64_t{1} << o;
      any_grant = true;
    }
    if (!any_grant) break;

    // Accept: every granted input picks one output.
    for (int i = 0; i < n; ++i) {
      if (!grants[i]) continue;
      const int o = round_robin_pick(grants[i], pointers.accept[static_cast<std::size_t>(i)]);
      m.out_of_input[static_cast<std::size_t>(i)] = o;
      free_in &= ~(std::uint64_t{1} << i);
      free_out &= ~(std::uint64_t{1} << o);
      if (iter == 0) {
        pointers.grant[static_cast<std::size_t>(o)] = (i + 1) % n;
        pointers.accept[static_cast<std::size_t>(i)] = (o + 1) % n;
      }
    }
  }
  return m;
}

}  // namespace ftsim::switching
