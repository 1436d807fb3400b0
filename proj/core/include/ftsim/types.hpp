#pragma once

#include <cstdint>

namespace ftsim {

using NodeId = std::uint32_t;
using TimeNs = std::int64_t;

// Index of a port on a switch (0..P-1).
using PortIndex = int;
// Index of a virtual channel within a buffer (0..Q-1).
using VcIndex = int;

}  // namespace ftsim
