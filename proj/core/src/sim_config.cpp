#include "ftsim/sim_config.hpp"

#include <cmath>
#include <string>

#include "ftsim/error.hpp"

namespace ftsim::engine {

void SimConfig::validate() const {
  if (!(link_bandwidth_gbps > 0.0)) throw ConfigError("link.bandwidth_gbps must be positive");
  if (propagation_ns < 0) throw ConfigError("link.propagation_ns must be >= 0");
  if (duration_ns <= 0) throw ConfigError("sim.duration_ns must be positive");
  if (warmup_ns < 0 || warmup_ns >= duration_ns) {
    throw ConfigError("sim.warmup_ns must lie in [0, duration), got " + std::to_string(warmup_ns));
  }
  if (metrics_bin_ns <= 0) throw ConfigError("sim.metrics_bin_ns must be positive");
  if (audit_interval_ns < 0) throw ConfigError("sim.audit_interval_ns must be >= 0");
}

void SwitchConfig::validate(int vcs) const {
  if (mtu_bytes <= 0) throw ConfigError("switch.mtu_bytes must be positive");
  if (buffer_bytes < mtu_bytes) throw ConfigError("switch.buffer_bytes must hold at least one MTU");
  if (vcs < 1 || vc_capacity(vcs) < 1) {
    throw ConfigError("buffer of " + std::to_string(buffer_packets()) + " packets cannot be split into " +
                      std::to_string(vcs) + " VCs");
  }
}

TimeNs serialization_ns(int mtu_bytes, double bandwidth_gbps) {
  const double exact = static_cast<double>(mtu_bytes) * 8.0 / bandwidth_gbps;
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9 * exact) {
    throw ConfigError("MTU serialization time " + std::to_string(exact) +
                      " ns is not a whole number of nanoseconds");
  }
  return static_cast<TimeNs>(rounded);
}

}  // namespace ftsim::engine
