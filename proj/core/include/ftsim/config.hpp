#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftsim/sim_config.hpp"

namespace ftsim::harness {

// A full experiment: one network configuration plus the sweep axes.
struct ExperimentSpec {
  engine::RunSpec run;
  double ltth_frac = 0.25;  // share of per-VC credits
  double htth_frac = 0.50;
  std::vector<double> loads;          // sweep load points
  std::vector<std::uint64_t> seeds;   // empty: sim.seed only

  // e.g. `ADAP-2TH-AS-Kd3+FLOW2SL3+VOQ`.
  std::string config_id() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

// Looks up an environment variable; nullopt when unset.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();
EnvLookup no_env();

// Parses `section.key=value` lines (`#` starts a comment), applies
// FTSIM_<SECTION>_<KEY> overrides, converts threshold fractions to credit
// counts and validates the result. Errors carry the offending line number.
ExperimentSpec parse_config(const std::string& text, const EnvLookup& env = no_env());
ExperimentSpec load_config(const std::string& path, const EnvLookup& env = process_env());

// Canonical text form; parse_config(render_config(s)) == s.
std::string render_config(const ExperimentSpec& spec);

// Converts a fraction of the per-VC credit capacity to a credit count.
int threshold_credits(double fraction, int vc_capacity);

// Every key parse_config accepts, in render order.
std::vector<std::string> known_keys();

}  // namespace ftsim::harness
