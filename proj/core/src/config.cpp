#include "ftsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ftsim/error.hpp"

namespace ftsim::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || v.empty()) throw ConfigError("invalid number '" + v + "'");
  return out;
}

int parse_int(const std::string& v) { return parse_number<int>(v); }
std::int64_t parse_i64(const std::string& v) { return parse_number<std::int64_t>(v); }
double parse_double(const std::string& v) { return parse_number<double>(v); }

bool parse_bool(const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
  if (l == "false" || l == "0" || l == "no" || l == "off") return false;
  throw ConfigError("invalid boolean '" + v + "'");
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += f(xs[i]);
  }
  return out;
}

// Parse state: the spec plus shorthand keys resolved after all lines are read.
struct Draft {
  ExperimentSpec spec;
  std::optional<std::string> scenario;
  std::map<std::string, int> lines;  // key -> line it was set on (0: environment)
};

struct KeyDef {
  std::string name;
  std::function<void(Draft&, const std::string&)> set;
  std::function<std::string(const ExperimentSpec&)> get;  // empty for shorthand keys
};

routing::Mode parse_mode(const std::string& v) {
  const std::string l = lower(v);
  if (l == "dmodk" || l == "deterministic") return routing::Mode::deterministic;
  if (l == "oblivious") return routing::Mode::oblivious;
  if (l == "adaptive") return routing::Mode::adaptive;
  throw ConfigError("unknown routing mode '" + v + "' (expected dmodk, oblivious or adaptive)");
}

std::string mode_name(routing::Mode m) {
  return m == routing::Mode::deterministic ? "dmodk" : routing::to_string(m);
}

routing::Triggering parse_triggering(const std::string& v) {
  const std::string l = lower(v);
  if (l == "noth" || l == "none") return routing::Triggering::none;
  if (l == "th") return routing::Triggering::one_threshold;
  if (l == "2th") return routing::Triggering::two_thresholds;
  throw ConfigError("unknown triggering '" + v + "' (expected noth, th or 2th)");
}

const std::vector<KeyDef>& key_defs() {
  using S = ExperimentSpec;
  static const std::vector<KeyDef> defs = {
      {"topology.ports", [](Draft& d, const std::string& v) { d.spec.run.topology.ports = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.topology.ports); }},
      {"topology.stages", [](Draft& d, const std::string& v) { d.spec.run.topology.stages = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.topology.stages); }},
      {"topology.node_limit", [](Draft& d, const std::string& v) { d.spec.run.topology.node_limit = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.topology.node_limit); }},
      {"routing.id",
       [](Draft& d, const std::string& v) {
         const routing::RoutingConfig c = routing::parse_config_id(trim(v));
         d.spec.run.routing.mode = c.mode;
         d.spec.run.routing.triggering = c.triggering;
         d.spec.run.routing.stages = c.stages;
         d.spec.run.routing.delta = c.delta;
       },
       nullptr},
      {"routing.mode", [](Draft& d, const std::string& v) { d.spec.run.routing.mode = parse_mode(v); },
       [](const S& s) { return mode_name(s.run.routing.mode); }},
      {"routing.triggering",
       [](Draft& d, const std::string& v) { d.spec.run.routing.triggering = parse_triggering(v); },
       [](const S& s) { return lower(routing::to_string(s.run.routing.triggering)); }},
      {"routing.ltth_frac", [](Draft& d, const std::string& v) { d.spec.ltth_frac = parse_double(v); },
       [](const S& s) { return fmt(s.ltth_frac); }},
      {"routing.htth_frac", [](Draft& d, const std::string& v) { d.spec.htth_frac = parse_double(v); },
       [](const S& s) { return fmt(s.htth_frac); }},
      {"routing.stage",
       [](Draft& d, const std::string& v) {
         d.spec.run.routing.stages.only_stage = lower(v) == "all" ? 0 : parse_int(v);
       },
       [](const S& s) {
         return s.run.routing.stages.all() ? std::string("all") : std::to_string(s.run.routing.stages.only_stage);
       }},
      {"routing.delta", [](Draft& d, const std::string& v) { d.spec.run.routing.delta = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.routing.delta); }},
      {"switch.voq", [](Draft& d, const std::string& v) { d.spec.run.sw.voq = parse_bool(v); },
       [](const S& s) { return std::string(s.run.sw.voq ? "true" : "false"); }},
      {"switch.buffer_bytes", [](Draft& d, const std::string& v) { d.spec.run.sw.buffer_bytes = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.sw.buffer_bytes); }},
      {"switch.mtu_bytes", [](Draft& d, const std::string& v) { d.spec.run.sw.mtu_bytes = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.sw.mtu_bytes); }},
      {"queuing.scheme",
       [](Draft& d, const std::string& v) { d.spec.run.queuing.variant = queuing::parse_scheme(v); },
       [](const S& s) { return queuing::to_string(s.run.queuing.variant); }},
      {"queuing.vcs", [](Draft& d, const std::string& v) { d.spec.run.queuing.vcs = parse_int(v); },
       [](const S& s) { return std::to_string(s.run.queuing.vcs); }},
      {"traffic.scenario", [](Draft& d, const std::string& v) { d.scenario = trim(v); }, nullptr},
      {"traffic.pattern", [](Draft& d, const std::string& v) { d.spec.run.traffic.kind = traffic::parse_pattern(lower(v)); },
       [](const S& s) { return traffic::to_string(s.run.traffic.kind); }},
      {"traffic.hotspot_frac", [](Draft& d, const std::string& v) { d.spec.run.traffic.fraction = parse_double(v); },
       [](const S& s) { return fmt(s.run.traffic.fraction); }},
      {"traffic.hotspots",
       [](Draft& d, const std::string& v) {
         d.spec.run.traffic.hotspots.clear();
         for (const std::string& item : split_list(v)) {
           d.spec.run.traffic.hotspots.push_back(parse_number<NodeId>(item));
         }
       },
       [](const S& s) {
         return join<NodeId>(s.run.traffic.hotspots, [](const NodeId& x) { return std::to_string(x); });
       }},
      {"traffic.ihs_ports",
       [](Draft& d, const std::string& v) {
         d.spec.run.traffic.ihs_ports.clear();
         for (const std::string& item : split_list(v)) {
           const auto colon = item.find(':');
           if (colon == std::string::npos) throw ConfigError("ihs port '" + item + "' is not switch:port");
           d.spec.run.traffic.ihs_ports.push_back(
               {parse_int(trim(item.substr(0, colon))), parse_int(trim(item.substr(colon + 1)))});
         }
       },
       [](const S& s) {
         return join<traffic::Stage2Port>(s.run.traffic.ihs_ports, [](const traffic::Stage2Port& p) {
           return std::to_string(p.switch_index) + ":" + std::to_string(p.up_port);
         });
       }},
      {"traffic.load", [](Draft& d, const std::string& v) { d.spec.run.traffic.load = parse_double(v); },
       [](const S& s) { return fmt(s.run.traffic.load); }},
      {"sim.duration_ns", [](Draft& d, const std::string& v) { d.spec.run.sim.duration_ns = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.sim.duration_ns); }},
      {"sim.warmup_ns", [](Draft& d, const std::string& v) { d.spec.run.sim.warmup_ns = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.sim.warmup_ns); }},
      {"sim.seed", [](Draft& d, const std::string& v) { d.spec.run.sim.seed = parse_number<std::uint64_t>(v); },
       [](const S& s) { return std::to_string(s.run.sim.seed); }},
      {"sim.metrics_bin_ns", [](Draft& d, const std::string& v) { d.spec.run.sim.metrics_bin_ns = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.sim.metrics_bin_ns); }},
      {"sim.audit_interval_ns",
       [](Draft& d, const std::string& v) { d.spec.run.sim.audit_interval_ns = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.sim.audit_interval_ns); }},
      {"link.bandwidth_gbps",
       [](Draft& d, const std::string& v) { d.spec.run.sim.link_bandwidth_gbps = parse_double(v); },
       [](const S& s) { return fmt(s.run.sim.link_bandwidth_gbps); }},
      {"link.propagation_ns", [](Draft& d, const std::string& v) { d.spec.run.sim.propagation_ns = parse_i64(v); },
       [](const S& s) { return std::to_string(s.run.sim.propagation_ns); }},
      {"sweep.loads",
       [](Draft& d, const std::string& v) {
         d.spec.loads.clear();
         for (const std::string& item : split_list(v)) d.spec.loads.push_back(parse_double(item));
       },
       [](const S& s) { return join<double>(s.loads, [](const double& x) { return fmt(x); }); }},
      {"sweep.seeds",
       [](Draft& d, const std::string& v) {
         d.spec.seeds.clear();
         for (const std::string& item : split_list(v)) d.spec.seeds.push_back(parse_number<std::uint64_t>(item));
       },
       [](const S& s) {
         return join<std::uint64_t>(s.seeds, [](const std::uint64_t& x) { return std::to_string(x); });
       }},
  };
  return defs;
}

const KeyDef* find_key(const std::string& name) {
  for (const KeyDef& k : key_defs()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string env_name(const std::string& key) {
  std::string out = "FTSIM_" + upper(key);
  std::replace(out.begin(), out.end(), '.', '_');
  return out;
}

void assign(Draft& d, const std::string& key, const std::string& value, int line, const std::string& origin) {
  const KeyDef* def = find_key(key);
  if (!def) throw ConfigError(line, origin + "unknown key '" + key + "'");
  try {
    def->set(d, trim(value));
  } catch (const Error& e) {
    throw ConfigError(line, origin + key + ": " + e.what());
  }
  d.lines[key] = line;
}

// Line of the first key in `keys` the user set, else 0.
int line_of(const Draft& d, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    auto it = d.lines.find(k);
    if (it != d.lines.end()) return it->second;
  }
  return 0;
}

// Runs a validation step and re-raises failures against the most relevant line.
template <typename Fn>
void check(const Draft& d, std::initializer_list<const char*> keys, Fn fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    if (e.line() > 0) throw;
    throw ConfigError(line_of(d, keys), e.what());
  } catch (const Error& e) {
    throw ConfigError(line_of(d, keys), e.what());
  }
}

ExperimentSpec finish(Draft& d) {
  ExperimentSpec& s = d.spec;
  engine::RunSpec& r = s.run;
  check(d, {"topology.ports", "topology.stages", "topology.node_limit"}, [&] { r.topology.validate(); });
  const topology::Rlft rlft(r.topology);

  if (d.scenario) {
    if (d.lines.count("traffic.pattern") || d.lines.count("traffic.hotspot_frac") || d.lines.count("traffic.hotspots")) {
      throw ConfigError(line_of(d, {"traffic.pattern", "traffic.hotspot_frac", "traffic.hotspots"}),
                        "traffic.scenario cannot be combined with explicit pattern keys");
    }
    check(d, {"traffic.scenario"}, [&] {
      const traffic::TrafficPattern p = traffic::named_scenario(*d.scenario, rlft, r.traffic.load);
      r.traffic.kind = p.kind;
      r.traffic.fraction = p.fraction;
      r.traffic.hotspots = p.hotspots;
    });
  }

  check(d, {"queuing.scheme", "queuing.vcs"}, [&] { r.queuing.validate(); });
  check(d, {"switch.buffer_bytes", "switch.mtu_bytes", "queuing.vcs"}, [&] { r.sw.validate(r.queuing.vcs); });
  check(d, {"sim.duration_ns", "sim.warmup_ns", "sim.metrics_bin_ns", "sim.audit_interval_ns",
            "link.bandwidth_gbps", "link.propagation_ns"},
        [&] { r.sim.validate(); });
  check(d, {"link.bandwidth_gbps", "switch.mtu_bytes"},
        [&] { engine::serialization_ns(r.sw.mtu_bytes, r.sim.link_bandwidth_gbps); });

  const int cap = r.sw.vc_capacity(r.queuing.vcs);
  check(d, {"routing.ltth_frac"}, [&] {
    if (!(s.ltth_frac > 0.0 && s.ltth_frac <= 1.0)) throw ConfigError("routing.ltth_frac must lie in (0,1]");
  });
  check(d, {"routing.htth_frac"}, [&] {
    if (!(s.htth_frac > 0.0 && s.htth_frac <= 1.0)) throw ConfigError("routing.htth_frac must lie in (0,1]");
  });
  r.routing.ltth = threshold_credits(s.ltth_frac, cap);
  r.routing.htth = threshold_credits(s.htth_frac, cap);
  check(d, {"routing.delta", "routing.id"}, [&] {
    if (r.routing.delta < 1 || r.routing.delta > rlft.arity() || rlft.arity() % r.routing.delta != 0) {
      r.routing.validate(rlft.arity(), rlft.stages(), cap);
    }
  });
  check(d, {"routing.stage", "routing.id"}, [&] {
    if (r.routing.stages.only_stage < 0 || r.routing.stages.only_stage > rlft.stages()) {
      r.routing.validate(rlft.arity(), rlft.stages(), cap);
    }
  });
  check(d, {"routing.htth_frac", "routing.ltth_frac", "routing.triggering", "routing.id"},
        [&] { r.routing.validate(rlft.arity(), rlft.stages(), cap); });

  check(d, {"traffic.hotspots", "traffic.ihs_ports", "traffic.pattern", "traffic.scenario", "traffic.load",
            "traffic.hotspot_frac"},
        [&] { r.traffic.validate(rlft); });
  check(d, {"sweep.loads"}, [&] {
    for (double l : s.loads) {
      if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("sweep.loads entries must lie in [0,1], got " + fmt(l));
    }
  });
  return s;
}

}  // namespace

std::string ExperimentSpec::config_id() const {
  std::string id = routing::config_id(run.routing) + "+" + queuing::scheme_id(run.queuing);
  if (run.sw.voq) id += "+VOQ";
  return id;
}

EnvLookup process_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* v = std::getenv(name.c_str());
    if (!v) return std::nullopt;
    return std::string(v);
  };
}

EnvLookup no_env() {
  return [](const std::string&) -> std::optional<std::string> { return std::nullopt; };
}

int threshold_credits(double fraction, int vc_capacity) {
  return static_cast<int>(std::lround(fraction * vc_capacity));
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const KeyDef& k : key_defs()) out.push_back(k.name);
  return out;
}

ExperimentSpec parse_config(const std::string& text, const EnvLookup& env) {
  Draft d;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key=value, got '" + body + "'");
    const std::string key = lower(trim(body.substr(0, eq)));
    if (d.lines.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
    assign(d, key, body.substr(eq + 1), line, "");
  }
  for (const KeyDef& k : key_defs()) {
    const std::string name = env_name(k.name);
    if (auto v = env(name)) assign(d, k.name, *v, 0, name + ": ");
  }
  return finish(d);
}

ExperimentSpec load_config(const std::string& path, const EnvLookup& env) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), env);
}

std::string render_config(const ExperimentSpec& spec) {
  std::string out;
  std::string section;
  for (const KeyDef& k : key_defs()) {
    if (!k.get) continue;
    const std::string sec = k.name.substr(0, k.name.find('.'));
    if (sec != section) {
      if (!section.empty()) out += '\n';
      section = sec;
    }
    out += k.name + "=" + k.get(spec) + "\n";
  }
  return out;
}

}  // namespace ftsim::harness
