#include "georoute/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "georoute/errors.hpp"
#include "georoute/harness.hpp"
#include "georoute/rng.hpp"

namespace georoute {

using nlohmann::json;

NetworkTopology TopologySpec::build() const {
  switch (kind) {
    case Kind::line:
      return make_line_network(hops, links_per_hop);
    case Kind::grid:
      return make_grid_network(rows, cols);
    case Kind::edges: {
      std::vector<Link> links;
      links.reserve(edges.size());
      for (const auto& [tail, head] : edges) links.push_back({tail, head, -1});
      return NetworkTopology(num_nodes, std::move(links), source, destination);
    }
  }
  throw std::logic_error("bad topology kind");
}

std::string TopologySpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::line:
      os << "line hops=" << hops << " links_per_hop=" << links_per_hop;
      break;
    case Kind::grid:
      os << "grid rows=" << rows << " cols=" << cols;
      break;
    case Kind::edges:
      os << "edges nodes=" << num_nodes << " links=" << edges.size()
         << " source=" << source << " destination=" << destination;
      break;
  }
  return os.str();
}

LinkParams ThetaSpec::realize(const NetworkTopology& topo,
                              const std::vector<Path>* paths,
                              std::uint64_t master_seed) const {
  const std::size_t num_links = topo.num_links();
  switch (law) {
    case Law::explicit_vector: {
      if (explicit_theta.size() != num_links)
        throw ConfigError("theta vector length does not match link count");
      return LinkParams(explicit_theta);
    }
    case Law::uniform: {
      RngStream rng = derive_stream(master_seed, "theta");
      std::vector<double> theta(num_links);
      for (double& t : theta) t = rng.uniform(uniform_lo, uniform_hi);
      return LinkParams(std::move(theta));
    }
    case Law::match: {
      if (!paths)
        throw ConfigError("matched theta law needs the enumerated path set");
      return LinkParams(generate_theta_matching(
          topo, *paths, match_theta_min, match_delta_min, master_seed));
    }
  }
  throw std::logic_error("bad theta law");
}

std::string ThetaSpec::describe() const {
  std::ostringstream os;
  switch (law) {
    case Law::explicit_vector:
      os << "explicit";
      break;
    case Law::uniform:
      os << "uniform[" << uniform_lo << "," << uniform_hi << "]";
      break;
    case Law::match:
      os << "match theta_min=" << match_theta_min
         << " delta_min=" << match_delta_min;
      break;
  }
  return os.str();
}

void ExperimentConfig::validate() const {
  if (packets < 1) throw ConfigError("packets must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (path_cap < 1) throw ConfigError("path_cap must be >= 1");
  if (slot_cap < 1) throw ConfigError("slot_cap must be >= 1");
  if (policies.empty()) throw ConfigError("no policies configured");
  for (PolicyKind k : policies) {
    bool learning = k != PolicyKind::oracle && k != PolicyKind::uniform;
    if (learning && feedback != FeedbackKind::semibandit)
      throw ConfigError("policy " + policy_name(k) +
                        " requires semibandit feedback");
  }
  if (!checkpoints.empty()) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      if (checkpoints[i] < 1 || checkpoints[i] > packets)
        throw ConfigError("checkpoint outside [1, packets]");
      if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
        throw ConfigError("checkpoints must be strictly increasing");
    }
  }
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t packets) {
  std::vector<std::uint64_t> cps;
  double x = 1.0;
  while (true) {
    std::uint64_t n = static_cast<std::uint64_t>(std::llround(x));
    if (n >= packets) break;
    if (cps.empty() || n > cps.back()) cps.push_back(n);
    x *= 1.3;
  }
  cps.push_back(packets);
  return cps;
}

namespace {

TopologySpec parse_topology(const json& j) {
  TopologySpec spec;
  std::string type = j.value("type", "line");
  if (type == "line") {
    spec.kind = TopologySpec::Kind::line;
    spec.hops = j.value("hops", 1);
    spec.links_per_hop = j.value("links_per_hop", 2);
  } else if (type == "grid") {
    spec.kind = TopologySpec::Kind::grid;
    spec.rows = j.value("rows", 4);
    spec.cols = j.value("cols", 4);
  } else if (type == "edges") {
    spec.kind = TopologySpec::Kind::edges;
    spec.num_nodes = j.at("num_nodes").get<int>();
    for (const auto& e : j.at("edges"))
      spec.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    spec.source = j.at("source").get<int>();
    spec.destination = j.at("destination").get<int>();
  } else {
    throw ConfigError("unknown topology type: " + type);
  }
  return spec;
}

ThetaSpec parse_theta(const json& j) {
  ThetaSpec spec;
  if (j.is_array()) {
    spec.law = ThetaSpec::Law::explicit_vector;
    spec.explicit_theta = j.get<std::vector<double>>();
  } else if (j.is_object()) {
    std::string law = j.value("law", "uniform");
    if (law == "uniform") {
      spec.law = ThetaSpec::Law::uniform;
      spec.uniform_lo = j.value("lo", 0.1);
      spec.uniform_hi = j.value("hi", 0.99);
    } else if (law == "match") {
      spec.law = ThetaSpec::Law::match;
      spec.match_theta_min = j.value("theta_min", 0.3);
      spec.match_delta_min = j.value("delta_min", 0.15);
    } else {
      throw ConfigError("unknown theta law: " + law);
    }
  } else {
    throw ConfigError("theta must be an array or a law object");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  if (j.contains("topology")) cfg.topology = parse_topology(j.at("topology"));
  if (j.contains("theta")) cfg.theta = parse_theta(j.at("theta"));
  if (j.contains("policies")) {
    for (const auto& name : j.at("policies"))
      cfg.policies.push_back(parse_policy_kind(name.get<std::string>()));
  }
  std::string fb = j.value("feedback", "semibandit");
  if (fb == "semibandit")
    cfg.feedback = FeedbackKind::semibandit;
  else if (fb == "bandit")
    cfg.feedback = FeedbackKind::bandit;
  else
    throw ConfigError("unknown feedback kind: " + fb);
  cfg.packets = j.value("packets", cfg.packets);
  cfg.runs = j.value("runs", cfg.runs);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("checkpoints"))
    cfg.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
  cfg.path_cap = j.value("path_cap", cfg.path_cap);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.slot_cap = j.value("slot_cap", cfg.slot_cap);
  cfg.policy_options.cucb_clamp = j.value("cucb_clamp", true);
  std::string sched = j.value("hhr_schedule", "packet");
  if (sched == "packet")
    cfg.policy_options.hhr_schedule_by_slot = false;
  else if (sched == "slot")
    cfg.policy_options.hhr_schedule_by_slot = true;
  else
    throw ConfigError("hhr_schedule must be 'packet' or 'slot'");
  cfg.out = j.value("out", std::string());
  cfg.stats_debug_out = j.value("stats_debug_out", std::string());
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

}  // namespace georoute
