#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "georoute/env.hpp"
#include "georoute/graph.hpp"
#include "georoute/policies.hpp"

namespace georoute {

// Topology description as read from a config file. Exactly one of the
// generator forms applies; see README for the schema.
struct TopologySpec {
  enum class Kind { line, grid, edges } kind = Kind::line;
  // line
  int hops = 1;
  int links_per_hop = 2;
  // grid
  int rows = 4;
  int cols = 4;
  // explicit edge list
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
  NodeId source = 0;
  NodeId destination = 0;

  NetworkTopology build() const;
  std::string describe() const;  // canonical one-line rendering
};

// Link parameters: an explicit vector (in link-id order), an i.i.d. uniform
// law drawn once per experiment from the master seed, or a draw constrained
// to match (theta_min, delta_min) summary statistics.
struct ThetaSpec {
  enum class Law { explicit_vector, uniform, match };
  Law law = Law::uniform;
  std::vector<double> explicit_theta;
  double uniform_lo = 0.1;
  double uniform_hi = 0.99;
  double match_theta_min = 0.3;
  double match_delta_min = 0.15;

  // `paths` is only needed by the match law (to evaluate optimality gaps).
  LinkParams realize(const NetworkTopology& topo,
                     const std::vector<Path>* paths,
                     std::uint64_t master_seed) const;
  std::string describe() const;
};

struct ExperimentConfig {
  TopologySpec topology;
  ThetaSpec theta;
  std::vector<PolicyKind> policies;
  FeedbackKind feedback = FeedbackKind::semibandit;
  std::uint64_t packets = 10000;
  int runs = 100;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> checkpoints;  // empty: geometric default grid
  std::size_t path_cap = 10000;
  int workers = 1;
  std::uint64_t slot_cap = 1000000;
  PolicyOptions policy_options;
  std::string out;              // CSV path ("" = stdout)
  std::string stats_debug_out;  // per-round counter CSV, debug only

  void validate() const;
};

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Checkpoint grid used when the config does not pin one: a geometric ladder
// with ratio ~1.3 from 1 up to and including `packets`.
std::vector<std::uint64_t> default_checkpoints(std::uint64_t packets);

}  // namespace georoute
