#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "georoute/bounds.hpp"
#include "georoute/config.hpp"
#include "georoute/env.hpp"
#include "georoute/graph.hpp"
#include "georoute/policies.hpp"

namespace georoute {

// One run's regret record. cum_regret is the realized accounting
// sum-of-delays minus n * D* (it can dip below zero); cum_expected_regret is
// the conditional-expectation estimator sum of Delta_{p(n)} given the chosen
// paths, recorded for source-routing runs (for hop-by-hop runs it equals the
// realized value, decisions there consume slots directly).
struct RegretTrace {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> cum_regret;
  std::vector<double> cum_expected_regret;
  std::uint64_t total_delay = 0;   // conservation: equals sum of t_i increments
  std::uint64_t node_revisits = 0; // hop-by-hop walks only
};

// Deliveries-vs-slots record for hop-by-hop runs: throughput regret
// S(T) = T / D* - deliveries(T) at geometric slot checkpoints.
struct ThroughputTrace {
  std::vector<std::uint64_t> slot_checkpoints;
  std::vector<double> regret;
};

struct PolicyResult {
  PolicyKind kind;
  std::vector<RegretTrace> traces;           // one per run
  std::vector<ThroughputTrace> throughput;   // hop-by-hop policies only
};

struct ExperimentResult {
  double d_star = 0.0;          // expected delay of the optimal path
  std::vector<double> theta;    // realized link parameters
  std::vector<std::uint64_t> checkpoints;
  std::vector<PolicyResult> policies;
};

// Per-checkpoint mean and normal-approximation 95% confidence band.
struct Aggregate {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
};

Aggregate aggregate(const std::vector<RegretTrace>& traces);

// Single simulation runs. run_index seeds the per-(policy, run) rng streams.
RegretTrace run_source_routing(const NetworkTopology& topo,
                               const std::vector<Path>* paths,
                               const LinkParams& params, PolicyKind kind,
                               const ExperimentConfig& cfg, int run_index,
                               double d_star);

RegretTrace run_hop_by_hop(const NetworkTopology& topo,
                           const std::vector<Path>* paths,
                           const LinkParams& params, PolicyKind kind,
                           const ExperimentConfig& cfg, int run_index,
                           double d_star, ThroughputTrace* throughput);

// Runs every configured (policy, run) pair, in parallel when workers > 1.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Plot-ready CSV with a provenance header echoing the full configuration.
// Identical config and seed produce byte-identical output.
std::string experiment_csv(const ExperimentConfig& cfg,
                           const ExperimentResult& result);

std::string ratio_csv(int links_per_hop, double theta_lo, double theta_hi,
                      std::uint64_t seed, const std::vector<RatioRow>& rows);

// Draws link parameters for an arbitrary topology so that min_i theta_i and
// the optimality gap of the best suboptimal path match the requested summary
// statistics exactly. Deterministic in the seed.
std::vector<double> generate_theta_matching(const NetworkTopology& topo,
                                            const std::vector<Path>& paths,
                                            double theta_min, double delta_min,
                                            std::uint64_t seed);

}  // namespace georoute
