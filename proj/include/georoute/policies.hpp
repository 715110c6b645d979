#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "georoute/env.hpp"
#include "georoute/graph.hpp"
#include "georoute/rng.hpp"
#include "georoute/stats.hpp"

namespace georoute {

enum class PolicyKind {
  geocombucb1,
  geocombucb2,
  klsr,
  klhhr,
  cucb,
  oracle,
  uniform,
};

PolicyKind parse_policy_kind(const std::string& name);
std::string policy_name(PolicyKind kind);
bool is_hop_by_hop(PolicyKind kind);

struct PolicyOptions {
  bool cucb_clamp = true;
  bool hhr_schedule_by_slot = false;
};

// A source-routing policy: picks a path for packet n, then observes the
// packet's feedback. The round counter n is supplied by the caller (the
// harness owns the dispatch loop).
class SourcePolicy {
 public:
  virtual ~SourcePolicy() = default;
  virtual PolicyKind kind() const = 0;
  // Policies that learn from feedback need the covering initialization phase
  // (one packet per covering path) before select() is first called.
  virtual bool learns() const { return true; }
  virtual Path select(std::uint64_t n) = 0;
  virtual void observe(const Path& path, const DelayFeedback& feedback) = 0;
  virtual const LinkStats* stats() const { return nullptr; }
};

// Everything a policy constructor may need; unused fields can stay empty.
struct PolicyContext {
  const NetworkTopology* topology = nullptr;
  const std::vector<Path>* paths = nullptr;   // enumerated set, lexicographic
  const LinkParams* params = nullptr;         // ground truth (oracle only)
  RngStream* rng = nullptr;                   // policy-private stream (uniform)
};

std::unique_ptr<SourcePolicy> make_source_policy(PolicyKind kind,
                                                 const PolicyContext& ctx,
                                                 const PolicyOptions& opts = {});

// Hop-by-hop policy (slot resolution). At slot tau, the node holding the
// packet asks for an outgoing link; every transmission attempt is reported
// back, successful or not.
class KlHhrPolicy {
 public:
  KlHhrPolicy(const NetworkTopology& topology, PolicyOptions opts = {});

  // Chooses the outgoing link at node v minimizing edge index + J(head).
  // packet_n is n(tau), the number of the packet currently in the network.
  LinkId select_hop(NodeId v, std::uint64_t slot, std::uint64_t packet_n);
  void observe_attempt(LinkId link, bool success);
  const SlotStats& slot_stats() const { return stats_; }

 private:
  const NetworkTopology& topo_;
  PolicyOptions opts_;
  SlotStats stats_;
  WeightVector weights_;  // scratch
};

// Greedy covering set: a small subset of the enumerated paths whose union
// touches every link that lies on any s->d path. Routing one packet along
// each gives every relevant link s_i >= 1 before index policies start.
std::vector<Path> covering_paths(const std::vector<Path>& all_paths);

}  // namespace georoute
