#include "georoute/policies.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "georoute/errors.hpp"
#include "georoute/indexes.hpp"

namespace georoute {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class LearningPolicyBase : public SourcePolicy {
 public:
  explicit LearningPolicyBase(const NetworkTopology& topo)
      : topo_(topo), stats_(topo.num_links()) {}

  void observe(const Path&, const DelayFeedback& feedback) override {
    stats_.update_semibandit(feedback);
  }
  const LinkStats* stats() const override { return &stats_; }

 protected:
  const NetworkTopology& topo_;
  LinkStats stats_;
};

// GeoCombUCB: argmin over the enumerated path set of a path index
// (variant 1 uses b, variant 2 uses c). Ties resolve to the earlier path in
// lexicographic order.
class GeoCombUcbPolicy final : public LearningPolicyBase {
 public:
  GeoCombUcbPolicy(const NetworkTopology& topo, const std::vector<Path>& paths,
                   int variant)
      : LearningPolicyBase(topo),
        paths_(paths),
        variant_(variant),
        max_hops_(max_hops(paths)) {}

  PolicyKind kind() const override {
    return variant_ == 1 ? PolicyKind::geocombucb1 : PolicyKind::geocombucb2;
  }

  Path select(std::uint64_t n) override {
    double best = kInf;
    const Path* chosen = nullptr;
    for (const Path& p : paths_) {
      double v = variant_ == 1 ? index_b(p, stats_, n, max_hops_).value
                               : index_c(p, stats_, n, max_hops_);
      if (v < best) {
        best = v;
        chosen = &p;
      }
    }
    return *chosen;
  }

 private:
  const std::vector<Path>& paths_;
  int variant_;
  int max_hops_;
};

// KL-SR: a shortest path under the per-edge omega indexes. Never enumerates
// the path set. Links with no observations (possible only for links that lie
// on no s->d path) get infinite weight and can never be returned.
class KlSrPolicy : public LearningPolicyBase {
 public:
  explicit KlSrPolicy(const NetworkTopology& topo)
      : LearningPolicyBase(topo), weights_(topo.num_links(), kInf) {}

  PolicyKind kind() const override { return PolicyKind::klsr; }

  Path select(std::uint64_t n) override {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      LinkId id = static_cast<LinkId>(i);
      weights_[i] = stats_.attempts(id) > 0 ? index_omega(id, stats_, n) : kInf;
    }
    Path p = shortest_path_with_infinities();
    for (LinkId id : p.links)
      if (stats_.attempts(id) == 0)
        throw UnexploredLinkError("selected path crosses unexplored link");
    return p;
  }

 protected:
  Path shortest_path_with_infinities() {
    // shortest_path validates finiteness; mask infinite entries by pruning
    // them to a weight no finite path can reach, then check the result.
    double cap = 0.0;
    bool any_inf = false;
    for (double w : weights_) {
      if (w == kInf)
        any_inf = true;
      else
        cap += w;
    }
    if (!any_inf) return shortest_path(topo_, weights_);
    WeightVector masked = weights_;
    double sentinel = 2.0 * cap + 1.0;
    for (double& w : masked)
      if (w == kInf) w = sentinel;
    Path p = shortest_path(topo_, masked);
    for (LinkId id : p.links)
      if (weights_[static_cast<std::size_t>(id)] == kInf)
        throw UnexploredLinkError("selected path crosses unexplored link");
    return p;
  }

  WeightVector weights_;
};

// CUCB baseline: shortest path under the optimistic reciprocal index.
class CucbPolicy final : public KlSrPolicy {
 public:
  CucbPolicy(const NetworkTopology& topo, bool clamp)
      : KlSrPolicy(topo), clamp_(clamp) {}

  PolicyKind kind() const override { return PolicyKind::cucb; }

  Path select(std::uint64_t n) override {
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      LinkId id = static_cast<LinkId>(i);
      weights_[i] =
          stats_.attempts(id) > 0 ? index_cucb(id, stats_, n, clamp_) : kInf;
    }
    return shortest_path_with_infinities();
  }

 private:
  bool clamp_;
};

class OraclePolicy final : public SourcePolicy {
 public:
  OraclePolicy(const NetworkTopology& topo, const LinkParams& params)
      : best_(shortest_path(topo, params.expected_delays())) {}

  PolicyKind kind() const override { return PolicyKind::oracle; }
  bool learns() const override { return false; }
  Path select(std::uint64_t) override { return best_; }
  void observe(const Path&, const DelayFeedback&) override {}

 private:
  Path best_;
};

class UniformPolicy final : public SourcePolicy {
 public:
  UniformPolicy(const std::vector<Path>& paths, RngStream& rng)
      : paths_(paths), rng_(rng) {}

  PolicyKind kind() const override { return PolicyKind::uniform; }
  bool learns() const override { return false; }
  Path select(std::uint64_t) override {
    return paths_[static_cast<std::size_t>(
        rng_.uniform_below(paths_.size()))];
  }
  void observe(const Path&, const DelayFeedback&) override {}

 private:
  const std::vector<Path>& paths_;
  RngStream& rng_;
};

}  // namespace

PolicyKind parse_policy_kind(const std::string& name) {
  if (name == "geocombucb1") return PolicyKind::geocombucb1;
  if (name == "geocombucb2") return PolicyKind::geocombucb2;
  if (name == "klsr") return PolicyKind::klsr;
  if (name == "klhhr") return PolicyKind::klhhr;
  if (name == "cucb") return PolicyKind::cucb;
  if (name == "oracle") return PolicyKind::oracle;
  if (name == "uniform") return PolicyKind::uniform;
  throw ConfigError("unknown policy: " + name);
}

std::string policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::geocombucb1: return "geocombucb1";
    case PolicyKind::geocombucb2: return "geocombucb2";
    case PolicyKind::klsr: return "klsr";
    case PolicyKind::klhhr: return "klhhr";
    case PolicyKind::cucb: return "cucb";
    case PolicyKind::oracle: return "oracle";
    case PolicyKind::uniform: return "uniform";
  }
  throw std::logic_error("bad policy kind");
}

bool is_hop_by_hop(PolicyKind kind) { return kind == PolicyKind::klhhr; }

std::unique_ptr<SourcePolicy> make_source_policy(PolicyKind kind,
                                                 const PolicyContext& ctx,
                                                 const PolicyOptions& opts) {
  switch (kind) {
    case PolicyKind::geocombucb1:
    case PolicyKind::geocombucb2:
      if (!ctx.topology || !ctx.paths)
        throw ConfigError("GeoCombUCB needs the enumerated path set");
      return std::make_unique<GeoCombUcbPolicy>(
          *ctx.topology, *ctx.paths, kind == PolicyKind::geocombucb1 ? 1 : 2);
    case PolicyKind::klsr:
      if (!ctx.topology) throw ConfigError("KL-SR needs a topology");
      return std::make_unique<KlSrPolicy>(*ctx.topology);
    case PolicyKind::cucb:
      if (!ctx.topology) throw ConfigError("CUCB needs a topology");
      return std::make_unique<CucbPolicy>(*ctx.topology, opts.cucb_clamp);
    case PolicyKind::oracle:
      if (!ctx.topology || !ctx.params)
        throw ConfigError("oracle needs the true link parameters");
      return std::make_unique<OraclePolicy>(*ctx.topology, *ctx.params);
    case PolicyKind::uniform:
      if (!ctx.paths || !ctx.rng)
        throw ConfigError("uniform policy needs paths and an rng stream");
      return std::make_unique<UniformPolicy>(*ctx.paths, *ctx.rng);
    case PolicyKind::klhhr:
      throw ConfigError("klhhr is a hop-by-hop policy, not a source policy");
  }
  throw std::logic_error("bad policy kind");
}

KlHhrPolicy::KlHhrPolicy(const NetworkTopology& topology, PolicyOptions opts)
    : topo_(topology),
      opts_(opts),
      stats_(topology.num_links()),
      weights_(topology.num_links(), kInf) {}

LinkId KlHhrPolicy::select_hop(NodeId v, std::uint64_t slot,
                               std::uint64_t packet_n) {
  if (v == topo_.destination())
    throw std::invalid_argument("packet already at destination");
  std::uint64_t schedule_arg = opts_.hhr_schedule_by_slot ? slot : packet_n;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    LinkId id = static_cast<LinkId>(i);
    weights_[i] = stats_.attempts(id) > 0
                      ? index_omega_slot(id, stats_, schedule_arg)
                      : kInf;
  }
  auto table = min_cost_to_destination(topo_, weights_);

  LinkId chosen = -1;
  double best = kInf;
  for (LinkId id : topo_.outgoing(v)) {
    double w = weights_[static_cast<std::size_t>(id)];
    double j = table[static_cast<std::size_t>(topo_.link(id).head)].cost;
    if (w == kInf || j == kInf) continue;
    double score = w + j;
    if (score < best) {
      best = score;
      chosen = id;
    }
  }
  if (chosen < 0)
    throw StrandedError("no outgoing link reaches the destination");
  return chosen;
}

void KlHhrPolicy::observe_attempt(LinkId link, bool success) {
  stats_.update_slot(link, success);
}

std::vector<Path> covering_paths(const std::vector<Path>& all_paths) {
  if (all_paths.empty()) return {};
  std::vector<char> uncovered(all_paths.front().mask.size(), 0);
  std::size_t remaining = 0;
  for (const Path& p : all_paths)
    for (LinkId id : p.links)
      if (!uncovered[static_cast<std::size_t>(id)]) {
        uncovered[static_cast<std::size_t>(id)] = 1;
        ++remaining;
      }

  std::vector<Path> cover;
  while (remaining > 0) {
    std::size_t best_gain = 0;
    const Path* best = nullptr;
    for (const Path& p : all_paths) {
      std::size_t gain = 0;
      for (LinkId id : p.links)
        if (uncovered[static_cast<std::size_t>(id)]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = &p;
      }
    }
    cover.push_back(*best);
    for (LinkId id : best->links) {
      if (uncovered[static_cast<std::size_t>(id)]) {
        uncovered[static_cast<std::size_t>(id)] = 0;
        --remaining;
      }
    }
  }
  return cover;
}

}  // namespace georoute
