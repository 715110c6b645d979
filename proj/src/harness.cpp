#include "georoute/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "georoute/errors.hpp"
#include "georoute/indexes.hpp"
#include "georoute/rng.hpp"

namespace georoute {

namespace {

std::string fmt(double x, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

double path_expected_delay(const Path& p, const LinkParams& params) {
  double d = 0.0;
  for (LinkId id : p.links) d += 1.0 / params.theta(id);
  return d;
}

FeedbackKind feedback_for(PolicyKind kind, const ExperimentConfig& cfg) {
  // Learning policies consume per-link delays; the configured kind applies
  // to the non-learning baselines (their feedback is discarded anyway).
  if (kind == PolicyKind::oracle || kind == PolicyKind::uniform)
    return cfg.feedback;
  return FeedbackKind::semibandit;
}

void write_stats_debug_row(std::ostream& os, std::uint64_t n,
                           const LinkStats& stats) {
  os << n;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    LinkId id = static_cast<LinkId>(i);
    os << ',' << stats.packets(id) << ',' << stats.attempts(id);
  }
  os << '\n';
}

}  // namespace

Aggregate aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.size() < 2)
    throw std::invalid_argument("aggregation needs at least two traces");
  const auto& cps = traces.front().checkpoints;
  for (const auto& t : traces)
    if (t.checkpoints != cps)
      throw std::invalid_argument("misaligned checkpoints across traces");

  Aggregate agg;
  agg.checkpoints = cps;
  const double n = static_cast<double>(traces.size());
  for (std::size_t k = 0; k < cps.size(); ++k) {
    double sum = 0.0;
    for (const auto& t : traces) sum += t.cum_regret[k];
    double mean = sum / n;
    double ss = 0.0;
    for (const auto& t : traces) {
      double d = t.cum_regret[k] - mean;
      ss += d * d;
    }
    double stderr_mean = std::sqrt(ss / (n - 1.0) / n);
    agg.mean.push_back(mean);
    agg.ci_lo.push_back(mean - 1.96 * stderr_mean);
    agg.ci_hi.push_back(mean + 1.96 * stderr_mean);
  }
  return agg;
}

RegretTrace run_source_routing(const NetworkTopology& topo,
                               const std::vector<Path>* paths,
                               const LinkParams& params, PolicyKind kind,
                               const ExperimentConfig& cfg, int run_index,
                               double d_star) {
  if (is_hop_by_hop(kind))
    throw ConfigError("hop-by-hop policy in the source-routing loop");

  const std::string name = policy_name(kind);
  RngStream env_rng = derive_stream(cfg.seed, "env:" + name,
                                    static_cast<std::uint64_t>(run_index));
  RngStream pol_rng = derive_stream(cfg.seed, "pol:" + name,
                                    static_cast<std::uint64_t>(run_index));

  PolicyContext ctx;
  ctx.topology = &topo;
  ctx.paths = paths;
  ctx.params = &params;
  ctx.rng = &pol_rng;
  auto policy = make_source_policy(kind, ctx, cfg.policy_options);

  std::vector<Path> covering;
  if (policy->learns()) {
    if (!paths)
      throw ConfigError("covering initialization needs the enumerated paths");
    covering = covering_paths(*paths);
  }

  const FeedbackKind fb_kind = feedback_for(kind, cfg);
  const auto checkpoints =
      cfg.checkpoints.empty() ? default_checkpoints(cfg.packets) : cfg.checkpoints;

  std::ofstream debug;
  if (!cfg.stats_debug_out.empty() && policy->learns()) {
    debug.open(cfg.stats_debug_out + "." + name + ".run" +
               std::to_string(run_index) + ".csv");
    debug << "n";
    for (std::size_t i = 0; i < topo.num_links(); ++i)
      debug << ",s" << i << ",t" << i;
    debug << '\n';
  }

  RegretTrace trace;
  trace.checkpoints = checkpoints;
  trace.cum_regret.reserve(checkpoints.size());
  trace.cum_expected_regret.reserve(checkpoints.size());

  std::uint64_t cum_delay = 0;
  double cum_expected_gap = 0.0;
  std::size_t next_cp = 0;
  for (std::uint64_t n = 1; n <= cfg.packets; ++n) {
    const Path path = n <= covering.size()
                          ? covering[static_cast<std::size_t>(n - 1)]
                          : policy->select(n);
    DelayFeedback fb = route_packet_source(path, params, env_rng, fb_kind);
    if (policy->learns()) {
      if (fb.kind != FeedbackKind::semibandit)
        throw ConfigError("learning policy received bandit feedback");
      policy->observe(path, fb);
    }
    cum_delay += fb.total;
    cum_expected_gap += path_expected_delay(path, params) - d_star;
    if (debug.is_open()) write_stats_debug_row(debug, n, *policy->stats());
    if (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
      trace.cum_regret.push_back(static_cast<double>(cum_delay) -
                                 static_cast<double>(n) * d_star);
      trace.cum_expected_regret.push_back(cum_expected_gap);
      ++next_cp;
    }
  }
  trace.total_delay = cum_delay;
  return trace;
}

RegretTrace run_hop_by_hop(const NetworkTopology& topo,
                           const std::vector<Path>* paths,
                           const LinkParams& params, PolicyKind kind,
                           const ExperimentConfig& cfg, int run_index,
                           double d_star, ThroughputTrace* throughput) {
  const std::string name = policy_name(kind);
  RngStream env_rng = derive_stream(cfg.seed, "env:" + name,
                                    static_cast<std::uint64_t>(run_index));

  const bool learning = kind == PolicyKind::klhhr;
  if (!learning && kind != PolicyKind::oracle)
    throw ConfigError("slot-level loop supports klhhr and oracle only");

  KlHhrPolicy policy(topo, cfg.policy_options);
  Path oracle_path = shortest_path(topo, params.expected_delays());

  std::vector<Path> covering;
  if (learning) {
    if (!paths)
      throw ConfigError("covering initialization needs the enumerated paths");
    covering = covering_paths(*paths);
  }

  const auto checkpoints =
      cfg.checkpoints.empty() ? default_checkpoints(cfg.packets) : cfg.checkpoints;

  RegretTrace trace;
  trace.checkpoints = checkpoints;

  // Slot ladder for the throughput record, extended on the fly.
  double next_slot_cp = 1.0;
  const double mu_star = 1.0 / d_star;

  std::uint64_t slot = 0;
  std::uint64_t cum_delay = 0;
  std::size_t next_cp = 0;
  for (std::uint64_t n = 1; n <= cfg.packets; ++n) {
    NodeId at = topo.source();
    std::uint64_t pkt_slots = 0;
    std::size_t forced_idx = 0;  // position along a covering path
    const Path* forced =
        (learning && n <= covering.size())
            ? &covering[static_cast<std::size_t>(n - 1)]
            : (learning ? nullptr : &oracle_path);
    std::vector<char> seen(static_cast<std::size_t>(topo.num_nodes()), 0);
    seen[static_cast<std::size_t>(at)] = 1;

    while (at != topo.destination()) {
      if (pkt_slots >= cfg.slot_cap)
        throw SlotCapExceededError("packet " + std::to_string(n) +
                                   " exceeded the per-packet slot cap");
      LinkId link = forced ? forced->links[forced_idx]
                           : policy.select_hop(at, slot + 1, n);
      ++slot;
      ++pkt_slots;
      bool ok = attempt_transmission(link, params, env_rng);
      if (learning) policy.observe_attempt(link, ok);
      if (ok) {
        at = topo.link(link).head;
        if (forced) ++forced_idx;
        if (at != topo.destination()) {
          if (seen[static_cast<std::size_t>(at)]) ++trace.node_revisits;
          seen[static_cast<std::size_t>(at)] = 1;
        }
      }
      if (throughput && static_cast<double>(slot) >= next_slot_cp) {
        std::uint64_t delivered = at == topo.destination() ? n : n - 1;
        throughput->slot_checkpoints.push_back(slot);
        throughput->regret.push_back(static_cast<double>(slot) * mu_star -
                                     static_cast<double>(delivered));
        while (static_cast<double>(slot) >= next_slot_cp) next_slot_cp *= 1.3;
      }
    }
    cum_delay += pkt_slots;
    if (next_cp < checkpoints.size() && n == checkpoints[next_cp]) {
      double regret = static_cast<double>(cum_delay) -
                      static_cast<double>(n) * d_star;
      trace.cum_regret.push_back(regret);
      trace.cum_expected_regret.push_back(regret);
      ++next_cp;
    }
  }
  trace.total_delay = cum_delay;
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  NetworkTopology topo = cfg.topology.build();

  // The enumerated path set is needed by path-index policies, the uniform
  // baseline, covering initialization, and the matched theta law.
  bool need_paths =
      cfg.theta.law == ThetaSpec::Law::match ||
      std::any_of(cfg.policies.begin(), cfg.policies.end(), [](PolicyKind k) {
        return k != PolicyKind::oracle;
      });
  std::vector<Path> paths;
  if (need_paths) paths = enumerate_paths(topo, cfg.path_cap);

  LinkParams params =
      cfg.theta.realize(topo, paths.empty() ? nullptr : &paths, cfg.seed);
  Path best = shortest_path(topo, params.expected_delays());
  double d_star = path_expected_delay(best, params);

  ExperimentResult result;
  result.d_star = d_star;
  result.theta = params.theta();
  result.checkpoints =
      cfg.checkpoints.empty() ? default_checkpoints(cfg.packets) : cfg.checkpoints;
  result.policies.resize(cfg.policies.size());
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    result.policies[p].kind = cfg.policies[p];
    result.policies[p].traces.resize(static_cast<std::size_t>(cfg.runs));
    if (is_hop_by_hop(cfg.policies[p]))
      result.policies[p].throughput.resize(static_cast<std::size_t>(cfg.runs));
  }

  const std::size_t total_tasks =
      cfg.policies.size() * static_cast<std::size_t>(cfg.runs);
  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t task = next_task.fetch_add(1);
      if (task >= total_tasks || failed.load()) return;
      std::size_t p = task / static_cast<std::size_t>(cfg.runs);
      int run = static_cast<int>(task % static_cast<std::size_t>(cfg.runs));
      try {
        PolicyKind kind = cfg.policies[p];
        if (is_hop_by_hop(kind)) {
          result.policies[p].traces[static_cast<std::size_t>(run)] =
              run_hop_by_hop(
                  topo, &paths, params, kind, cfg, run, d_star,
                  &result.policies[p].throughput[static_cast<std::size_t>(run)]);
        } else {
          result.policies[p].traces[static_cast<std::size_t>(run)] =
              run_source_routing(topo, paths.empty() ? nullptr : &paths, params,
                                 kind, cfg, run, d_star);
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_message.empty())
          error_message = policy_name(cfg.policies[p]) + " run " +
                          std::to_string(run) + ": " + e.what();
      }
    }
  };

  int threads = std::min<int>(cfg.workers, static_cast<int>(total_tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("run failed: " + error_message);
  return result;
}

std::string experiment_csv(const ExperimentConfig& cfg,
                           const ExperimentResult& result) {
  std::ostringstream os;
  os << "# georoute simulate\n";
  os << "# topology=" << cfg.topology.describe() << '\n';
  os << "# theta_spec=" << cfg.theta.describe() << '\n';
  os << "# theta=";
  for (std::size_t i = 0; i < result.theta.size(); ++i) {
    if (i) os << ',';
    os << fmt(result.theta[i], "%.17g");
  }
  os << '\n';
  os << "# policies=";
  for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
    if (i) os << ',';
    os << policy_name(cfg.policies[i]);
  }
  os << '\n';
  os << "# packets=" << cfg.packets << " runs=" << cfg.runs
     << " seed=" << cfg.seed << " feedback="
     << (cfg.feedback == FeedbackKind::semibandit ? "semibandit" : "bandit")
     << " path_cap=" << cfg.path_cap << " workers=" << cfg.workers
     << " slot_cap=" << cfg.slot_cap << " cucb_clamp="
     << (cfg.policy_options.cucb_clamp ? 1 : 0) << " hhr_schedule="
     << (cfg.policy_options.hhr_schedule_by_slot ? "slot" : "packet") << '\n';
  os << "# checkpoints=";
  for (std::size_t i = 0; i < result.checkpoints.size(); ++i) {
    if (i) os << ',';
    os << result.checkpoints[i];
  }
  os << '\n';
  os << "# d_star=" << fmt(result.d_star, "%.17g") << '\n';
  os << "policy,run,checkpoint_n,cumulative_regret\n";

  for (const PolicyResult& pr : result.policies) {
    const std::string name = policy_name(pr.kind);
    for (std::size_t run = 0; run < pr.traces.size(); ++run) {
      const RegretTrace& t = pr.traces[run];
      for (std::size_t k = 0; k < t.checkpoints.size(); ++k)
        os << name << ',' << run << ',' << t.checkpoints[k] << ','
           << fmt(t.cum_regret[k]) << '\n';
    }
    if (pr.traces.size() >= 2) {
      Aggregate agg = aggregate(pr.traces);
      for (std::size_t k = 0; k < agg.checkpoints.size(); ++k)
        os << name << ",mean," << agg.checkpoints[k] << ','
           << fmt(agg.mean[k]) << '\n';
      for (std::size_t k = 0; k < agg.checkpoints.size(); ++k)
        os << name << ",ci_lo," << agg.checkpoints[k] << ','
           << fmt(agg.ci_lo[k]) << '\n';
      for (std::size_t k = 0; k < agg.checkpoints.size(); ++k)
        os << name << ",ci_hi," << agg.checkpoints[k] << ','
           << fmt(agg.ci_hi[k]) << '\n';
    }
  }
  return os.str();
}

std::string ratio_csv(int links_per_hop, double theta_lo, double theta_hi,
                      std::uint64_t seed, const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  os << "# georoute bounds ratio\n";
  os << "# links_per_hop=" << links_per_hop << " theta_law=uniform["
     << fmt(theta_lo) << ',' << fmt(theta_hi) << "] seed=" << seed << '\n';
  os << "H,draws,mean_ratio,stderr,theta_law,seed\n";
  for (const RatioRow& r : rows)
    os << r.hops << ',' << r.draws << ',' << fmt(r.mean_ratio) << ','
       << fmt(r.stderr_mean) << ",uniform[" << fmt(theta_lo) << ';'
       << fmt(theta_hi) << "]," << seed << '\n';
  return os.str();
}

std::vector<double> generate_theta_matching(const NetworkTopology& topo,
                                            const std::vector<Path>& paths,
                                            double theta_min, double delta_min,
                                            std::uint64_t seed) {
  if (!(theta_min > 0.0) || theta_min >= 1.0)
    throw std::invalid_argument("theta_min must lie in (0,1)");
  if (!(delta_min > 0.0))
    throw std::invalid_argument("delta_min must be positive");
  if (paths.size() < 2)
    throw std::invalid_argument("matching needs at least two paths");

  const double hi = 0.99;
  for (std::uint64_t attempt = 0; attempt < 20000; ++attempt) {
    RngStream rng = derive_stream(seed, "theta-match", attempt);
    std::vector<double> theta(topo.num_links());
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] = rng.uniform(theta_min, hi);
      if (theta[i] < theta[argmin]) argmin = i;
    }
    theta[argmin] = theta_min;  // pin the minimum exactly

    auto path_cost = [&](const Path& p) {
      double c = 0.0;
      for (LinkId id : p.links) c += 1.0 / theta[static_cast<std::size_t>(id)];
      return c;
    };

    std::size_t best = 0;
    double best_cost = path_cost(paths[0]);
    for (std::size_t i = 1; i < paths.size(); ++i) {
      double c = path_cost(paths[i]);
      if (c < best_cost) {
        best_cost = c;
        best = i;
      }
    }
    std::size_t second = paths.size();
    double second_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (i == best) continue;
      double gap = path_cost(paths[i]) - best_cost;
      if (gap > 0.0 && gap < second_gap) {
        second_gap = gap;
        second = i;
      }
    }
    if (second == paths.size()) continue;
    if (std::abs(second_gap - delta_min) > 0.25) continue;

    // Retune one link exclusive to the runner-up so its gap is exactly
    // delta_min, then re-verify every summary statistic.
    LinkId adjust = -1;
    for (LinkId id : paths[second].links)
      if (!paths[best].contains(id)) {
        adjust = id;
        break;
      }
    if (adjust < 0) continue;
    double inv = 1.0 / theta[static_cast<std::size_t>(adjust)] +
                 (delta_min - second_gap);
    if (!(inv >= 1.0 / hi)) continue;
    double adjusted = 1.0 / inv;
    if (adjusted < theta_min) continue;
    theta[static_cast<std::size_t>(adjust)] = adjusted;

    double min_theta = *std::min_element(theta.begin(), theta.end());
    if (min_theta != theta_min) continue;
    double new_best = path_cost(paths[best]);
    bool ok = true;
    double new_min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (i == best) continue;
      double gap = path_cost(paths[i]) - new_best;
      if (gap < -1e-12) {
        ok = false;  // best path changed
        break;
      }
      if (gap > 1e-12 && gap < new_min_gap) new_min_gap = gap;
    }
    if (!ok || std::abs(new_min_gap - delta_min) > 1e-9) continue;
    return theta;
  }
  throw NoConvergenceError("could not match (theta_min, delta_min)");
}

}  // namespace georoute
