// Acceptance suite: end-to-end checks of the full stack, one criterion per
// function, each printing a single [PASS]/[FAIL] line with its measured
// numbers. The process exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "georoute/bounds.hpp"
#include "georoute/divergence.hpp"
#include "georoute/errors.hpp"
#include "georoute/graph.hpp"
#include "georoute/harness.hpp"
#include "georoute/indexes.hpp"
#include "georoute/policies.hpp"
#include "georoute/rng.hpp"

using namespace georoute;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), spec, a, b, c);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. KLG identity: klg == kl/u to 1e-12 on 1e4 random pairs, and the
//    defining series truncated at tail mass < 1e-12 agrees to 1e-9.
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1, 101);
  double worst_identity = 0.0;
  double worst_series = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = 0.01 + 0.99 * rng.uniform01();
    double v = 0.01 + 0.99 * rng.uniform01();
    if (u >= 1.0 || v >= 1.0) continue;
    double g = klg(u, v);
    worst_identity = std::max(worst_identity,
                              std::abs(g - kl_bernoulli(u, v) / u));
    // Truncated series oracle; log-form terms so deep geometric tails
    // cannot underflow. Runs past the 1e-12 tail-mass point until the
    // remaining contribution, bounded by tail * (|base| + |slope|(k + 1/u)),
    // is negligible against the 1e-9 comparison.
    double base = std::log(u / v);
    double slope = std::log1p(-u) - std::log1p(-v);
    double sum = 0.0, pu = u, tail = 1.0;  // tail: mass of terms not yet added
    for (int k = 1;
         tail > 1e-12 ||
         tail * (std::abs(base) + std::abs(slope) * (k + 1.0 / u)) > 1e-13;
         ++k) {
      sum += pu * (base + (k - 1) * slope);
      tail *= 1.0 - u;  // multiplicative: no subtraction drift
      pu *= 1.0 - u;
      if (tail <= 0.0) break;
    }
    worst_series = std::max(worst_series, std::abs(g - sum));
  }
  double dt = seconds_since(t0);
  bool ok = worst_identity < 1e-12 && worst_series < 1e-9 && dt < 1.0;
  report(1, ok, "KLG identity and series agreement",
         fmt("max identity gap %.2e, max series gap %.2e, %.2f s",
             worst_identity, worst_series, dt));
}

// ---------------------------------------------------------------------------
// 2. Path delay pmf: closed form vs convolution pointwise to 1e-9 on 1e3
//    random paths with pairwise theta gaps > 1e-3; truncated mass consistent
//    with the reported tail bound.
void criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1, 102);
  double worst_point = 0.0;
  double worst_mass = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int h = 2 + static_cast<int>(rng.uniform_below(5));
    std::vector<double> thetas;
    while (static_cast<int>(thetas.size()) < h) {
      double t = 0.1 + 0.85 * rng.uniform01();
      bool ok = true;
      for (double u : thetas)
        if (std::abs(u - t) <= 1e-3) ok = false;
      if (ok) thetas.push_back(t);
    }
    int k_max = pmf_kmax_for_tail(thetas, 1e-10);
    DelayPmf a = path_delay_pmf_closed_form(thetas, k_max);
    DelayPmf b = path_delay_pmf_convolution(thetas, k_max);
    double mass = 0.0;
    for (int k = a.support_start; k <= a.k_max(); ++k) {
      worst_point = std::max(worst_point, std::abs(a.prob(k) - b.prob(k)));
      mass += a.prob(k);
    }
    worst_mass = std::max(worst_mass, std::abs(1.0 - mass - a.tail_bound));
  }
  double dt = seconds_since(t0);
  bool ok = worst_point < 1e-9 && worst_mass < 1e-9 && dt < 10.0;
  report(2, ok, "psi closed form vs convolution oracle",
         fmt("max pointwise gap %.2e, mass residual %.2e, %.2f s", worst_point,
             worst_mass, dt));
}

// ---------------------------------------------------------------------------
// 3. Index order b >= c (and both below the empirical path delay) on 1e3
//    random states; the recovered optimizer spends the budget to 1e-6.
void criterion3() {
  RngStream rng(1, 103);
  int violations = 0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    int h = 1 + static_cast<int>(rng.uniform_below(6));
    auto topo = make_line_network(h, 1);
    std::vector<LinkId> seq;
    for (LinkId id = 0; id < h; ++id) seq.push_back(id);
    Path p = make_path(topo, seq);

    LinkStats stats(static_cast<std::size_t>(h));
    for (LinkId id = 0; id < h; ++id) {
      std::uint64_t t = 10 + rng.uniform_below(10000);
      double frac = 0.1 + 0.8 * rng.uniform01();
      std::uint64_t s =
          std::max<std::uint64_t>(1, static_cast<std::uint64_t>(frac * t));
      DelayFeedback fb;
      fb.kind = FeedbackKind::semibandit;
      for (std::uint64_t k = 0; k + 1 < s; ++k)
        fb.per_link.emplace_back(id, 1);
      fb.per_link.emplace_back(id, t - s + 1);
      stats.update_semibandit(fb);
    }
    std::uint64_t n = 10 + rng.uniform_below(100000);

    BIndex b = index_b(p, stats, n, h);
    double c = index_c(p, stats, n, h);
    double empirical = 0.0;
    bool any_uncertain = false;
    for (LinkId id : p.links) {
      empirical += 1.0 / stats.theta_hat(id);
      if (stats.theta_hat(id) < 1.0) any_uncertain = true;
    }
    if (b.value < c - 1e-9) ++violations;
    if (b.value > empirical + 1e-9) ++violations;
    if (c > empirical + 1e-9) ++violations;
    if (any_uncertain) worst_residual = std::max(worst_residual, b.residual);
  }
  bool ok = violations == 0 && worst_residual < 1e-6;
  report(3, ok, "index order b >= c and budget feasibility",
         fmt("%g violations, worst budget residual %.2e", violations,
             worst_residual));
}

// ---------------------------------------------------------------------------
// 4. Line-network bounds: 1-hop C1 == C2 to 1e-6; C1 >= C2 on 1e3 random
//    line networks; ratio sweep nondecreasing with the H=6 mean in
//    [150, 15000].
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  RngStream rng(1, 104);

  double worst_onehop = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> hop{0.1 + 0.85 * rng.uniform01(),
                            0.1 + 0.85 * rng.uniform01()};
    LineNetwork net{{hop}};
    double c2 = c2_line(net);
    if (c2 == 0.0) continue;
    worst_onehop =
        std::max(worst_onehop, std::abs(c1_line(net).value - c2) /
                                   std::max(1.0, c2));
  }

  int order_violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int h = 1 + static_cast<int>(rng.uniform_below(6));
    LineNetwork net;
    net.hop_thetas.assign(static_cast<std::size_t>(h),
                          std::vector<double>(2));
    for (auto& hop : net.hop_thetas)
      for (double& t : hop) t = 0.1 + 0.89 * rng.uniform01();
    double c2 = c2_line(net);
    if (c2 == 0.0) continue;
    if (c1_line(net).value < c2 * (1.0 - 1e-9)) ++order_violations;
  }

  auto rows = ratio_experiment(1, 6, 2, 1000, 0.1, 0.99, 1);
  bool nondecreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].mean_ratio < rows[i - 1].mean_ratio) nondecreasing = false;
  double h6 = rows.back().mean_ratio;
  bool in_band = h6 >= 150.0 && h6 <= 15000.0;

  double dt = seconds_since(t0);
  bool ok = worst_onehop < 1e-6 && order_violations == 0 && nondecreasing &&
            in_band && dt < 300.0;
  report(4, ok, "line-network bounds C1/C2",
         fmt("1-hop gap %.2e, order violations %g, H=6 mean ratio %.4g",
             worst_onehop, static_cast<double>(order_violations), h6) +
             (nondecreasing ? ", nondecreasing" : ", NOT nondecreasing") +
             fmt(", %.1f s", dt));
}

// ---------------------------------------------------------------------------
// 5. KL-SR on the 1-hop line: mean R(N)/ln N in (0, 3*C2], increments over
//    the last three checkpoint doublings decreasing. The mean uses the
//    conditional-expectation regret estimator (unbiased for R(N), strictly
//    lower variance than summing realized delays).
void criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.topology.kind = TopologySpec::Kind::line;
  cfg.topology.hops = 1;
  cfg.topology.links_per_hop = 2;
  cfg.theta.law = ThetaSpec::Law::explicit_vector;
  cfg.theta.explicit_theta = {0.5, 0.25};
  cfg.packets = 20000;
  cfg.runs = 100;
  cfg.seed = 1;
  cfg.workers = 2;
  cfg.checkpoints = {2500, 5000, 10000, 20000};
  cfg.policies = {PolicyKind::klsr};
  ExperimentResult res = run_experiment(cfg);

  LineNetwork net{{{0.5, 0.25}}};
  double c2 = c2_line(net);

  double mean[4] = {0, 0, 0, 0};
  for (const auto& t : res.policies[0].traces)
    for (int k = 0; k < 4; ++k)
      mean[k] += t.cum_expected_regret[static_cast<std::size_t>(k)] /
                 static_cast<double>(cfg.runs);
  double rate = mean[3] / std::log(static_cast<double>(cfg.packets));
  bool rate_ok = rate > 0.0 && rate <= 3.0 * c2;
  double i1 = mean[1] - mean[0], i2 = mean[2] - mean[1], i3 = mean[3] - mean[2];
  bool decreasing = i1 > i2 && i2 > i3;

  double dt = seconds_since(t0);
  bool ok = rate_ok && decreasing && dt < 120.0;
  report(5, ok, "KL-SR line-network optimality",
         fmt("R(N)/ln N = %.3f vs 3*C2 = %.3f", rate, 3.0 * c2) +
             fmt(", increments %.2f > %.2f > %.2f", i1, i2, i3) +
             (decreasing ? "" : " NOT decreasing") + fmt(", %.1f s", dt));
}

// ---------------------------------------------------------------------------
// 6. Grid ordering at (theta_min, delta_min) = (0.30, 0.15): each proposed
//    algorithm below CUCB and GeoCombUCB-1 <= GeoCombUCB-2, comparisons by
//    non-overlapping 95% CIs at the final checkpoint; overlapping intervals
//    are reported as inconclusive rather than failed.
struct Comparison {
  bool failed = false;
  std::string note;
};

Comparison compare_ci(const std::string& label, const Aggregate& lo,
                      const Aggregate& hi) {
  Comparison out;
  double lo_hi = lo.ci_hi.back(), hi_lo = hi.ci_lo.back();
  double lo_lo = lo.ci_lo.back(), hi_hi = hi.ci_hi.back();
  if (lo_hi < hi_lo) {
    out.note = label + " separated";
  } else if (hi_hi < lo_lo) {
    out.failed = true;
    out.note = label + " REVERSED (gap " +
               fmt("%.1f", lo_lo - hi_hi) + ")";
  } else {
    out.note = label + " inconclusive (mean gap " +
               fmt("%.1f", hi.mean.back() - lo.mean.back()) + ")";
  }
  return out;
}

void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.topology.kind = TopologySpec::Kind::grid;
  cfg.topology.rows = 4;
  cfg.topology.cols = 4;
  cfg.theta.law = ThetaSpec::Law::match;
  cfg.theta.match_theta_min = 0.30;
  cfg.theta.match_delta_min = 0.15;
  cfg.packets = 10000;
  cfg.runs = 50;
  cfg.seed = 1;
  cfg.workers = 2;
  cfg.checkpoints = {100, 1000, 5000, 10000};
  cfg.policies = {PolicyKind::geocombucb1, PolicyKind::geocombucb2,
                  PolicyKind::klsr, PolicyKind::cucb};
  ExperimentResult res = run_experiment(cfg);

  Aggregate agg[4];
  for (int p = 0; p < 4; ++p) agg[p] = aggregate(res.policies[p].traces);

  std::vector<Comparison> checks;
  checks.push_back(compare_ci("gc1<cucb", agg[0], agg[3]));
  checks.push_back(compare_ci("gc2<cucb", agg[1], agg[3]));
  checks.push_back(compare_ci("klsr<cucb", agg[2], agg[3]));
  checks.push_back(compare_ci("gc1<=gc2", agg[0], agg[1]));

  std::string detail = fmt("means gc1 %.0f, gc2 %.0f", agg[0].mean.back(),
                           agg[1].mean.back()) +
                       fmt(", klsr %.0f, cucb %.0f; ", agg[2].mean.back(),
                           agg[3].mean.back());
  bool ok = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (checks[i].failed) ok = false;
    detail += checks[i].note;
    if (i + 1 < checks.size()) detail += "; ";
  }
  double dt = seconds_since(t0);
  detail += fmt("; %.1f s", dt);
  ok = ok && dt < 600.0;
  report(6, ok, "grid algorithm ordering vs CUCB", detail);
}

// ---------------------------------------------------------------------------
// 7. Hop-by-hop consistency: KL-HHR tracks KL-SR within 2x on a 2-hop line
//    at N = 1e4 over 50 runs; oracle regret compatible with zero in both
//    simulation modes.
void criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.topology.kind = TopologySpec::Kind::line;
  cfg.topology.hops = 2;
  cfg.topology.links_per_hop = 2;
  cfg.theta.law = ThetaSpec::Law::explicit_vector;
  cfg.theta.explicit_theta = {0.5, 0.25, 0.6, 0.3};
  cfg.packets = 10000;
  cfg.runs = 50;
  cfg.seed = 1;
  cfg.workers = 2;
  cfg.policies = {PolicyKind::klhhr, PolicyKind::klsr, PolicyKind::oracle};
  ExperimentResult res = run_experiment(cfg);

  auto mean_and_stderr = [](const std::vector<RegretTrace>& traces) {
    double m = 0.0;
    for (const auto& t : traces)
      m += t.cum_regret.back() / static_cast<double>(traces.size());
    double ss = 0.0;
    for (const auto& t : traces) {
      double d = t.cum_regret.back() - m;
      ss += d * d;
    }
    double n = static_cast<double>(traces.size());
    return std::pair<double, double>(m, std::sqrt(ss / (n - 1.0) / n));
  };

  auto [hhr_mean, hhr_se] = mean_and_stderr(res.policies[0].traces);
  auto [sr_mean, sr_se] = mean_and_stderr(res.policies[1].traces);
  auto [orc_mean, orc_se] = mean_and_stderr(res.policies[2].traces);
  double ratio = hhr_mean / sr_mean;
  bool tracks = hhr_mean > 0.0 && sr_mean > 0.0 && ratio <= 2.0 &&
                ratio >= 0.5;

  // Oracle through the slot-level simulator.
  NetworkTopology topo = cfg.topology.build();
  auto paths = enumerate_paths(topo, cfg.path_cap);
  LinkParams params = cfg.theta.realize(topo, &paths, cfg.seed);
  std::vector<RegretTrace> slot_oracle;
  for (int run = 0; run < cfg.runs; ++run)
    slot_oracle.push_back(run_hop_by_hop(topo, &paths, params,
                                         PolicyKind::oracle, cfg, run,
                                         res.d_star, nullptr));
  auto [slot_mean, slot_se] = mean_and_stderr(slot_oracle);

  bool oracle_ok = std::abs(orc_mean) <= 3.0 * orc_se &&
                   std::abs(slot_mean) <= 3.0 * slot_se;
  double dt = seconds_since(t0);
  bool ok = tracks && oracle_ok && dt < 300.0;
  report(7, ok, "hop-by-hop tracks source routing",
         fmt("HHR %.1f vs KL-SR %.1f (ratio %.2f)", hhr_mean, sr_mean, ratio) +
             fmt("; oracle source %.1f+-%.1f", orc_mean, orc_se) +
             fmt(", slot %.1f+-%.1f", slot_mean, slot_se) +
             fmt("; %.1f s", dt));
}

// ---------------------------------------------------------------------------
// 8. Determinism: identical config and seed produce byte-identical CSVs.
void criterion8() {
  ExperimentConfig cfg;
  cfg.topology.kind = TopologySpec::Kind::line;
  cfg.topology.hops = 2;
  cfg.topology.links_per_hop = 2;
  cfg.theta.law = ThetaSpec::Law::explicit_vector;
  cfg.theta.explicit_theta = {0.5, 0.25, 0.6, 0.3};
  cfg.packets = 500;
  cfg.runs = 5;
  cfg.seed = 9;
  cfg.workers = 2;
  cfg.policies = {PolicyKind::klsr, PolicyKind::cucb, PolicyKind::oracle};
  std::string a = experiment_csv(cfg, run_experiment(cfg));
  std::string b = experiment_csv(cfg, run_experiment(cfg));
  bool ok = !a.empty() && a == b;
  report(8, ok, "byte-identical CSV for identical config and seed",
         fmt("%g bytes", static_cast<double>(a.size())));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  std::printf("%d of 8 criteria failed\n", g_failures);
  return g_failures;
}
