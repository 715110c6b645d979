#pragma once

#include <cstdint>
#include <vector>

namespace georoute {

// A line network described directly by its per-hop link success
// probabilities; hop h has hop_thetas[h] parallel links.
struct LineNetwork {
  std::vector<std::vector<double>> hop_thetas;

  int hops() const { return static_cast<int>(hop_thetas.size()); }
};

// Index of the best link on a hop (ties resolve to the lowest index).
std::size_t best_link_on_hop(const std::vector<double>& hop);

// Asymptotic semi-bandit / hop-by-hop regret constant:
//   C2 = sum over suboptimal links i of (1/theta_i - 1/theta_best) /
//        KLG(theta_i, theta_best).
// Links exactly tied with their hop's best contribute nothing.
double c2_line(const LineNetwork& net);

struct C1Result {
  double value = 0.0;
  // Worst over terms of (KL tail-error bound / truncated denominator).
  double max_rel_truncation_error = 0.0;
};

// Asymptotic bandit-feedback regret constant: like C2, but each denominator
// is the KL information between the end-to-end delay distributions of the
// swapped path and the optimal path, truncated at tail_eps.
C1Result c1_line(const LineNetwork& net, double tail_eps = 1e-10);

struct RatioRow {
  int hops = 0;
  int draws = 0;
  double mean_ratio = 0.0;
  double stderr_mean = 0.0;
};

// Mean C1/C2 over random line networks with `links_per_hop` parallel links
// per hop and i.i.d. uniform(theta_lo, theta_hi) link parameters, for each
// hop count in [h_min, h_max].
std::vector<RatioRow> ratio_experiment(int h_min, int h_max, int links_per_hop,
                                       int draws, double theta_lo,
                                       double theta_hi, std::uint64_t seed,
                                       double tail_eps = 1e-10);

}  // namespace georoute
