#include "georoute/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "georoute/divergence.hpp"
#include "georoute/errors.hpp"
#include "georoute/rng.hpp"

namespace georoute {

namespace {

void check_net(const LineNetwork& net) {
  if (net.hop_thetas.empty()) throw std::invalid_argument("empty line network");
  for (const auto& hop : net.hop_thetas) {
    if (hop.empty()) throw std::invalid_argument("hop with no links");
    for (double t : hop)
      if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("theta entries must lie in (0,1]");
  }
}

}  // namespace

std::size_t best_link_on_hop(const std::vector<double>& hop) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < hop.size(); ++j)
    if (hop[j] > hop[best]) best = j;
  return best;
}

double c2_line(const LineNetwork& net) {
  check_net(net);
  double total = 0.0;
  for (const auto& hop : net.hop_thetas) {
    std::size_t best = best_link_on_hop(hop);
    double tb = hop[best];
    for (std::size_t j = 0; j < hop.size(); ++j) {
      if (j == best) continue;
      double ti = hop[j];
      if (ti == tb) continue;  // exact tie: zero-gap term drops out
      if (tb >= 1.0) continue; // infinite divergence, zero contribution
      total += (1.0 / ti - 1.0 / tb) / klg(ti, tb);
    }
  }
  return total;
}

C1Result c1_line(const LineNetwork& net, double tail_eps) {
  check_net(net);
  const int hops = net.hops();

  std::vector<double> best_theta(static_cast<std::size_t>(hops));
  for (int h = 0; h < hops; ++h) {
    const auto& hop = net.hop_thetas[static_cast<std::size_t>(h)];
    best_theta[static_cast<std::size_t>(h)] = hop[best_link_on_hop(hop)];
  }

  C1Result out;
  DelayPmf star_pmf;  // built lazily at a k_max shared with each swapped path
  int star_kmax = -1;
  for (int h = 0; h < hops; ++h) {
    const auto& hop = net.hop_thetas[static_cast<std::size_t>(h)];
    std::size_t best = best_link_on_hop(hop);
    for (std::size_t j = 0; j < hop.size(); ++j) {
      if (j == best) continue;
      double ti = hop[j];
      double tb = hop[best];
      if (ti == tb) continue;

      // Swapped path: the optimal path with this hop's link replaced. The
      // pmfs are built by the all-positive convolution recurrence: its
      // relative error stays near machine precision, which matters because
      // heavily diluted denominators can be many orders below KLG.
      std::vector<double> swapped = best_theta;
      swapped[static_cast<std::size_t>(h)] = ti;
      int k_max = std::max(pmf_kmax_for_tail(swapped, tail_eps),
                           pmf_kmax_for_tail(best_theta, tail_eps));
      if (k_max > star_kmax) {
        star_kmax = k_max;
        star_pmf = path_delay_pmf_convolution(best_theta, star_kmax);
      }
      DelayPmf swapped_pmf = path_delay_pmf_convolution(swapped, k_max);
      KlSum kl = path_kl_information(swapped_pmf, star_pmf);
      if (!(kl.value > 1e-300))
        throw DegenerateDenominatorError(
            "vanishing KL denominator at hop " + std::to_string(h));
      out.value += (1.0 / ti - 1.0 / tb) / kl.value;
      out.max_rel_truncation_error =
          std::max(out.max_rel_truncation_error, kl.tail_error / kl.value);
    }
  }
  return out;
}

std::vector<RatioRow> ratio_experiment(int h_min, int h_max, int links_per_hop,
                                       int draws, double theta_lo,
                                       double theta_hi, std::uint64_t seed,
                                       double tail_eps) {
  if (draws < 1) throw std::invalid_argument("draws must be >= 1");
  if (h_min < 1 || h_max < h_min) throw std::invalid_argument("bad hop range");
  if (links_per_hop < 2)
    throw std::invalid_argument("ratio experiment needs >= 2 links per hop");
  if (!(theta_lo > 0.0) || theta_hi > 1.0 || theta_lo >= theta_hi)
    throw std::invalid_argument("bad theta interval");

  std::vector<RatioRow> rows;
  for (int h = h_min; h <= h_max; ++h) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int d = 0; d < draws; ++d) {
      RngStream rng = derive_stream(seed, "ratio",
                                    static_cast<std::uint64_t>(h),
                                    static_cast<std::uint64_t>(d));
      LineNetwork net;
      net.hop_thetas.assign(static_cast<std::size_t>(h),
                            std::vector<double>(
                                static_cast<std::size_t>(links_per_hop)));
      for (auto& hop : net.hop_thetas)
        for (double& t : hop) t = rng.uniform(theta_lo, theta_hi);
      try {
        double c2 = c2_line(net);
        if (!(c2 > 0.0))
          throw DegenerateDenominatorError("all hops tied");
        double ratio = c1_line(net, tail_eps).value / c2;
        sum += ratio;
        sum_sq += ratio * ratio;
      } catch (const std::exception& e) {
        throw DegenerateDenominatorError(
            "draw " + std::to_string(d) + " (H=" + std::to_string(h) +
            ", seed=" + std::to_string(seed) + "): " + e.what());
      }
    }
    RatioRow row;
    row.hops = h;
    row.draws = draws;
    row.mean_ratio = sum / draws;
    if (draws > 1) {
      double var = (sum_sq - sum * sum / draws) / (draws - 1);
      row.stderr_mean = std::sqrt(std::max(var, 0.0) / draws);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace georoute
