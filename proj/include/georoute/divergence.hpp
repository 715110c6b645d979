#pragma once

#include <vector>

namespace georoute {

// KL divergence between Bernoulli(u) and Bernoulli(v), with the 0 log 0 = 0
// convention. Throws std::domain_error when v is 0 or 1 while u demands an
// infinite divergence.
double kl_bernoulli(double u, double v);

// KL divergence between geometric distributions with success probabilities
// u and v; equals kl_bernoulli(u, v) / u. Requires u, v in (0,1].
double klg(double u, double v);

// Truncated end-to-end delay distribution of a path: probabilities for
// k = support_start .. support_start + probs.size() - 1, where support_start
// is the hop count. tail_bound upper-bounds the mass beyond the last entry.
// link_thetas keeps the per-link parameters the pmf was built from (used for
// rigorous tail bounds downstream).
struct DelayPmf {
  int support_start = 0;
  std::vector<double> probs;
  double tail_bound = 0.0;
  std::vector<double> link_thetas;

  int k_max() const {
    return support_start + static_cast<int>(probs.size()) - 1;
  }
  double prob(int k) const {
    int idx = k - support_start;
    if (idx < 0 || idx >= static_cast<int>(probs.size())) return 0.0;
    return probs[static_cast<std::size_t>(idx)];
  }
};

// Distribution of a sum of independent geometrics. Dispatches to the
// partial-fraction closed form when all theta are pairwise distinct (gap
// greater than 1e-9) and to exact iterated convolution otherwise.
DelayPmf path_delay_pmf(const std::vector<double>& thetas, int k_max);

// Adaptive truncation point: the smallest k_max whose negative-binomial
// survival bound (all links slowed to the path's theta_min) drops below eps.
int pmf_kmax_for_tail(const std::vector<double>& thetas, double tail_eps);

DelayPmf path_delay_pmf_auto(const std::vector<double>& thetas,
                             double tail_eps = 1e-10);

// Individual branches, exposed so they can be cross-checked against each
// other and against independent oracles.
DelayPmf path_delay_pmf_closed_form(const std::vector<double>& thetas, int k_max);
DelayPmf path_delay_pmf_convolution(const std::vector<double>& thetas, int k_max);

// P(sum of h geometrics(theta) > trials): the survival function used for the
// truncation bound above.
double negbin_survival(int trials, int successes_needed, double theta);

struct KlSum {
  double value = 0.0;       // truncated sum of p(k) * log(p(k)/q(k))
  double tail_error = 0.0;  // upper bound on the magnitude of dropped terms
};

// KL information number between two path delay distributions sharing a
// support start, truncated to the pmfs' common support.
KlSum path_kl_information(const DelayPmf& p, const DelayPmf& q);

}  // namespace georoute
