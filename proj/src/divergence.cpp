#include "georoute/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "georoute/errors.hpp"

namespace georoute {

namespace {

void check_prob(double x, const char* what) {
  if (std::isnan(x) || x < 0.0 || x > 1.0)
    throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

double min_theta(const std::vector<double>& thetas) {
  double m = 1.0;
  for (double t : thetas) m = std::min(m, t);
  return m;
}

void check_thetas(const std::vector<double>& thetas) {
  if (thetas.empty()) throw std::invalid_argument("empty theta vector");
  for (double t : thetas) {
    if (!(t > 0.0) || t > 1.0)
      throw std::domain_error("path theta entries must lie in (0,1]");
  }
}

// Kahan-compensated accumulation; the pmf mass identity is tested to 1e-12.
struct Accumulator {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

double kl_bernoulli(double u, double v) {
  check_prob(u, "u");
  check_prob(v, "v");
  double out = 0.0;
  if (u > 0.0) {
    if (v <= 0.0) throw std::domain_error("KL(u, 0) is infinite for u > 0");
    out += u * std::log(u / v);
  }
  if (u < 1.0) {
    if (v >= 1.0) throw std::domain_error("KL(u, 1) is infinite for u < 1");
    out += (1.0 - u) * std::log((1.0 - u) / (1.0 - v));
  }
  return std::max(out, 0.0);
}

double klg(double u, double v) {
  if (!(u > 0.0) || u > 1.0) throw std::domain_error("KLG needs u in (0,1]");
  if (!(v > 0.0) || v > 1.0) throw std::domain_error("KLG needs v in (0,1]");
  return kl_bernoulli(u, v) / u;
}

double negbin_survival(int trials, int successes_needed, double theta) {
  // P(fewer than h successes in `trials` Bernoulli(theta) attempts).
  if (theta >= 1.0) return trials >= successes_needed ? 0.0 : 1.0;
  if (trials < successes_needed) return 1.0;
  double log_q = std::log1p(-theta);
  double log_p = std::log(theta);
  double total = 0.0;
  for (int j = 0; j < successes_needed; ++j) {
    double log_term = std::lgamma(trials + 1.0) - std::lgamma(j + 1.0) -
                      std::lgamma(trials - j + 1.0) + j * log_p +
                      (trials - j) * log_q;
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

int pmf_kmax_for_tail(const std::vector<double>& thetas, double tail_eps) {
  check_thetas(thetas);
  if (!(tail_eps > 0.0)) throw std::invalid_argument("tail_eps must be > 0");
  const int h = static_cast<int>(thetas.size());
  const double tmin = min_theta(thetas);
  int lo = h;
  int hi = h;
  while (negbin_survival(hi, h, tmin) > tail_eps) {
    lo = hi;
    hi *= 2;
    if (hi > (1 << 26)) throw NoConvergenceError("pmf truncation point too large");
  }
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (negbin_survival(mid, h, tmin) > tail_eps)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

DelayPmf path_delay_pmf_closed_form(const std::vector<double>& thetas, int k_max) {
  check_thetas(thetas);
  const int h = static_cast<int>(thetas.size());
  if (k_max < h) throw std::invalid_argument("k_max below the path hop count");

  const std::size_t m = thetas.size();
  std::vector<double> weight(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      double gap = thetas[j] - thetas[i];
      if (gap == 0.0)
        throw std::domain_error("closed form needs pairwise distinct thetas");
      weight[i] *= thetas[j] / gap;
    }
  }

  DelayPmf pmf;
  pmf.support_start = h;
  pmf.link_thetas = thetas;
  pmf.probs.assign(static_cast<std::size_t>(k_max - h + 1), 0.0);
  // pow_i tracks theta_i (1-theta_i)^(k-1) across k.
  std::vector<double> pow(m);
  for (std::size_t i = 0; i < m; ++i)
    pow[i] = thetas[i] * std::pow(1.0 - thetas[i], h - 1);
  Accumulator mass;
  for (int k = h; k <= k_max; ++k) {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) v += weight[i] * pow[i];
    // Cancellation can leave a tiny negative residue below the support edge.
    v = std::max(v, 0.0);
    pmf.probs[static_cast<std::size_t>(k - h)] = v;
    mass.add(v);
    for (std::size_t i = 0; i < m; ++i) pow[i] *= 1.0 - thetas[i];
  }
  pmf.tail_bound = std::max(0.0, 1.0 - mass.sum);
  return pmf;
}

DelayPmf path_delay_pmf_convolution(const std::vector<double>& thetas, int k_max) {
  check_thetas(thetas);
  const int h = static_cast<int>(thetas.size());
  if (k_max < h) throw std::invalid_argument("k_max below the path hop count");

  // Iterated convolution with a geometric leg via the exact recurrence
  //   r(k) = (1-theta) r(k-1) + theta f(k-1),
  // which keeps every entry up to k_max exact (no mass leaks into [h, k_max]).
  std::vector<double> cur(static_cast<std::size_t>(k_max), 0.0);  // k = 1..k_max
  double q0 = 1.0 - thetas[0];
  double p = thetas[0];
  for (int k = 1; k <= k_max; ++k) {
    cur[static_cast<std::size_t>(k - 1)] = p;
    p *= q0;
  }
  for (std::size_t li = 1; li < thetas.size(); ++li) {
    double th = thetas[li];
    std::vector<double> next(static_cast<std::size_t>(k_max), 0.0);
    int lo = static_cast<int>(li) + 1;  // support start after li+1 legs
    for (int k = lo; k <= k_max; ++k) {
      double prev = (k - 1 >= lo) ? next[static_cast<std::size_t>(k - 2)] : 0.0;
      next[static_cast<std::size_t>(k - 1)] =
          (1.0 - th) * prev + th * cur[static_cast<std::size_t>(k - 2)];
    }
    cur.swap(next);
  }

  DelayPmf pmf;
  pmf.support_start = h;
  pmf.link_thetas = thetas;
  pmf.probs.assign(cur.begin() + (h - 1), cur.end());
  Accumulator mass;
  for (double v : pmf.probs) mass.add(v);
  pmf.tail_bound = std::max(0.0, 1.0 - mass.sum);
  return pmf;
}

DelayPmf path_delay_pmf(const std::vector<double>& thetas, int k_max) {
  check_thetas(thetas);
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t j = i + 1; j < thetas.size(); ++j)
      min_gap = std::min(min_gap, std::abs(thetas[i] - thetas[j]));
  if (thetas.size() >= 2 && min_gap <= 1e-9)
    return path_delay_pmf_convolution(thetas, k_max);
  return path_delay_pmf_closed_form(thetas, k_max);
}

DelayPmf path_delay_pmf_auto(const std::vector<double>& thetas, double tail_eps) {
  return path_delay_pmf(thetas, pmf_kmax_for_tail(thetas, tail_eps));
}

KlSum path_kl_information(const DelayPmf& p, const DelayPmf& q) {
  if (p.support_start != q.support_start)
    throw SupportMismatchError("pmf support starts differ");
  if (q.k_max() < p.k_max())
    throw SupportMismatchError("q pmf truncated before p pmf");

  // A computed zero in q is representation underflow whenever q has any
  // non-deterministic leg (its true pmf is positive on the whole support);
  // the sum is cut there and the remainder folded into the tail bound.
  bool q_can_vanish = !q.link_thetas.empty();
  for (double t : q.link_thetas)
    if (t < 1.0) q_can_vanish = false;

  KlSum out;
  Accumulator acc;
  int cutoff = p.k_max();  // last term actually summed
  for (int k = p.support_start; k <= p.k_max(); ++k) {
    double pk = p.prob(k);
    if (pk <= 0.0) continue;
    double qk = q.prob(k);
    if (qk < 2.3e-308) {  // below normal range: underflow, or a genuine zero
      if (qk <= 0.0 &&
          (q_can_vanish || (q.link_thetas.empty() && pk > 1e-250)))
        throw std::domain_error("q pmf vanishes inside p's support");
      cutoff = k - 1;
      break;
    }
    acc.add(pk * (std::log(pk) - std::log(qk)));
  }
  out.value = acc.sum;

  // Tail bound on the dropped terms. For k > K,
  //   p(k) <= C(k-1,h-1) (prod theta) r^(k-h)        with r = 1 - theta_min,
  //   p(k) >= (prod theta) r^(k-h)                    (one slow-leg composition),
  // and likewise for q, so |log(p/q)| is bounded by an affine function of k.
  const auto& pt = p.link_thetas;
  const auto& qt = q.link_thetas;
  if (!pt.empty() && !qt.empty()) {
    const int h = p.support_start;
    double log_cp = 0.0, log_cq = 0.0;
    for (double t : pt) log_cp += std::log(t);
    for (double t : qt) log_cq += std::log(t);
    double rp = 1.0 - min_theta(pt);
    double rq = 1.0 - min_theta(qt);
    double a = -log_cp - log_cq;
    double b = (rp > 0.0 ? -std::log(rp) : 0.0) + (rq > 0.0 ? -std::log(rq) : 0.0);
    if (rp <= 0.0) {
      out.tail_error = 0.0;  // deterministic p path: no mass beyond h
      return out;
    }
    const int k0 = cutoff + 1;
    // term(k) = C(k-1,h-1) exp(log_cp) rp^(k-h); advance by the exact ratio.
    double log_term = std::lgamma(k0) - std::lgamma(static_cast<double>(h)) -
                      std::lgamma(k0 - h + 1.0) + log_cp +
                      (k0 - h) * std::log(rp);
    double term = std::exp(log_term);
    double total = 0.0;
    int k = k0;
    while (term > 0.0 && k < k0 + 200000) {
      double add = term * (a + b * (k - h));
      total += add;
      if (add < 1e-6 * total && k > k0 + 16) break;
      term *= rp * static_cast<double>(k) / static_cast<double>(k - h + 1);
      ++k;
    }
    out.tail_error = total;
  }
  return out;
}

}  // namespace georoute
