#include "georoute/indexes.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "georoute/divergence.hpp"
#include "georoute/errors.hpp"

namespace georoute {

namespace {

double loglog_or_zero(std::uint64_t n) {
  if (n < 3) return 0.0;
  return std::log(std::log(static_cast<double>(n)));
}

[[noreturn]] void throw_unexplored(LinkId id) {
  throw UnexploredLinkError("link " + std::to_string(id) +
                            " has no observations");
}

}  // namespace

double schedule_f1(std::uint64_t n, int max_hops) {
  if (n < 1) throw std::invalid_argument("round must be >= 1");
  return std::log(static_cast<double>(n)) + 4.0 * max_hops * loglog_or_zero(n);
}

double schedule_f2(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("round must be >= 1");
  return std::log(static_cast<double>(n)) + 3.0 * loglog_or_zero(n);
}

double index_c(const Path& path, const LinkStats& stats, std::uint64_t n,
               int max_hops) {
  double mean = 0.0;
  double radius2 = 0.0;
  for (LinkId id : path.links) {
    std::uint64_t s = stats.packets(id);
    if (s == 0) throw_unexplored(id);
    double th = stats.theta_hat(id);
    mean += 1.0 / th;
    radius2 += 1.0 / (static_cast<double>(s) * th * th * th);
  }
  return mean - std::sqrt(0.5 * schedule_f1(n, max_hops) * radius2);
}

double b_index_g(double lambda, double theta_hat, double attempts) {
  // Root in [theta_hat, 1] of u^2 + u(1/(lambda t) - theta_hat) - 1/(lambda t).
  // Written in its cancellation-free form for either sign of the linear term,
  // and kept strictly below 1 so KL stays finite.
  double a = theta_hat * attempts * lambda - 1.0;
  double disc = std::sqrt(a * a + 4.0 * attempts * lambda);
  double u = (a >= 0.0) ? (a + disc) / (2.0 * lambda * attempts) : 2.0 / (disc - a);
  return std::min(u, std::nextafter(1.0, 0.0));
}

BIndex index_b(const Path& path, const LinkStats& stats, std::uint64_t n,
               int max_hops) {
  BIndex out;
  out.u_star.reserve(path.links.size());

  struct Leg {
    double theta_hat;
    double attempts;
  };
  std::vector<Leg> legs;  // links with theta_hat < 1 (set I)
  for (LinkId id : path.links) {
    if (stats.attempts(id) == 0) throw_unexplored(id);
    double th = stats.theta_hat(id);
    if (th < 1.0)
      legs.push_back({th, static_cast<double>(stats.attempts(id))});
  }

  const double f1 = schedule_f1(n, max_hops);
  if (legs.empty()) {
    // Every link looks deterministic: the optimum is u = 1 on all links.
    out.value = static_cast<double>(path.hops());
    out.u_star.assign(path.links.size(), 1.0);
    return out;
  }
  if (f1 <= 0.0) {
    // No confidence budget: the region collapses to theta_hat.
    double v = 0.0;
    for (LinkId id : path.links) {
      double th = stats.theta_hat(id);
      out.u_star.push_back(th);
      v += 1.0 / th;
    }
    out.value = v;
    return out;
  }

  auto budget_at = [&](double lambda) {
    double acc = 0.0;
    for (const Leg& leg : legs)
      acc += leg.attempts *
             kl_bernoulli(leg.theta_hat,
                          b_index_g(lambda, leg.theta_hat, leg.attempts));
    return acc;
  };

  // The spent budget F(lambda) is monotone in lambda (u* slides from 1 down
  // to theta_hat as lambda grows), so bracket f1 and bisect.
  double lo = 1e-12;
  double hi = 1.0;
  double f_lo = budget_at(lo);
  double f_hi = budget_at(hi);
  int guard = 0;
  while (f_lo < f1 && lo > 1e-300) {
    lo *= 0.5;
    f_lo = budget_at(lo);
    if (++guard > 2000) throw NoConvergenceError("b index bracketing failed");
  }
  guard = 0;
  while (f_hi > f1) {
    hi *= 2.0;
    f_hi = budget_at(hi);
    if (++guard > 2000) throw NoConvergenceError("b index bracketing failed");
  }

  double lambda_star;
  if (f_lo < f1) {
    // The full budget is not spendable at double precision (u* pinned at the
    // largest representable value below 1); the index is ||p||_1 in the limit.
    lambda_star = lo;
  } else {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      double val = budget_at(mid);
      if (val > f1)
        lo = mid;
      else
        hi = mid;
      if ((hi - lo) <= 1e-12 * hi) break;
    }
    lambda_star = 0.5 * (lo + hi);
  }

  out.lambda_star = lambda_star;
  double value = 0.0;
  double spent = 0.0;
  for (LinkId id : path.links) {
    double th = stats.theta_hat(id);
    if (th >= 1.0) {
      out.u_star.push_back(1.0);
      value += 1.0;
      continue;
    }
    double t = static_cast<double>(stats.attempts(id));
    double u = b_index_g(lambda_star, th, t);
    out.u_star.push_back(u);
    value += 1.0 / u;
    spent += t * kl_bernoulli(th, u);
  }
  out.value = value;
  out.residual = std::abs(spent - f1);
  return out;
}

double kl_ucb_reciprocal(double theta_hat, std::uint64_t t, double budget) {
  if (t == 0) throw UnexploredLinkError("no attempts recorded");
  if (theta_hat >= 1.0) return 1.0;  // KL(1, q) = log(1/q) <= budget at q = 1
  if (budget <= 0.0) {
    if (theta_hat <= 0.0)
      return std::numeric_limits<double>::infinity();
    return 1.0 / theta_hat;
  }
  const double td = static_cast<double>(t);
  double lo = theta_hat;
  double hi = 1.0;
  for (int it = 0; it < 48 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (td * kl_bernoulli(theta_hat, mid) <= budget)
      lo = mid;
    else
      hi = mid;
  }
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / lo;
}

double index_omega(LinkId link, const LinkStats& stats, std::uint64_t n) {
  if (stats.attempts(link) == 0) throw_unexplored(link);
  return kl_ucb_reciprocal(stats.theta_hat(link), stats.attempts(link),
                           schedule_f2(n));
}

double index_omega_slot(LinkId link, const SlotStats& stats,
                        std::uint64_t schedule_arg) {
  if (stats.attempts(link) == 0) throw_unexplored(link);
  return kl_ucb_reciprocal(stats.theta_tilde(link), stats.attempts(link),
                           schedule_f2(schedule_arg));
}

double index_cucb(LinkId link, const LinkStats& stats, std::uint64_t n,
                  bool clamp) {
  std::uint64_t t = stats.attempts(link);
  if (t == 0) throw_unexplored(link);
  double bonus =
      std::sqrt(1.5 * std::log(static_cast<double>(n)) / static_cast<double>(t));
  double optimistic = stats.theta_hat(link) + bonus;
  if (clamp) optimistic = std::min(optimistic, 1.0);
  return 1.0 / optimistic;
}

}  // namespace georoute
