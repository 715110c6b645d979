#pragma once

#include <cstdint>
#include <vector>

#include "georoute/graph.hpp"
#include "georoute/stats.hpp"

namespace georoute {

// Exploration schedules. The log(log n) term is taken as 0 for n < 3; the
// schedules are asymptotic and early rounds are covered by initialization.
double schedule_f1(std::uint64_t n, int max_hops);  // log n + 4 H loglog n
double schedule_f2(std::uint64_t n);                // log n + 3 loglog n

// Explicit path index:
//   c_p(n) = sum_{i in p} 1/theta_hat_i
//          - sqrt(f1(n)/2 * sum_{i in p} 1/(s_i theta_hat_i^3)).
// Throws UnexploredLinkError if any link of the path has s_i == 0.
double index_c(const Path& path, const LinkStats& stats, std::uint64_t n,
               int max_hops);

struct BIndex {
  double value = 0.0;
  double lambda_star = 0.0;      // 0 when the constraint is inactive
  std::vector<double> u_star;    // per path link, optimistic success probs
  double residual = 0.0;         // |sum_i t_i KL(theta_hat_i, u*_i) - f1(n)|
};

// Optimistic path index b_p(n): the minimum of sum_{i in p} 1/u_i over
// success probabilities u within the KL confidence region
// sum_{i in p} t_i KL(theta_hat_i, u_i) <= f1(n). Solved by a line search on
// the scalarized optimality condition; u*_i = g(lambda*, theta_hat_i, t_i).
BIndex index_b(const Path& path, const LinkStats& stats, std::uint64_t n,
               int max_hops);

// Stationary-point map of the b index program (exposed for tests).
double b_index_g(double lambda, double theta_hat, double attempts);

// Scalar KL-UCB program shared by the omega and b indexes: the largest
// q >= theta_hat with t KL(theta_hat, q) <= budget, found by bisection to
// absolute tolerance 1e-10 in q. Returns 1/q.
double kl_ucb_reciprocal(double theta_hat, std::uint64_t t, double budget);

// Edge index omega_i(n) = min{ 1/q : t_i(n) KL(theta_hat_i(n), q) <= f2(n) }.
double index_omega(LinkId link, const LinkStats& stats, std::uint64_t n);

// Slot-resolution variant used by hop-by-hop routing; `schedule_arg` is the
// packet number n(tau) (or the slot when slot-based scheduling is chosen).
double index_omega_slot(LinkId link, const SlotStats& stats,
                        std::uint64_t schedule_arg);

// CUCB per-link cost 1/min(1, theta_hat + sqrt(1.5 log n / t)). The clamp
// keeps link costs >= 1 slot; pass clamp = false for the literal form.
double index_cucb(LinkId link, const LinkStats& stats, std::uint64_t n,
                  bool clamp = true);

}  // namespace georoute
