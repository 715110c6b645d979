#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "georoute/graph.hpp"
#include "georoute/rng.hpp"

namespace georoute {

// Ground-truth per-link Bernoulli success probabilities.
class LinkParams {
 public:
  explicit LinkParams(std::vector<double> theta);

  const std::vector<double>& theta() const { return theta_; }
  double theta(LinkId id) const { return theta_[static_cast<std::size_t>(id)]; }
  double theta_min() const { return theta_min_; }
  std::size_t size() const { return theta_.size(); }

  // Expected per-link delays 1/theta_i, the oracle's weight vector.
  WeightVector expected_delays() const;

 private:
  std::vector<double> theta_;
  double theta_min_;
};

enum class FeedbackKind { bandit, semibandit };

// What the source observes for one routed packet: the end-to-end total, and
// under semi-bandit feedback also the per-link delays of the routed path.
struct DelayFeedback {
  FeedbackKind kind = FeedbackKind::semibandit;
  std::uint64_t total = 0;
  std::vector<std::pair<LinkId, std::uint64_t>> per_link;  // empty for bandit
};

// One draw from the geometric delay of a link: k >= 1 with probability
// theta * (1-theta)^(k-1). Inverse-CDF, exact; theta == 1 always returns 1.
std::uint64_t sample_link_delay(double theta_i, RngStream& rng);

// Routes one packet along the path under source routing: one geometric draw
// per link. The rng consumption is identical for both feedback kinds.
DelayFeedback route_packet_source(const Path& path, const LinkParams& params,
                                  RngStream& rng, FeedbackKind kind);

// One transmission attempt on a link; one call consumes one time slot.
bool attempt_transmission(LinkId link, const LinkParams& params, RngStream& rng);

}  // namespace georoute
