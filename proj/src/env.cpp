#include "georoute/env.hpp"

#include <cmath>
#include <stdexcept>

namespace georoute {

LinkParams::LinkParams(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) throw std::invalid_argument("empty theta vector");
  theta_min_ = 1.0;
  for (double t : theta_) {
    if (!(t > 0.0) || t > 1.0)
      throw std::invalid_argument("theta entries must lie in (0,1]");
    if (t < theta_min_) theta_min_ = t;
  }
}

WeightVector LinkParams::expected_delays() const {
  WeightVector w(theta_.size());
  for (std::size_t i = 0; i < theta_.size(); ++i) w[i] = 1.0 / theta_[i];
  return w;
}

std::uint64_t sample_link_delay(double theta_i, RngStream& rng) {
  if (!(theta_i > 0.0) || theta_i > 1.0)
    throw std::invalid_argument("theta must lie in (0,1]");
  double u = rng.uniform01();
  if (theta_i == 1.0) return 1;
  double k = std::ceil(std::log(u) / std::log1p(-theta_i));
  if (k < 1.0) return 1;  // u rounded up to 1 is impossible, keep the floor
  return static_cast<std::uint64_t>(k);
}

DelayFeedback route_packet_source(const Path& path, const LinkParams& params,
                                  RngStream& rng, FeedbackKind kind) {
  DelayFeedback fb;
  fb.kind = kind;
  if (kind == FeedbackKind::semibandit) fb.per_link.reserve(path.links.size());
  for (LinkId id : path.links) {
    std::uint64_t d = sample_link_delay(params.theta(id), rng);
    fb.total += d;
    if (kind == FeedbackKind::semibandit) fb.per_link.emplace_back(id, d);
  }
  return fb;
}

bool attempt_transmission(LinkId link, const LinkParams& params, RngStream& rng) {
  return rng.uniform01() < params.theta(link);
}

}  // namespace georoute
