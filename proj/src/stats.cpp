#include "georoute/stats.hpp"

#include <stdexcept>

namespace georoute {

void LinkStats::update_semibandit(const DelayFeedback& feedback) {
  if (feedback.kind != FeedbackKind::semibandit)
    throw std::invalid_argument(
        "semi-bandit update requires per-link feedback, got bandit");
  for (const auto& [id, delay] : feedback.per_link) {
    if (delay == 0) throw std::invalid_argument("link delay must be >= 1");
    s_[static_cast<std::size_t>(id)] += 1;
    t_[static_cast<std::size_t>(id)] += delay;
  }
}

}  // namespace georoute
