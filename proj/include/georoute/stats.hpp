#pragma once

#include <cstdint>
#include <vector>

#include "georoute/env.hpp"
#include "georoute/graph.hpp"

namespace georoute {

// Packet-resolution counters for source routing: s_i packets routed through
// link i, t_i total transmission attempts (the summed realized delays).
// Estimates are always recomputed from the exact integer counters.
class LinkStats {
 public:
  explicit LinkStats(std::size_t num_links) : s_(num_links, 0), t_(num_links, 0) {}

  std::size_t size() const { return s_.size(); }
  std::uint64_t packets(LinkId id) const { return s_[static_cast<std::size_t>(id)]; }
  std::uint64_t attempts(LinkId id) const { return t_[static_cast<std::size_t>(id)]; }

  // s_i / t_i, or 0 for a link that has never carried a packet.
  double theta_hat(LinkId id) const {
    std::uint64_t t = t_[static_cast<std::size_t>(id)];
    if (t == 0) return 0.0;
    return static_cast<double>(s_[static_cast<std::size_t>(id)]) /
           static_cast<double>(t);
  }

  // Applies one packet's semi-bandit feedback: s_i += 1 and t_i += delay for
  // every link the packet traversed. Bandit feedback is rejected.
  void update_semibandit(const DelayFeedback& feedback);

 private:
  std::vector<std::uint64_t> s_;
  std::vector<std::uint64_t> t_;
};

// Slot-resolution counters for hop-by-hop routing: t'_i attempts up to the
// current slot, s_i successful transmissions (packets that crossed link i).
class SlotStats {
 public:
  explicit SlotStats(std::size_t num_links)
      : s_(num_links, 0), t_prime_(num_links, 0) {}

  std::size_t size() const { return s_.size(); }
  std::uint64_t packets(LinkId id) const { return s_[static_cast<std::size_t>(id)]; }
  std::uint64_t attempts(LinkId id) const {
    return t_prime_[static_cast<std::size_t>(id)];
  }

  double theta_tilde(LinkId id) const {
    std::uint64_t t = t_prime_[static_cast<std::size_t>(id)];
    if (t == 0) return 0.0;
    return static_cast<double>(s_[static_cast<std::size_t>(id)]) /
           static_cast<double>(t);
  }

  void update_slot(LinkId id, bool success) {
    ++t_prime_[static_cast<std::size_t>(id)];
    if (success) ++s_[static_cast<std::size_t>(id)];
  }

 private:
  std::vector<std::uint64_t> s_;
  std::vector<std::uint64_t> t_prime_;
};

}  // namespace georoute
