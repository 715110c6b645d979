#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "georoute/env.hpp"
#include "georoute/graph.hpp"
#include "georoute/rng.hpp"

using namespace georoute;

namespace {

// Wilson-Hilferty approximation of the chi-square quantile, good to a few
// tenths over the df range used here.
double chi2_quantile(double df, double z) {
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

}  // namespace

TEST_CASE("theta one is deterministic delay one") {
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_link_delay(1.0, rng) == 1);
}

TEST_CASE("theta outside (0,1] is rejected") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(sample_link_delay(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_link_delay(-0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_link_delay(1.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(LinkParams({0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("geometric sample mean: theta 0.5 over 1e6 draws within 3 sigma of 2") {
  RngStream rng(42, 1);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_link_delay(0.5, rng));
  double mean = sum / n;
  // Var = (1-theta)/theta^2 = 2, sigma of the mean = sqrt(2/n)
  double sigma = std::sqrt(2.0 / n);
  CHECK(std::abs(mean - 2.0) < 3.0 * sigma);
}

TEST_CASE("geometric pmf: theta 0.25 head probabilities within 3 sigma") {
  RngStream rng(43, 2);
  const int n = 1000000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t k = sample_link_delay(0.25, rng);
    if (k <= 5) ++counts[static_cast<std::size_t>(k)];
  }
  for (int k = 1; k <= 5; ++k) {
    double p = 0.25 * std::pow(0.75, k - 1);
    double sigma = std::sqrt(p * (1.0 - p) / n);
    double phat = static_cast<double>(counts[static_cast<std::size_t>(k)]) / n;
    CHECK(std::abs(phat - p) < 3.0 * sigma);
  }
}

TEST_CASE("chi-square goodness of fit at p > 0.001 on 1e5 draws") {
  RngStream rng(44, 3);
  const int n = 100000;
  const double theta = 0.3;
  // Bins 1..K with expected count >= 5, plus a tail bin.
  int k_bins = 1;
  while (n * theta * std::pow(1.0 - theta, k_bins) >= 5.0) ++k_bins;
  std::vector<double> observed(static_cast<std::size_t>(k_bins) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    std::uint64_t k = sample_link_delay(theta, rng);
    std::size_t bin = k <= static_cast<std::uint64_t>(k_bins)
                          ? static_cast<std::size_t>(k - 1)
                          : static_cast<std::size_t>(k_bins);
    observed[bin] += 1.0;
  }
  double stat = 0.0;
  double tail = 1.0;
  for (int k = 1; k <= k_bins; ++k) {
    double p = theta * std::pow(1.0 - theta, k - 1);
    tail -= p;
    double expd = n * p;
    double d = observed[static_cast<std::size_t>(k - 1)] - expd;
    stat += d * d / expd;
  }
  double expd = n * tail;
  double d = observed[static_cast<std::size_t>(k_bins)] - expd;
  stat += d * d / expd;
  // p > 0.001 <=> statistic below the 99.9% quantile at k_bins dof.
  CHECK(stat < chi2_quantile(static_cast<double>(k_bins), 3.0902));
}

TEST_CASE("deterministic 3-hop path gives bandit total 3") {
  auto topo = make_line_network(3, 1);
  auto paths = enumerate_paths(topo, 10);
  LinkParams params({1.0, 1.0, 1.0});
  RngStream rng(1, 4);
  DelayFeedback fb =
      route_packet_source(paths[0], params, rng, FeedbackKind::bandit);
  CHECK(fb.kind == FeedbackKind::bandit);
  CHECK(fb.total == 3);
  CHECK(fb.per_link.empty());
}

TEST_CASE("semibandit sum equals bandit total for the same stream") {
  auto topo = make_line_network(2, 2);
  auto paths = enumerate_paths(topo, 10);
  LinkParams params({0.5, 0.9, 0.25, 0.7});
  for (std::uint64_t s = 0; s < 20; ++s) {
    RngStream a(s, 5);
    RngStream b(s, 5);
    DelayFeedback semi =
        route_packet_source(paths[0], params, a, FeedbackKind::semibandit);
    DelayFeedback bandit =
        route_packet_source(paths[0], params, b, FeedbackKind::bandit);
    CHECK(semi.total == bandit.total);
    std::uint64_t sum = 0;
    for (auto& [id, d] : semi.per_link) {
      CHECK(d >= 1);
      sum += d;
    }
    CHECK(sum == semi.total);
    CHECK(semi.per_link.size() == 2);
    CHECK(semi.total >= 2);  // at least one slot per hop
  }
}

TEST_CASE("two-link path mean delay within 3 sigma of 6") {
  auto topo = make_line_network(2, 1);
  auto paths = enumerate_paths(topo, 10);
  LinkParams params({0.5, 0.25});
  RngStream rng(7, 6);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += static_cast<double>(
        route_packet_source(paths[0], params, rng, FeedbackKind::bandit).total);
  // Var = 2 + 12 = 14
  double sigma = std::sqrt(14.0 / n);
  CHECK(std::abs(sum / n - 6.0) < 3.0 * sigma);
}

TEST_CASE("attempt_transmission success rate within 3 sigma") {
  LinkParams params({0.3, 1.0});
  RngStream rng(21, 7);
  const int n = 1000000;
  int ok = 0;
  for (int i = 0; i < n; ++i)
    if (attempt_transmission(0, params, rng)) ++ok;
  double sigma = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(static_cast<double>(ok) / n - 0.3) < 3.0 * sigma);
  for (int i = 0; i < 100; ++i) CHECK(attempt_transmission(1, params, rng));
}

TEST_CASE("identical seed and stream reproduce feedback bit-exactly") {
  auto topo = make_line_network(2, 2);
  auto paths = enumerate_paths(topo, 10);
  LinkParams params({0.4, 0.8, 0.3, 0.6});
  auto record = [&](std::uint64_t seed) {
    RngStream rng(seed, 9);
    std::vector<std::uint64_t> totals;
    for (int i = 0; i < 200; ++i)
      totals.push_back(route_packet_source(paths[i % 4], params, rng,
                                           FeedbackKind::semibandit)
                           .total);
    return totals;
  };
  CHECK(record(5) == record(5));
  CHECK(record(5) != record(6));
}

TEST_CASE("derived streams are insensitive to unrelated scope additions") {
  RngStream a = derive_stream(10, "env:klsr", 3);
  RngStream b = derive_stream(10, "env:klsr", 3);
  RngStream c = derive_stream(10, "env:cucb", 3);
  auto seq_a = std::vector<std::uint64_t>{a.next_u64(), a.next_u64()};
  auto seq_b = std::vector<std::uint64_t>{b.next_u64(), b.next_u64()};
  auto seq_c = std::vector<std::uint64_t>{c.next_u64(), c.next_u64()};
  CHECK(seq_a == seq_b);
  CHECK(seq_a != seq_c);
}
