#include <doctest.h>

#include <map>

#include "oracles.hpp"
#include "qrvc/montecarlo.hpp"

using namespace qrvc;

TEST_CASE("seed derivation is deterministic and spreads") {
  CHECK(mix_seed(0) != mix_seed(1));
  CHECK(derive_seed(42, {1, 2}) == derive_seed(42, {1, 2}));
  CHECK(derive_seed(42, {1, 2}) != derive_seed(42, {2, 1}));
  CHECK(trial_seed(7, 101, 4, 0) != trial_seed(7, 101, 4, 1));
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.below(17) == b.below(17));
  Rng c(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.unit();
    REQUIRE((u >= 0.0 && u < 1.0));
    REQUIRE(c.below(3) < 3);
  }
}

TEST_CASE("sample_subset is uniform over n-subsets") {
  const unsigned q = 11;
  const int n = 3;
  const std::uint64_t draws = 165 * 200;
  std::map<std::vector<Elem>, std::uint64_t> freq;
  Rng rng(2024);
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto y = sample_subset(q, n, rng);
    REQUIRE(y.size() == n);
    ++freq[{y.elems().begin(), y.elems().end()}];
  }
  CHECK(freq.size() == 165);
  const double expect = static_cast<double>(draws) / 165.0;
  double chi2 = 0;
  for (const auto& [k, v] : freq) chi2 += (v - expect) * (v - expect) / expect;
  // Wilson-Hilferty upper 0.001 quantile for 164 degrees of freedom.
  const double df = 164, z = 3.090;
  const double crit = df * std::pow(1 - 2 / (9 * df) + z * std::sqrt(2 / (9 * df)), 3);
  CHECK(chi2 < crit);
  CHECK(sample_subset(5, 5, rng).size() == 5);
  CHECK_THROWS_AS(sample_subset(5, 6, rng), Error);
}

TEST_CASE("estimate_p degenerate sizes") {
  for (unsigned q : oracle::primes(7, 400)) {
    CHECK(estimate_p(q, 2, 200, 3, ZeroConvention::ZeroIn).p_hat == 1.0);
    CHECK(estimate_p(q, oracle::floor_log2(q) + 1, 50, 3, ZeroConvention::ZeroIn).hits == 0);
  }
  // Under ZeroIn, {0, 2} is not shattered mod 5, so pairs are not all shattered there.
  CHECK(estimate_p(5, 2, 2000, 3, ZeroConvention::ZeroIn).p_hat < 1.0);
  CHECK_THROWS_AS(estimate_p(101, 1, 10, 0, ZeroConvention::ZeroIn), Error);
  CHECK_THROWS_AS(estimate_p(101, 4, 0, 0, ZeroConvention::ZeroIn), Error);
  CHECK_THROWS_AS(estimate_p(101, 31, 10, 0, ZeroConvention::ZeroIn), Error);
  CHECK_THROWS_AS(estimate_p(100, 4, 10, 0, ZeroConvention::ZeroIn), Error);
}

TEST_CASE("estimate_p replays against the oracle") {
  const unsigned q = 101;
  const int n = 4;
  const std::uint64_t seed = 0xC0FFEE;
  const auto member = oracle::squares(q, oracle::Zero::In);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(trial_seed(seed, q, n, i));
    const auto y = sample_subset(q, n, rng);
    if (oracle::shattered({y.elems().begin(), y.elems().end()}, member, false)) ++hits;
  }
  const auto p = estimate_p(q, n, 1000, seed, ZeroConvention::ZeroIn);
  CHECK(p.hits == hits);
  CHECK(p.p_hat == doctest::Approx(hits / 1000.0));
  CHECK(p.seed == seed);
  CHECK(p.ratio == doctest::Approx(4 / std::log2(101.0)));
}

TEST_CASE("estimate_p is reproducible and independent of jobs") {
  for (auto conv : kAllConventions) {
    const auto a = estimate_p(257, 6, 500, 11, conv, 1);
    const auto b = estimate_p(257, 6, 500, 11, conv, 4);
    CHECK(a.hits == b.hits);
    CHECK(a.hits == estimate_p(257, 6, 500, 11, conv, 1).hits);
  }
}

TEST_CASE("estimate_p agrees with exact enumeration") {
  for (unsigned q : oracle::primes(5, 61)) {
    for (auto conv : kAllConventions) {
      const auto member = oracle::squares(q, conv == ZeroConvention::ZeroIn ? oracle::Zero::In : oracle::Zero::Out);
      for (int n = 2; n <= 3; ++n) {
        const double p = oracle::shatter_probability(member, n, conv == ZeroConvention::Strict);
        const std::uint64_t trials = 2000;
        const auto est = estimate_p(q, n, trials, 77, conv);
        const double sigma = std::sqrt(p * (1 - p) / trials);
        CAPTURE(q);
        CAPTURE(n);
        CAPTURE(to_string(conv));
        CHECK(std::abs(est.p_hat - p) <= 4 * sigma + 1e-12);
      }
    }
  }
}

TEST_CASE("scan windows and thinning") {
  const auto [lo5, hi5] = scan_window(5, 0.7, 0.85);
  CHECK(lo5 == 59);   // 2^(5/0.85) = 58.99
  CHECK(hi5 == 141);  // 2^(5/0.7) = 141.32
  const auto [lo12, hi12] = scan_window(12, 0.7, 0.85);
  CHECK(hi12 == 144715);  // 2^(12/0.7) = 144715.22
  CHECK(lo12 == 17777);  // 2^(12/0.85) = 17776.05

  ScanOptions none;
  none.density = 0;
  CHECK(scan_primes(5, none).empty());
  CHECK(interface_scan(5, none).empty());

  ScanOptions all;
  all.density = 1e9;
  std::vector<std::uint64_t> expect;
  for (unsigned p : oracle::primes(59, 141)) expect.push_back(p);
  CHECK(scan_primes(5, all) == expect);

  ScanOptions thin;
  thin.density = 100;
  thin.seed = 42;
  const auto kept = scan_primes(12, thin);
  CHECK(kept == scan_primes(12, thin));
  CHECK(kept.size() > 60);
  CHECK(kept.size() < 140);
  CHECK(std::is_sorted(kept.begin(), kept.end()));
}
