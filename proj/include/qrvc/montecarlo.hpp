#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qrvc/field.hpp"
#include "qrvc/shatter.hpp"

namespace qrvc {

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Seedable mt19937_64 with bounded sampling that does not depend on the
/// standard library's distribution implementations, so streams are identical
/// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// Uniform n-subset of {0, ..., q - 1} by a partial Fisher-Yates shuffle
/// whose swaps are tracked sparsely.
Subset sample_subset(Elem q, int n, Rng& rng);

struct ProbPoint {
  Elem q = 0;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double ratio = 0.0;
  double p_hat = 0.0;
  std::uint64_t seed = 0;
  ZeroConvention convention = ZeroConvention::ZeroIn;
};

/// Seed for trial i of the point (q, n); depends on nothing else, so results
/// are independent of job count.
std::uint64_t trial_seed(std::uint64_t seed, Elem q, int n, std::uint64_t trial);

/// Fraction of `trials` uniform n-subsets of F_q shattered by the quadratic
/// residues under `convention`.
ProbPoint estimate_p(std::uint64_t q, int n, std::uint64_t trials, std::uint64_t seed, ZeroConvention convention,
                     int jobs = 1);
ProbPoint estimate_p(const ResidueTable& table, int n, std::uint64_t trials, std::uint64_t seed, int jobs = 1);

struct ScanOptions {
  double ratio_lo = 0.7;
  double ratio_hi = 0.85;
  /// Expected number of primes kept per scan.
  double density = 100.0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  int jobs = 1;
};

/// Inclusive prime window [2^(n / ratio_hi), 2^(n / ratio_lo)], rounded inward.
std::pair<std::uint64_t, std::uint64_t> scan_window(int n, double ratio_lo, double ratio_hi);

/// Primes of the window kept by seeded thinning.
std::vector<std::uint64_t> scan_primes(int n, const ScanOptions& options);

/// One ProbPoint per kept prime, ascending in q.
std::vector<ProbPoint> interface_scan(int n, const ScanOptions& options);

}  // namespace qrvc
