#include "qrvc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace qrvc {

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix_seed(seed);
  for (auto k : keys) h = mix_seed(h ^ mix_seed(k));
  return h;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v >= limit);
  return v % bound;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Subset sample_subset(Elem q, int n, Rng& rng) {
  if (n < 0 || static_cast<Elem>(n) > q) throw Error(ErrorCode::InvalidArgument, "subset size out of range");
  // Positions of the virtual array {0, ..., q-1} that differ from identity.
  std::vector<std::pair<Elem, Elem>> moved;
  auto value_at = [&](Elem i) {
    for (const auto& [pos, val] : moved) {
      if (pos == i) return val;
    }
    return i;
  };
  auto assign = [&](Elem i, Elem v) {
    for (auto& [pos, val] : moved) {
      if (pos == i) {
        val = v;
        return;
      }
    }
    moved.emplace_back(i, v);
  };
  std::vector<Elem> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Elem i = 0; i < static_cast<Elem>(n); ++i) {
    const Elem j = i + static_cast<Elem>(rng.below(q - i));
    const Elem vi = value_at(i);
    const Elem vj = value_at(j);
    out.push_back(vj);
    assign(j, vi);
    assign(i, vj);
  }
  return Subset(q, std::move(out));
}

std::uint64_t trial_seed(std::uint64_t seed, Elem q, int n, std::uint64_t trial) {
  return derive_seed(seed, {q, static_cast<std::uint64_t>(n), trial});
}

namespace {

// Shattering test that builds row signatures translate by translate and stops
// once every pattern has appeared.
class Probe {
 public:
  explicit Probe(const ResidueTable& table) : table_(table) {}

  bool shattered(const Subset& y) {
    const Elem q = table_.q;
    const int n = y.size();
    const bool strict = table_.convention == ZeroConvention::Strict;
    const std::uint64_t allowed = q - (strict ? static_cast<Elem>(n) : 0);
    if ((std::uint64_t{1} << n) > allowed) return false;
    seen_.assign(std::size_t{1} << n, 0);
    std::uint64_t remaining = std::uint64_t{1} << n;
    const auto elems = y.elems();
    for (Elem x = 0; x < q; ++x) {
      if (strict && y.contains(x)) continue;
      std::uint64_t sig = 0;
      for (int i = 0; i < n; ++i) {
        const Elem y_i = elems[static_cast<std::size_t>(i)];
        sig |= std::uint64_t{table_.member[y_i >= x ? y_i - x : y_i + q - x]} << i;
      }
      if (!seen_[sig]) {
        seen_[sig] = 1;
        if (--remaining == 0) return true;
      }
    }
    return false;
  }

 private:
  const ResidueTable& table_;
  std::vector<std::uint8_t> seen_;
};

void check_point_args(int n, std::uint64_t trials) {
  if (n < 2 || n > kMaxSubsetSize) throw Error(ErrorCode::InvalidArgument, "n must lie in [2, 63]");
  if (n > 30) throw Error(ErrorCode::NTooLarge, "2^" + std::to_string(n) + " patterns do not fit in memory");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be positive");
}

}  // namespace

ProbPoint estimate_p(const ResidueTable& table, int n, std::uint64_t trials, std::uint64_t seed, int jobs) {
  check_point_args(n, trials);
  const Elem q = table.q;
  const int workers = static_cast<int>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(jobs, 1)), 1, trials));
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(workers), 0);
  auto work = [&](int id) {
    Probe probe(table);
    for (std::uint64_t i = static_cast<std::uint64_t>(id); i < trials; i += static_cast<std::uint64_t>(workers)) {
      Rng rng(trial_seed(seed, q, n, i));
      if (static_cast<Elem>(n) <= q && probe.shattered(sample_subset(q, n, rng))) ++hits[static_cast<std::size_t>(id)];
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int i = 0; i < workers; ++i) threads.emplace_back(work, i);
  }

  ProbPoint point;
  point.q = q;
  point.n = n;
  point.trials = trials;
  for (auto h : hits) point.hits += h;
  point.ratio = n / std::log2(static_cast<double>(q));
  point.p_hat = static_cast<double>(point.hits) / static_cast<double>(trials);
  point.seed = seed;
  point.convention = table.convention;
  return point;
}

ProbPoint estimate_p(std::uint64_t q, int n, std::uint64_t trials, std::uint64_t seed, ZeroConvention convention,
                     int jobs) {
  check_point_args(n, trials);
  const auto field = make_field(q);
  return estimate_p(squares(field, convention), n, trials, seed, jobs);
}

std::pair<std::uint64_t, std::uint64_t> scan_window(int n, double ratio_lo, double ratio_hi) {
  if (!(ratio_lo > 0.0) || ratio_lo > ratio_hi) throw Error(ErrorCode::InvalidArgument, "need 0 < ratio_lo <= ratio_hi");
  const auto lo = static_cast<std::uint64_t>(std::ceil(std::exp2(n / ratio_hi)));
  const auto hi = static_cast<std::uint64_t>(std::floor(std::exp2(n / ratio_lo)));
  return {lo, hi};
}

std::vector<std::uint64_t> scan_primes(int n, const ScanOptions& options) {
  std::vector<std::uint64_t> kept;
  if (options.density <= 0.0) return kept;
  const auto [lo, hi] = scan_window(n, options.ratio_lo, options.ratio_hi);
  auto primes = primes_in(std::max<std::uint64_t>(lo, 5), hi);
  if (primes.empty()) return kept;
  const double keep = std::min(1.0, options.density / static_cast<double>(primes.size()));
  Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(n), 0x5CA9ULL}));
  for (auto q : primes) {
    if (rng.unit() < keep) kept.push_back(q);
  }
  return kept;
}

std::vector<ProbPoint> interface_scan(int n, const ScanOptions& options) {
  std::vector<ProbPoint> points;
  for (auto q : scan_primes(n, options)) {
    points.push_back(estimate_p(q, n, options.trials, options.seed, options.convention, options.jobs));
  }
  return points;
}

}  // namespace qrvc
