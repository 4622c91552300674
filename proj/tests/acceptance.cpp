// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qrvc/montecarlo.hpp"
#include "qrvc/search.hpp"
#include "qrvc/weil.hpp"

using namespace qrvc;

namespace {

constexpr std::uint64_t kSeed = 20240601;

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. Full sweep 5..300 under ZeroIn: vcdim in {L-1, L}, about 57% at L-1.
Outcome vc_full_sweep() {
  const auto items = vc_sweep(5, 300, {}, EarlyExitPolicy::None, workers());
  int low = 0, bad = 0;
  for (const auto& it : items) {
    const int l = floor_log2(it.q);
    if (!it.result || (it.result->vcdim != l && it.result->vcdim != l - 1)) {
      ++bad;
      continue;
    }
    low += it.result->vcdim == l - 1;
  }
  const double frac = static_cast<double>(low) / static_cast<double>(items.size());
  return {bad == 0 && std::abs(frac - 0.57) <= 0.10,
          std::to_string(items.size()) + " primes, " + std::to_string(bad) + " outside {L-1, L}, " +
              fmt("%.1f%%", 100 * frac) + " at L-1 (target 57 +/- 10)"};
}

// 2. Early exit up to 512 always reaches L-1.
Outcome vc_early_exit() {
  const auto items = vc_sweep(5, 512, {}, EarlyExitPolicy::FloorLog2Minus1, workers());
  int bad = 0;
  for (const auto& it : items) bad += !it.result || it.result->vcdim < floor_log2(it.q) - 1;
  return {bad == 0, std::to_string(items.size()) + " primes, " + std::to_string(bad) + " below L-1"};
}

// 3. Longest shattered progression up to 20000.
Outcome ap_scale() {
  int bad = 0;
  std::vector<double> ratios;
  for (auto q : primes_in(5, 20000)) {
    const auto res = longest_shattered_ap(q, ZeroConvention::ZeroIn);
    const double l2 = std::log2(static_cast<double>(q));
    const int lo = static_cast<int>(std::floor(0.5 * l2)) - 1;
    bad += res.longest < lo || res.longest > floor_log2(q);
    ratios.push_back(res.ratio);
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size();
  const double median = m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  return {bad == 0 && median >= 0.65 && median <= 0.85,
          std::to_string(m) + " primes, " + std::to_string(bad) + " out of range, median ratio " + fmt("%.4f", median)};
}

// 4. Interface at n = 8.
Outcome interface_shape() {
  ScanOptions opts;
  opts.seed = kSeed;
  opts.jobs = workers();
  const auto points = interface_scan(8, opts);
  int low_n = 0, low_bad = 0, high_n = 0, high_bad = 0;
  for (const auto& p : points) {
    if (p.ratio <= 0.72) {
      ++low_n;
      low_bad += !(p.p_hat > 0.5);
    }
    if (p.ratio >= 0.83) {
      ++high_n;
      high_bad += !(p.p_hat < 0.5);
    }
  }
  const bool ok = low_bad <= 0.05 * low_n && high_bad <= 0.05 * high_n && low_n > 0 && high_n > 0;
  return {ok, std::to_string(points.size()) + " primes; ratio<=0.72: " + std::to_string(low_bad) + "/" +
                  std::to_string(low_n) + " with p_hat<=0.5; ratio>=0.83: " + std::to_string(high_bad) + "/" +
                  std::to_string(high_n) + " with p_hat>=0.5"};
}

std::vector<std::pair<Elem, Elem>> small_qr() {
  std::vector<std::pair<Elem, Elem>> out;
  for (auto q : primes_in(3, 101))
    for (Elem r : {2u, 3u})
      if ((q - 1) % r == 0) out.emplace_back(static_cast<Elem>(q), r);
  return out;
}

Outcome report_outcome(const VerifyReport& rep) {
  return {rep.violations() == 0 && rep.instances() > 0,
          std::to_string(rep.instances()) + " instances, " + std::to_string(rep.violations()) + " violations"};
}

// 5. Weil bound, exhaustive n <= 2 and sampled n = 3.
Outcome weil_suite() {
  VerifyReport rep;
  for (auto [q, r] : small_qr()) {
    const auto chi = character_table(make_field(q), r);
    rep.append(verify_weil(chi, 2));
    if (q >= 3) rep.append(verify_weil_sampled(chi, 3, 200, derive_seed(kSeed, {q, r, 5})));
  }
  return report_outcome(rep);
}

// 6. Equidistribution with constant 1.
Outcome equidistribution_suite() {
  VerifyReport rep;
  for (Elem q : {101u, 499u, 997u}) {
    const auto chi = character_table(make_field(q), 2);
    rep.append(verify_equidistribution(chi, 4, 500, derive_seed(kSeed, {q, 6})));
  }
  return report_outcome(rep);
}

// 7. Fuzzy probability equals its character expansion.
Outcome fourier_suite() {
  VerifyReport rep;
  for (auto [q, r] : small_qr()) {
    const auto chi = character_table(make_field(q), r);
    rep.append(verify_fourier_identity(chi, 3, 100, derive_seed(kSeed, {q, r, 7})));
  }
  return report_outcome(rep);
}

// 8. Pruned search equals the naive enumeration; threads do not matter.
Outcome oracle_equivalence() {
  int checked = 0, mismatch = 0;
  std::ostringstream where;
  for (unsigned q : oracle::primes(5, 61)) {
    for (auto conv : kAllConventions) {
      const auto member = oracle::squares(q, conv == ZeroConvention::ZeroIn ? oracle::Zero::In : oracle::Zero::Out);
      const int expect = oracle::vc_dimension(member, conv == ZeroConvention::Strict);
      SearchOptions opts;
      opts.convention = conv;
      const int seq = vc_dimension(q, opts).vcdim;
      opts.jobs = 4;
      const int par = vc_dimension(q, opts).vcdim;
      ++checked;
      if (seq != expect || par != seq) {
        ++mismatch;
        where << " q=" << q << '/' << to_string(conv) << ':' << seq << '/' << par << "!=" << expect;
      }
    }
  }
  return {mismatch == 0, std::to_string(checked) + " (q, convention) pairs, " + std::to_string(mismatch) +
                             " mismatches" + where.str()};
}

// 9. Invariance: translations (all conventions), dilations (Strict); fold.
Outcome invariance_suite() {
  std::uint64_t sets = 0, failures = 0;
  for (unsigned q : oracle::primes(5, 61)) {
    const auto field = make_field(q);
    const int max_n = q <= 31 ? 4 : 3;
    for (auto conv : kAllConventions) {
      const auto table = squares(field, conv);
      for (int n = 1; n <= max_n; ++n) {
        std::vector<unsigned> y{0};
        oracle::for_each_subset(q, 1, n - 1, y, [&](const std::vector<unsigned>& v) {
          const Subset s(q, std::vector<Elem>(v.begin(), v.end()));
          const bool base = is_shattered(s, table);
          ++sets;
          for (Elem b = 1; b < q; ++b) failures += is_shattered(s.translated(b), table) != base;
          if (conv == ZeroConvention::Strict)
            for (Elem a = 2; a < q; ++a) failures += is_shattered(s.dilated(a), table) != base;
        });
      }
    }
  }
  std::uint64_t folds = 0, fold_failures = 0;
  for (auto q : primes_in(5, 101)) {
    const auto field = make_field(q);
    for (auto conv : {ZeroConvention::ZeroIn, ZeroConvention::ZeroOut}) {
      const auto table = squares(field, conv);
      const int top = floor_log2(q);
      auto r = realized_patterns(progression(static_cast<Elem>(q), top), table);
      for (int n = top - 1; n >= 0; --n) {
        r = fold_patterns(r);
        ++folds;
        fold_failures += r.bits != realized_patterns(progression(static_cast<Elem>(q), n), table).bits;
      }
    }
  }
  return {failures == 0 && fold_failures == 0,
          std::to_string(sets) + " base sets, " + std::to_string(failures) + " invariance failures; " +
              std::to_string(folds) + " folds, " + std::to_string(fold_failures) + " mismatches"};
}

// 10. Shattering guarantee for r = 2, epsilon = 0.1 on 100..2000.
Outcome theorem_desk_check() {
  std::uint64_t primes = 0, failed = 0, sets = 0;
  int max_n = 0;
  std::ostringstream where;
  for (auto q : primes_in(100, 2000)) {
    const auto rep = verify_shattering_theorem(make_field(q), 2, 0.1);
    ++primes;
    sets += rep.sets_checked;
    max_n = std::max(max_n, rep.n_star);
    if (!rep.passed) {
      ++failed;
      where << " q=" << q;
    }
  }
  return {failed == 0 && max_n <= 4, std::to_string(primes) + " primes, n* <= " + std::to_string(max_n) + ", " +
                                         std::to_string(sets) + " sets, " + std::to_string(failed) + " failures" +
                                         where.str()};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "vcdim sweep 5..300", vc_full_sweep},
      {2, "early-exit sweep 5..512", vc_early_exit},
      {3, "longest progression to 20000", ap_scale},
      {4, "shattering interface n = 8", interface_shape},
      {5, "Weil bound", weil_suite},
      {6, "equidistribution", equidistribution_suite},
      {7, "character expansion identity", fourier_suite},
      {8, "pruned search vs naive oracle", oracle_equivalence},
      {9, "invariance and fold", invariance_suite},
      {10, "shattering guarantee r = 2", theorem_desk_check},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
