#include "qrvc/weil.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "qrvc/montecarlo.hpp"

namespace qrvc {

namespace {

std::complex<double> from_histogram(const std::vector<std::uint64_t>& hist) {
  const auto r = hist.size();
  std::complex<double> sum{};
  for (std::size_t e = 0; e < r; ++e) sum += static_cast<double>(hist[e]) * root_of_unity(e, r);
  return sum;
}

// Calls fn on every n-subset of {0, ..., q-1}, in lexicographic order.
void for_each_subset(Elem q, int n, const std::function<void(const Subset&)>& fn) {
  if (n < 0 || static_cast<Elem>(n) > q) return;
  std::vector<Elem> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = static_cast<Elem>(i);
  while (true) {
    fn(Subset(q, idx));
    int i = n - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == q - static_cast<Elem>(n - i)) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Advances k through {lo..r-1}^n in odometer order; false after the last.
bool next_exponents(std::vector<Elem>& k, Elem lo, Elem r) {
  for (auto& kj : k) {
    if (++kj < r) return true;
    kj = lo;
  }
  return false;
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  double out = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

void check_targets(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets) {
  if (static_cast<std::size_t>(y.size()) != targets.size()) {
    throw Error(ErrorCode::LengthMismatch, "|Y| and |t| differ");
  }
  if (y.modulus() != chi.q) throw Error(ErrorCode::ModulusMismatch, "subset and character over different fields");
  for (auto t : targets) {
    if (t % chi.q == 0) throw Error(ErrorCode::InvalidArgument, "coset targets must be nonzero");
  }
}

struct RowBuilder {
  CheckRow row;
  bool first = true;

  RowBuilder(std::string check, const CharacterTable& chi, int n) { row = {std::move(check), chi.q, chi.r, n}; }

  void add(double measured, double bound) {
    ++row.instances;
    const double margin = bound - measured;
    if (first || measured > row.measured) {
      row.measured = measured;
      row.bound = bound;
    }
    row.margin = first ? margin : std::min(row.margin, margin);
    first = false;
    if (measured > bound + kBoundSlack) ++row.violations;
  }
};

}  // namespace

int PolySpec::distinct_roots() const {
  return static_cast<int>(std::count_if(exponents.begin(), exponents.end(), [](Elem k) { return k > 0; }));
}

void check_poly(const PolySpec& poly, const CharacterTable& chi) {
  if (static_cast<std::size_t>(poly.roots.size()) != poly.exponents.size()) {
    throw Error(ErrorCode::LengthMismatch, "one exponent per root required");
  }
  if (poly.roots.modulus() != chi.q) throw Error(ErrorCode::ModulusMismatch, "roots and character over different fields");
  for (auto k : poly.exponents) {
    if (k >= chi.r) throw Error(ErrorCode::InvalidArgument, "exponents must be below r");
  }
  if (poly.distinct_roots() == 0) throw Error(ErrorCode::InvalidArgument, "f_k must be non-constant");
}

std::vector<std::uint64_t> char_sum_histogram(const CharacterTable& chi, const PolySpec& poly) {
  check_poly(poly, chi);
  const Elem q = chi.q;
  std::vector<std::uint64_t> hist(chi.r, 0);
  const auto ys = poly.roots.elems();
  for (Elem x = 0; x < q; ++x) {
    std::uint64_t e = 0;
    bool zero = false;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const Elem k = poly.exponents[j];
      if (k == 0) continue;
      const Elem d = ys[j] >= x ? ys[j] - x : ys[j] + q - x;
      if (d == 0) {
        zero = true;
        break;
      }
      e += std::uint64_t{k} * chi.exp_of[d];
    }
    if (!zero) ++hist[e % chi.r];
  }
  return hist;
}

std::complex<double> char_sum(const CharacterTable& chi, const PolySpec& poly) {
  return from_histogram(char_sum_histogram(chi, poly));
}

Rational coset_probability(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets,
                           ZeroConvention convention) {
  check_targets(chi, y, targets);
  const Elem q = chi.q;
  const auto ys = y.elems();
  std::int64_t count = 0;
  for (Elem x = 0; x < q; ++x) {
    bool ok = true;
    for (std::size_t j = 0; j < ys.size() && ok; ++j) {
      const Elem d = ys[j] >= x ? ys[j] - x : ys[j] + q - x;
      ok = d == 0 ? convention == ZeroConvention::ZeroIn : chi.exp_of[d] == chi.exp_of[targets[j] % q];
    }
    count += ok ? 1 : 0;
  }
  return {count, q};
}

Rational fuzzy_coset_probability(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets) {
  check_targets(chi, y, targets);
  const Elem q = chi.q;
  const auto ys = y.elems();
  // Weights in units of 1/r; distinct y_j put at most one zero in each row.
  std::int64_t total = 0;
  for (Elem x = 0; x < q; ++x) {
    std::int64_t w = chi.r;
    for (std::size_t j = 0; j < ys.size() && w > 0; ++j) {
      const Elem d = ys[j] >= x ? ys[j] - x : ys[j] + q - x;
      if (d == 0) {
        w = 1;
      } else if (chi.exp_of[d] != chi.exp_of[targets[j] % q]) {
        w = 0;
      }
    }
    total += w;
  }
  return {total, static_cast<std::int64_t>(q) * chi.r};
}

std::complex<double> character_expansion(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets) {
  check_targets(chi, y, targets);
  const Elem q = chi.q;
  const Elem r = chi.r;
  const int n = y.size();
  std::complex<double> sum{1.0, 0.0};
  std::vector<Elem> k(static_cast<std::size_t>(n), 0);
  while (next_exponents(k, 0, r)) {
    std::uint64_t te = 0;
    for (int j = 0; j < n; ++j) te += std::uint64_t{k[static_cast<std::size_t>(j)]} * chi.exp_of[targets[static_cast<std::size_t>(j)] % q];
    const auto b = root_of_unity((r - te % r) % r, r);
    sum += b * char_sum(chi, PolySpec{y, k}) / static_cast<double>(q);
  }
  return sum / std::pow(static_cast<double>(r), n);
}

std::uint64_t VerifyReport::violations() const {
  std::uint64_t v = 0;
  for (const auto& row : rows) v += row.violations;
  return v;
}

std::uint64_t VerifyReport::instances() const {
  std::uint64_t v = 0;
  for (const auto& row : rows) v += row.instances;
  return v;
}

void VerifyReport::append(const VerifyReport& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }

VerifyReport verify_weil(const CharacterTable& chi, int n_max) {
  const Elem q = chi.q;
  const Elem r = chi.r;
  double ops = 0.0;
  for (int n = 1; n <= n_max; ++n) ops += binomial(q, static_cast<std::uint64_t>(n)) * std::pow(r - 1.0, n) * q * n;
  if (ops > kOpBudget) throw Error(ErrorCode::Infeasible, "Weil enumeration exceeds the operation budget");

  VerifyReport report;
  const double root_q = std::sqrt(static_cast<double>(q));
  for (int n = 1; n <= n_max && static_cast<Elem>(n) <= q; ++n) {
    RowBuilder row("weil", chi, n);
    for_each_subset(q, n, [&](const Subset& y) {
      std::vector<Elem> k(static_cast<std::size_t>(n), 1);
      do {
        row.add(std::abs(char_sum(chi, PolySpec{y, k})), (n - 1) * root_q);
      } while (next_exponents(k, 1, r));
    });
    report.rows.push_back(row.row);
  }
  return report;
}

VerifyReport verify_weil_sampled(const CharacterTable& chi, int n, std::uint64_t samples, std::uint64_t seed) {
  const Elem q = chi.q;
  VerifyReport report;
  if (n < 1 || static_cast<Elem>(n) > q) return report;
  RowBuilder row("weil-sampled", chi, n);
  Rng rng(derive_seed(seed, {q, chi.r, static_cast<std::uint64_t>(n), 0x3E11ULL}));
  const double bound = (n - 1) * std::sqrt(static_cast<double>(q));
  for (std::uint64_t s = 0; s < samples; ++s) {
    auto y = sample_subset(q, n, rng);
    std::vector<Elem> k(static_cast<std::size_t>(n));
    for (auto& kj : k) kj = 1 + static_cast<Elem>(rng.below(chi.r - 1));
    row.add(std::abs(char_sum(chi, PolySpec{std::move(y), std::move(k)})), bound);
  }
  report.rows.push_back(row.row);
  return report;
}

namespace {

std::vector<Elem> sample_targets(Elem q, int n, Rng& rng) {
  std::vector<Elem> t(static_cast<std::size_t>(n));
  for (auto& tj : t) tj = 1 + static_cast<Elem>(rng.below(q - 1));
  return t;
}

}  // namespace

VerifyReport verify_equidistribution(const CharacterTable& chi, int n_max, std::uint64_t samples,
                                     std::uint64_t seed) {
  const Elem q = chi.q;
  VerifyReport report;
  for (int n = 1; n <= n_max && static_cast<Elem>(n) <= q; ++n) {
    RowBuilder row("equidistribution", chi, n);
    Rng rng(derive_seed(seed, {q, chi.r, static_cast<std::uint64_t>(n), 0xE9D1ULL}));
    const double ideal = std::pow(static_cast<double>(chi.r), -n);
    const double bound = n / std::sqrt(static_cast<double>(q)) + static_cast<double>(n) / q;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto y = sample_subset(q, n, rng);
      const auto t = sample_targets(q, n, rng);
      row.add(std::abs(coset_probability(chi, y, t, ZeroConvention::ZeroOut).value() - ideal), bound);
    }
    report.rows.push_back(row.row);
  }
  return report;
}

VerifyReport verify_fourier_identity(const CharacterTable& chi, int n_max, std::uint64_t samples,
                                     std::uint64_t seed) {
  const Elem q = chi.q;
  VerifyReport report;
  for (int n = 1; n <= n_max && static_cast<Elem>(n) <= q; ++n) {
    RowBuilder row("fourier-identity", chi, n);
    Rng rng(derive_seed(seed, {q, chi.r, static_cast<std::uint64_t>(n), 0xF0E1ULL}));
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto y = sample_subset(q, n, rng);
      const auto t = sample_targets(q, n, rng);
      const auto exact = fuzzy_coset_probability(chi, y, t).value();
      row.add(std::abs(character_expansion(chi, y, t) - exact), kBoundSlack);
    }
    report.rows.push_back(row.row);
  }
  return report;
}

int theorem_size(Elem q, Elem r, double epsilon) {
  const double v = (0.5 - epsilon) * std::log(static_cast<double>(q)) / std::log(static_cast<double>(r));
  return std::max(0, static_cast<int>(std::floor(v + 1e-12)));
}

namespace {

// Translate sets as bit vectors over x in F_q, one pair per y:
//   residue[y]  : y - x in Gamma^(r)
//   target[y]   : y - x in t Gamma^(r)
class CosetBits {
 public:
  CosetBits(const CharacterTable& chi, std::uint16_t target_class) : q_(chi.q), words_((chi.q + 63) / 64) {
    residue_.assign(std::size_t{q_} * words_, 0);
    target_.assign(std::size_t{q_} * words_, 0);
    for (Elem y = 0; y < q_; ++y) {
      for (Elem x = 0; x < q_; ++x) {
        const Elem d = y >= x ? y - x : y + q_ - x;
        if (d == 0) continue;
        const std::size_t at = std::size_t{y} * words_ + x / 64;
        const std::uint64_t bit = std::uint64_t{1} << (x % 64);
        if (chi.exp_of[d] == 0) residue_[at] |= bit;
        if (chi.exp_of[d] == target_class) target_[at] |= bit;
      }
    }
  }

  std::size_t words() const noexcept { return words_; }
  const std::uint64_t* residue(Elem y) const { return residue_.data() + std::size_t{y} * words_; }
  const std::uint64_t* target(Elem y) const { return target_.data() + std::size_t{y} * words_; }

 private:
  Elem q_;
  std::size_t words_;
  std::vector<std::uint64_t> residue_;
  std::vector<std::uint64_t> target_;
};

bool intersects(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  for (std::size_t w = 0; w < words; ++w) {
    if (a[w] & b[w]) return true;
  }
  return false;
}

// Witness sets for every pattern of the current prefix; level m stores 2^m
// bit vectors, pattern bit j set meaning y_j must land in Gamma^(r).
class PatternLevels {
 public:
  PatternLevels(const CosetBits& bits, Elem q) : bits_(bits), words_(bits.words()) {
    std::vector<std::uint64_t> all(words_, ~std::uint64_t{0});
    if (q % 64) all.back() = (std::uint64_t{1} << (q % 64)) - 1;
    levels_.push_back(std::move(all));
  }

  int size() const { return static_cast<int>(levels_.size()) - 1; }

  // Extends by y; false if some pattern has no witness.
  bool push(Elem y) {
    const auto& prev = levels_.back();
    const std::size_t patterns = prev.size() / words_;
    std::vector<std::uint64_t> next(prev.size() * 2);
    bool ok = true;
    for (std::size_t a = 0; a < patterns; ++a) {
      ok = fill(prev.data() + a * words_, bits_.target(y), next.data() + a * words_) && ok;
      ok = fill(prev.data() + a * words_, bits_.residue(y), next.data() + (a + patterns) * words_) && ok;
    }
    levels_.push_back(std::move(next));
    return ok;
  }

  // Whether extending by y keeps every pattern witnessed, without storing.
  bool extends(Elem y) const {
    const auto& prev = levels_.back();
    const std::size_t patterns = prev.size() / words_;
    for (std::size_t a = 0; a < patterns; ++a) {
      const auto* p = prev.data() + a * words_;
      if (!intersects(p, bits_.target(y), words_) || !intersects(p, bits_.residue(y), words_)) return false;
    }
    return true;
  }

  void pop() { levels_.pop_back(); }

 private:
  bool fill(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const {
    std::uint64_t any = 0;
    for (std::size_t w = 0; w < words_; ++w) any |= out[w] = a[w] & b[w];
    return any != 0;
  }

  const CosetBits& bits_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> levels_;
};

}  // namespace

TheoremReport verify_shattering_theorem(const PrimeField& field, Elem r, double epsilon) {
  const auto chi = character_table(field, r);
  const Elem q = field.modulus();
  TheoremReport report{q, r, epsilon, theorem_size(q, r, epsilon), 0, true, {}};
  const int n_star = std::min<int>(report.n_star, static_cast<int>(q));
  if (n_star == 0) return report;

  const std::vector<Elem> root = (r == 2 && n_star >= 2) ? std::vector<Elem>{0, 1} : std::vector<Elem>{0};
  const int free = n_star - static_cast<int>(root.size());
  const double sets = binomial(q - root.size(), static_cast<std::uint64_t>(free));
  if (sets * std::exp2(n_star) > kOpBudget || double(q) * q / 32.0 > kOpBudget) {
    throw Error(ErrorCode::Infeasible, "shattering check exceeds the operation budget");
  }

  // The generator lies in the coset of dlog 1, outside Gamma^(r).
  const CosetBits bits(chi, 1);
  PatternLevels levels(bits, q);
  std::vector<Elem> ys;
  auto fail = [&](std::vector<Elem> y) {
    report.passed = false;
    report.counterexample = Subset(q, std::move(y));
  };
  for (auto y : root) {
    ys.push_back(y);
    if (!levels.push(y)) {
      fail(ys);
      report.sets_checked = 1;
      return report;
    }
  }
  if (free == 0) {
    report.sets_checked = 1;
    return report;
  }

  // Sets of size n_star containing the root; by monotonicity smaller sets are covered.
  std::function<void(Elem)> descend = [&](Elem start) {
    const int remaining = n_star - levels.size();
    for (Elem c = start; c + static_cast<Elem>(remaining) <= q && report.passed; ++c) {
      if (remaining == 1) {
        ++report.sets_checked;
        if (!levels.extends(c)) {
          ys.push_back(c);
          fail(ys);
          ys.pop_back();
        }
        continue;
      }
      ys.push_back(c);
      if (levels.push(c)) {
        descend(c + 1);
      } else {
        // Some pattern is already unreachable for the prefix, hence for all supersets.
        ++report.sets_checked;
        fail(ys);
      }
      levels.pop();
      ys.pop_back();
    }
  };
  descend(root.back() + 1);
  return report;
}

}  // namespace qrvc
