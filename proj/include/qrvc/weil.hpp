#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qrvc/field.hpp"
#include "qrvc/shatter.hpp"

namespace qrvc {

/// f_k(x) = prod_j (y_j - x)^{k_j} with 0 <= k_j < r, not all zero.
struct PolySpec {
  Subset roots;
  std::vector<Elem> exponents;

  /// Number of j with k_j >= 1 (distinct roots of f_k).
  int distinct_roots() const;
};

/// Validates lengths and exponent ranges against the character order.
void check_poly(const PolySpec& poly, const CharacterTable& chi);

/// Counts of x with chi_r(f_k(x)) = e^{2 pi i e / r}, indexed by e; zeros of
/// f_k are not counted.
std::vector<std::uint64_t> char_sum_histogram(const CharacterTable& chi, const PolySpec& poly);

/// sum_x chi_r(f_k(x)) with chi_r(0) = 0.
std::complex<double> char_sum(const CharacterTable& chi, const PolySpec& poly);

/// A ratio of integers.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Pr_x[y_j - x in t_j Gamma^(r) for all j], counted over the q translates.
/// y_j - x = 0 counts as a member of every coset under ZeroIn and of none
/// otherwise. Throws LengthMismatch when |Y| != |t|.
Rational coset_probability(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets,
                           ZeroConvention convention);

/// The same probability with 0 weighted 1/r in every coset.
Rational fuzzy_coset_probability(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets);

/// r^{-n} (1 + sum_{k != 0} b(k, t) (1/q) sum_x chi_r(f_k(x))) with
/// b(k, t) = conj(chi_r)(prod_j t_j^{k_j}).
std::complex<double> character_expansion(const CharacterTable& chi, const Subset& y, std::span<const Elem> targets);

/// Aggregated result of one family of checks at a fixed (q, r, n).
struct CheckRow {
  std::string check;
  Elem q = 0;
  Elem r = 0;
  int n = 0;
  std::uint64_t instances = 0;
  /// Worst measured quantity over the family.
  double measured = 0.0;
  /// Bound that quantity is checked against (at the worst instance).
  double bound = 0.0;
  /// Smallest bound - measured over the family.
  double margin = 0.0;
  std::uint64_t violations = 0;
};

struct VerifyReport {
  std::vector<CheckRow> rows;

  std::uint64_t violations() const;
  std::uint64_t instances() const;
  void append(const VerifyReport& other);
};

inline constexpr double kBoundSlack = 1e-6;
inline constexpr double kOpBudget = 1e9;

/// |sum_x chi_r(f_k(x))| <= (d - 1) sqrt(q), d the number of distinct roots,
/// over every Y with |Y| <= n_max and every k in {1..r-1}^|Y| (an exponent of
/// 0 reduces to a smaller Y). Throws Infeasible above kOpBudget.
VerifyReport verify_weil(const CharacterTable& chi, int n_max);

/// The same bound over `samples` seeded random (Y, k) with |Y| = n.
VerifyReport verify_weil_sampled(const CharacterTable& chi, int n, std::uint64_t samples, std::uint64_t seed);

/// |coset_probability - r^{-n}| <= n / sqrt(q) + n / q over seeded random
/// (Y, t), `samples` per n in 1..n_max, integer counting with 0 excluded.
VerifyReport verify_equidistribution(const CharacterTable& chi, int n_max, std::uint64_t samples,
                                     std::uint64_t seed);

/// |fuzzy_coset_probability - character_expansion| <= 1e-6 over seeded
/// random (Y, t), `samples` per n in 1..n_max.
VerifyReport verify_fourier_identity(const CharacterTable& chi, int n_max, std::uint64_t samples,
                                     std::uint64_t seed);

struct TheoremReport {
  Elem q = 0;
  Elem r = 0;
  double epsilon = 0.0;
  int n_star = 0;
  std::uint64_t sets_checked = 0;
  bool passed = true;
  /// First set found without a witness translate for some pattern.
  Subset counterexample;
};

/// floor((1/2 - epsilon) log_r q), clamped at 0.
int theorem_size(Elem q, Elem r, double epsilon);

/// Checks that every Y with |Y| <= n* is shattered by Gamma^(r) through the
/// coset-target construction: for each pattern A, some x has y_j - x in
/// Gamma^(r) for y_j in A and in t Gamma^(r) (t a fixed non-residue)
/// otherwise. Representatives contain {0, 1} for r = 2 and 0 otherwise.
TheoremReport verify_shattering_theorem(const PrimeField& field, Elem r, double epsilon);

}  // namespace qrvc
