#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qrvc/error.hpp"

namespace qrvc {

using Elem = std::uint32_t;

// Modular helpers on 64-bit operands.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// Distinct prime factors of n, ascending, by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// Primes in [lo, hi], ascending.
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

// floor(log2 n) for n >= 1.
int floor_log2(std::uint64_t n);

/// The prime field F_q together with a primitive root and its discrete-log
/// table. Immutable once built.
class PrimeField {
 public:
  Elem modulus() const noexcept { return q_; }
  Elem generator() const noexcept { return g_; }

  /// Discrete log base generator(); x must be nonzero.
  Elem dlog(Elem x) const { return dlog_[x]; }
  /// generator()^a for 0 <= a < q - 1.
  Elem exp(Elem a) const { return exp_[a]; }

  Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>((std::uint64_t{a} + b) % q_); }
  Elem sub(Elem a, Elem b) const noexcept { return static_cast<Elem>((std::uint64_t{a} + q_ - b) % q_); }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : q_ - a; }
  Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>(std::uint64_t{a} * b % q_); }
  Elem inv(Elem a) const;
  Elem reduce(std::int64_t a) const noexcept;

  /// Whether g generates F_q^x.
  bool is_primitive_root(Elem g) const;

  /// All primitive roots, ascending.
  std::vector<Elem> primitive_roots() const;

 private:
  friend PrimeField make_field(std::uint64_t q);
  friend PrimeField make_field(std::uint64_t q, Elem generator);

  PrimeField(Elem q, Elem g);

  Elem q_;
  Elem g_;
  std::vector<Elem> dlog_;
  std::vector<Elem> exp_;
  std::vector<std::uint64_t> order_factors_;
};

// Builds F_q with the smallest primitive root.
PrimeField make_field(std::uint64_t q);
// Builds F_q using the given primitive root; throws InvalidArgument if it is not one.
PrimeField make_field(std::uint64_t q, Elem generator);

/// How the element 0 (which lies in no multiplicative coset) is treated.
///   ZeroIn  - 0 counts as a member of the residue set; every translate allowed.
///   ZeroOut - 0 is a non-member; every translate allowed.
///   Strict  - 0 is a non-member and translates x in Y are discarded.
enum class ZeroConvention { ZeroIn, ZeroOut, Strict };

std::string_view to_string(ZeroConvention c);
ZeroConvention parse_convention(std::string_view s);
inline constexpr ZeroConvention kAllConventions[] = {ZeroConvention::ZeroIn, ZeroConvention::ZeroOut,
                                                     ZeroConvention::Strict};

/// Membership vector of a residue set (a union of cosets of the index-r
/// subgroup) in F_q. r == 0 marks an arbitrary connection set.
struct ResidueTable {
  Elem q = 0;
  Elem r = 0;
  Elem coset_rep = 0;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  std::vector<std::uint8_t> member;

  bool contains(Elem x) const { return member[x] != 0; }
  std::size_t nonzero_members() const;
};

/// tGamma^(r) with 0 handled per conv.
ResidueTable residue_table(const PrimeField& field, Elem r, Elem t, ZeroConvention conv);
/// Union of the cosets repGamma^(r) for the given representatives.
ResidueTable residue_union(const PrimeField& field, Elem r, std::span<const Elem> reps, ZeroConvention conv);
/// The quadratic residues S_q.
inline ResidueTable squares(const PrimeField& field, ZeroConvention conv) {
  return residue_table(field, 2, 1, conv);
}
/// Arbitrary connection set of a Cayley digraph on (F_q, +). Element 0 is
/// taken from `elements` under every convention.
ResidueTable connection_table(Elem q, std::span<const Elem> elements, ZeroConvention conv);

/// The order-r character chi_r(x) = exp(2 pi i dlog(x) / r), stored by exponent.
struct CharacterTable {
  static constexpr std::uint16_t kZero = 0xFFFF;

  Elem q = 0;
  Elem r = 0;
  std::vector<std::uint16_t> exp_of;

  bool is_zero(Elem x) const { return exp_of[x] == kZero; }
  std::complex<double> value(Elem x) const;
  /// chi_r^k(x).
  std::complex<double> power(Elem x, Elem k) const;
};

CharacterTable character_table(const PrimeField& field, Elem r);

/// e^{2 pi i e / r}.
std::complex<double> root_of_unity(std::uint64_t e, std::uint64_t r);

}  // namespace qrvc
