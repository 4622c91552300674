#include "qrvc/field.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numbers>
#include <string>

namespace qrvc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::EvenPrime: return "EvenPrime";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::IndexNotDividing: return "IndexNotDividing";
    case ErrorCode::ModulusMismatch: return "ModulusMismatch";
    case ErrorCode::WidthOverflow: return "WidthOverflow";
    case ErrorCode::EmptyFold: return "EmptyFold";
    case ErrorCode::NTooLarge: return "NTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kSmall) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes form a deterministic witness set below 3.3e24.
  for (auto a : kSmall) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n) {
    if (is_prime(n)) out.push_back(n);
    if (n == std::numeric_limits<std::uint64_t>::max()) break;
  }
  return out;
}

int floor_log2(std::uint64_t n) { return n == 0 ? -1 : 63 - std::countl_zero(n); }

PrimeField::PrimeField(Elem q, Elem g) : q_(q), g_(g), dlog_(q, 0), exp_(q - 1, 0) {
  order_factors_ = prime_factors(q - 1);
  std::uint64_t x = 1;
  for (Elem a = 0; a + 1 < q; ++a) {
    exp_[a] = static_cast<Elem>(x);
    dlog_[x] = a;
    x = x * g % q;
  }
}

Elem PrimeField::inv(Elem a) const {
  if (a % q_ == 0) throw Error(ErrorCode::InvalidArgument, "zero has no inverse");
  return static_cast<Elem>(pow_mod(a, q_ - 2, q_));
}

Elem PrimeField::reduce(std::int64_t a) const noexcept {
  auto m = static_cast<std::int64_t>(q_);
  auto r = a % m;
  return static_cast<Elem>(r < 0 ? r + m : r);
}

bool PrimeField::is_primitive_root(Elem g) const {
  if (g % q_ == 0) return false;
  for (auto p : order_factors_) {
    if (pow_mod(g, (q_ - 1) / p, q_) == 1) return false;
  }
  return true;
}

std::vector<Elem> PrimeField::primitive_roots() const {
  std::vector<Elem> out;
  for (Elem g = 1; g < q_; ++g) {
    if (is_primitive_root(g)) out.push_back(g);
  }
  return out;
}

namespace {

void check_modulus(std::uint64_t q) {
  if (q == 2) throw Error(ErrorCode::EvenPrime, "q = 2 admits no index r >= 2");
  if (q < 3) throw Error(ErrorCode::TooSmall, "q = " + std::to_string(q));
  if (!is_prime(q)) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not prime");
  if (q > (std::uint64_t{1} << 31)) {
    throw Error(ErrorCode::Infeasible, "tables for q = " + std::to_string(q) + " do not fit in memory");
  }
}

bool has_primitive_order(std::uint64_t g, std::uint64_t q, const std::vector<std::uint64_t>& factors) {
  return std::none_of(factors.begin(), factors.end(),
                      [&](std::uint64_t p) { return pow_mod(g, (q - 1) / p, q) == 1; });
}

void check_index(const PrimeField& field, Elem r) {
  if (r < 2 || (field.modulus() - 1) % r != 0) {
    throw Error(ErrorCode::IndexNotDividing,
                "r = " + std::to_string(r) + " does not divide q - 1 = " + std::to_string(field.modulus() - 1));
  }
}

}  // namespace

PrimeField make_field(std::uint64_t q) {
  check_modulus(q);
  auto factors = prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    if (has_primitive_order(g, q, factors)) return PrimeField(static_cast<Elem>(q), static_cast<Elem>(g));
  }
  // q = 3: the search above starts at 2, which is always found; unreachable otherwise.
  throw Error(ErrorCode::InvalidArgument, "no primitive root found");
}

PrimeField make_field(std::uint64_t q, Elem generator) {
  check_modulus(q);
  if (!has_primitive_order(generator % q, q, prime_factors(q - 1)) || generator % q == 0) {
    throw Error(ErrorCode::InvalidArgument, std::to_string(generator) + " is not a primitive root");
  }
  return PrimeField(static_cast<Elem>(q), static_cast<Elem>(generator % q));
}

std::string_view to_string(ZeroConvention c) {
  switch (c) {
    case ZeroConvention::ZeroIn: return "zero-in";
    case ZeroConvention::ZeroOut: return "zero-out";
    case ZeroConvention::Strict: return "strict";
  }
  return "?";
}

ZeroConvention parse_convention(std::string_view s) {
  for (auto c : kAllConventions) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown convention '" + std::string(s) + "'");
}

std::size_t ResidueTable::nonzero_members() const {
  return static_cast<std::size_t>(std::count(member.begin() + 1, member.end(), std::uint8_t{1}));
}

ResidueTable residue_union(const PrimeField& field, Elem r, std::span<const Elem> reps, ZeroConvention conv) {
  check_index(field, r);
  const Elem q = field.modulus();
  ResidueTable table{q, r, reps.empty() ? 0 : reps.front(), conv, std::vector<std::uint8_t>(q, 0)};
  std::vector<std::uint8_t> classes(r, 0);
  for (auto t : reps) {
    if (t % q == 0) throw Error(ErrorCode::InvalidArgument, "coset representative must be nonzero");
    classes[field.dlog(t % q) % r] = 1;
  }
  for (Elem x = 1; x < q; ++x) table.member[x] = classes[field.dlog(x) % r];
  table.member[0] = conv == ZeroConvention::ZeroIn ? 1 : 0;
  return table;
}

ResidueTable residue_table(const PrimeField& field, Elem r, Elem t, ZeroConvention conv) {
  const Elem reps[] = {t};
  return residue_union(field, r, reps, conv);
}

ResidueTable connection_table(Elem q, std::span<const Elem> elements, ZeroConvention conv) {
  ResidueTable table{q, 0, 0, conv, std::vector<std::uint8_t>(q, 0)};
  for (auto x : elements) {
    if (x >= q) throw Error(ErrorCode::ModulusMismatch, "element outside F_q");
    table.member[x] = 1;
  }
  return table;
}

std::complex<double> root_of_unity(std::uint64_t e, std::uint64_t r) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e % r) / static_cast<double>(r);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> CharacterTable::value(Elem x) const {
  return is_zero(x) ? std::complex<double>{} : root_of_unity(exp_of[x], r);
}

std::complex<double> CharacterTable::power(Elem x, Elem k) const {
  if (k % r == 0) return {1.0, 0.0};
  return is_zero(x) ? std::complex<double>{} : root_of_unity(std::uint64_t{exp_of[x]} * k, r);
}

CharacterTable character_table(const PrimeField& field, Elem r) {
  check_index(field, r);
  if (r >= CharacterTable::kZero) throw Error(ErrorCode::Infeasible, "character order too large");
  const Elem q = field.modulus();
  CharacterTable table{q, r, std::vector<std::uint16_t>(q, CharacterTable::kZero)};
  for (Elem x = 1; x < q; ++x) table.exp_of[x] = static_cast<std::uint16_t>(field.dlog(x) % r);
  return table;
}

}  // namespace qrvc
