#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "qrvc/field.hpp"

namespace qrvc {

inline constexpr int kMaxSubsetSize = 63;

/// A set Y of distinct elements of F_q, stored ascending.
class Subset {
 public:
  Subset() = default;
  /// Sorts `elems`; throws InvalidArgument on duplicates or out-of-range
  /// elements and WidthOverflow above kMaxSubsetSize.
  Subset(Elem q, std::vector<Elem> elems);
  Subset(Elem q, std::initializer_list<Elem> elems) : Subset(q, std::vector<Elem>(elems)) {}

  Elem modulus() const noexcept { return q_; }
  int size() const noexcept { return static_cast<int>(elems_.size()); }
  bool empty() const noexcept { return elems_.empty(); }
  std::span<const Elem> elems() const noexcept { return elems_; }
  Elem operator[](int i) const { return elems_[static_cast<std::size_t>(i)]; }
  bool contains(Elem x) const;

  /// {y + b}.
  Subset translated(Elem b) const;
  /// {a y}; a must be nonzero mod q.
  Subset dilated(Elem a) const;
  /// First k elements.
  Subset prefix(int k) const;

  friend bool operator==(const Subset&, const Subset&) = default;

 private:
  Elem q_ = 0;
  std::vector<Elem> elems_;
};

/// {0, 1, ..., n - 1} in F_q.
Subset progression(Elem q, int n);

/// q x n 0/1 matrix with A(x, i) = member[y_i - x].
struct MembershipMatrix {
  Elem rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(Elem x, int i) const { return data[std::size_t{x} * static_cast<std::size_t>(cols) + i]; }
};

MembershipMatrix membership_matrix(const Subset& y, const ResidueTable& table);

/// Row signatures sum_i A(x, i) 2^i for every translate x (all q rows,
/// regardless of convention).
std::vector<std::uint64_t> row_signatures(const Subset& y, const ResidueTable& table);

/// Whether translate x takes part under the table's convention.
inline bool translate_allowed(const Subset& y, const ResidueTable& table, Elem x) {
  return table.convention != ZeroConvention::Strict || !y.contains(x);
}

/// Number of translates that take part under the table's convention.
std::uint64_t allowed_translates(const Subset& y, const ResidueTable& table);

struct PatternCounts {
  int n = 0;
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const;
  std::uint64_t min() const;
};

/// Tallies, for each n-bit pattern t, the allowed translates x whose row
/// signature equals t. Throws WidthOverflow above 63 and NTooLarge when the
/// 2^n table would not fit in memory.
PatternCounts pattern_counts(const Subset& y, const ResidueTable& table);

/// Same tally restricted to translates in [x_begin, x_end). Sums of disjoint
/// ranges add up to the full count.
PatternCounts pattern_counts(const Subset& y, const ResidueTable& table, Elem x_begin, Elem x_end);

/// Y is shattered iff every n-bit pattern is realized by an allowed translate.
bool is_shattered(const Subset& y, const ResidueTable& table);

/// floor(log2(min_t counts[t])) when shattered, -1 otherwise.
int shattering_index(const Subset& y, const ResidueTable& table);
int shattering_index(const PatternCounts& counts);

struct ShatterReport {
  bool shattered = false;
  int index = -1;
  ZeroConvention convention = ZeroConvention::ZeroIn;
};

ShatterReport shatter_report(const Subset& y, const ResidueTable& table);

/// Realized/not-realized flags per pattern.
struct RealizedPatterns {
  int n = 0;
  std::vector<std::uint8_t> bits;

  bool all() const;
};

RealizedPatterns realized_patterns(const PatternCounts& counts);
RealizedPatterns realized_patterns(const Subset& y, const ResidueTable& table);

/// Drops the last element: R'[t] = R[t] | R[t + 2^(n-1)]. Throws EmptyFold
/// for n = 0. Exact for conventions that allow every translate.
RealizedPatterns fold_patterns(const RealizedPatterns& patterns);

}  // namespace qrvc
