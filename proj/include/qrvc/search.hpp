#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qrvc/field.hpp"
#include "qrvc/shatter.hpp"

namespace qrvc {

/// Which representatives the exhaustive search visits.
///   Affine      - sets containing {0, 1}, searched once per dilation class
///                 of the table (is_shattered(aZ, T) = is_shattered(Z, T/a)),
///                 so every affine image is covered under every convention.
///                 Strict squares need only one class.
///   ZeroOne     - sets containing {0, 1} against the table itself. Exact
///                 only when shattering is invariant under every
///                 y -> a y + b (Strict squares).
///   Translation - every set containing 0.
enum class Canonicalization { Affine, ZeroOne, Translation };

std::string_view to_string(Canonicalization c);
Canonicalization parse_canonicalization(std::string_view s);

struct SearchOptions {
  ZeroConvention convention = ZeroConvention::ZeroIn;
  Canonicalization canonicalization = Canonicalization::Affine;
  /// Stop as soon as a shattered set of this size is found.
  std::optional<int> early_exit_at;
  /// Worker threads splitting the tree on the first free element.
  int jobs = 1;
  bool generation_bound = true;
  bool index_bound = true;
};

struct VcResult {
  Elem q = 0;
  int vcdim = 0;
  double alpha_q = 0.0;
  ZeroConvention convention = ZeroConvention::ZeroIn;
  Subset witness;
  /// True when the search stopped at early_exit_at; vcdim is then a lower bound.
  bool lower_bound = false;
  std::uint64_t nodes = 0;
  std::chrono::milliseconds elapsed{0};
};

/// Largest subset shattered by translates of `table`, by depth-first search
/// with the generation and shattering-index prunes. The table's own
/// convention governs; options.convention is ignored here.
VcResult vc_dimension(const ResidueTable& table, const SearchOptions& options = {});
/// VC dimension of the quadratic residues of F_q. Throws TooSmall for q < 5.
VcResult vc_dimension(std::uint64_t q, const SearchOptions& options = {});

/// min(m_q, cap) where m_q is the largest n such that every subset of size
/// <= n is shattered by translates of `table`.
int testing_dimension(const ResidueTable& table, int cap);
int testing_dimension(std::uint64_t q, ZeroConvention convention, int cap);

struct ApResult {
  Elem q = 0;
  int longest = 0;
  double ratio = 0.0;
  ZeroConvention convention = ZeroConvention::ZeroIn;
};

/// Largest n <= floor(log2 q) with {0, ..., n - 1} shattered, from a single
/// pattern table at the maximal width folded down one element at a time.
ApResult longest_shattered_ap(const ResidueTable& table);
ApResult longest_shattered_ap(std::uint64_t q, ZeroConvention convention);

enum class EarlyExitPolicy { None, FloorLog2Minus1 };

struct SweepItem {
  Elem q = 0;
  std::optional<VcResult> result;
  std::string error;
};

/// One VcResult per prime in [q_lo, q_hi], ascending. Primes in `skip` are
/// not searched (checkpoint resume). `on_item` runs after each prime in
/// completion order, serialized under a lock.
std::vector<SweepItem> vc_sweep(std::uint64_t q_lo, std::uint64_t q_hi, const SearchOptions& options,
                                EarlyExitPolicy policy, int jobs = 1, const std::vector<Elem>& skip = {},
                                const std::function<void(const SweepItem&)>& on_item = {});

}  // namespace qrvc
