#include "qrvc/shatter.hpp"

#include <algorithm>
#include <string>

namespace qrvc {

namespace {

// Largest pattern table we are willing to allocate.
constexpr int kMaxTableWidth = 30;

void check_modulus(const Subset& y, const ResidueTable& table) {
  if (y.modulus() != table.q) {
    throw Error(ErrorCode::ModulusMismatch,
                "subset over F_" + std::to_string(y.modulus()) + ", table over F_" + std::to_string(table.q));
  }
}

// sig[x] |= member[y - x] << bit for every x.
void add_column(std::span<std::uint64_t> sig, std::span<const std::uint8_t> member, Elem y, int bit) {
  const Elem q = static_cast<Elem>(member.size());
  for (Elem x = 0; x <= y; ++x) sig[x] |= std::uint64_t{member[y - x]} << bit;
  for (Elem x = y + 1; x < q; ++x) sig[x] |= std::uint64_t{member[y + q - x]} << bit;
}

}  // namespace

Subset::Subset(Elem q, std::vector<Elem> elems) : q_(q), elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end()) {
    throw Error(ErrorCode::InvalidArgument, "subset elements must be distinct");
  }
  if (!elems_.empty() && elems_.back() >= q) throw Error(ErrorCode::InvalidArgument, "element outside F_q");
  if (size() > kMaxSubsetSize) throw Error(ErrorCode::WidthOverflow, "subset larger than 63 elements");
}

bool Subset::contains(Elem x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

Subset Subset::translated(Elem b) const {
  std::vector<Elem> out;
  out.reserve(elems_.size());
  for (auto y : elems_) out.push_back(static_cast<Elem>((std::uint64_t{y} + b) % q_));
  return Subset(q_, std::move(out));
}

Subset Subset::dilated(Elem a) const {
  if (a % q_ == 0) throw Error(ErrorCode::InvalidArgument, "dilation by zero");
  std::vector<Elem> out;
  out.reserve(elems_.size());
  for (auto y : elems_) out.push_back(static_cast<Elem>(std::uint64_t{y} * a % q_));
  return Subset(q_, std::move(out));
}

Subset Subset::prefix(int k) const {
  return Subset(q_, std::vector<Elem>(elems_.begin(), elems_.begin() + std::clamp(k, 0, size())));
}

Subset progression(Elem q, int n) {
  std::vector<Elem> elems(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) elems[static_cast<std::size_t>(i)] = static_cast<Elem>(i);
  return Subset(q, std::move(elems));
}

MembershipMatrix membership_matrix(const Subset& y, const ResidueTable& table) {
  check_modulus(y, table);
  MembershipMatrix a{table.q, y.size(), std::vector<std::uint8_t>(std::size_t{table.q} * y.elems().size())};
  for (Elem x = 0; x < table.q; ++x) {
    for (int i = 0; i < y.size(); ++i) {
      a.data[std::size_t{x} * static_cast<std::size_t>(a.cols) + i] =
          table.member[(std::uint64_t{y[i]} + table.q - x) % table.q];
    }
  }
  return a;
}

std::vector<std::uint64_t> row_signatures(const Subset& y, const ResidueTable& table) {
  check_modulus(y, table);
  std::vector<std::uint64_t> sig(table.q, 0);
  for (int i = 0; i < y.size(); ++i) add_column(sig, table.member, y[i], i);
  return sig;
}

std::uint64_t allowed_translates(const Subset& y, const ResidueTable& table) {
  return table.q - (table.convention == ZeroConvention::Strict ? static_cast<Elem>(y.size()) : 0);
}

std::uint64_t PatternCounts::total() const {
  std::uint64_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::uint64_t PatternCounts::min() const { return *std::min_element(counts.begin(), counts.end()); }

PatternCounts pattern_counts(const Subset& y, const ResidueTable& table, Elem x_begin, Elem x_end) {
  check_modulus(y, table);
  const int n = y.size();
  if (n > kMaxTableWidth) {
    throw Error(ErrorCode::NTooLarge, "pattern table of width " + std::to_string(n) + " is too large");
  }
  x_end = std::min(x_end, table.q);
  PatternCounts out{n, std::vector<std::uint64_t>(std::size_t{1} << n, 0)};
  const auto sig = row_signatures(y, table);
  for (Elem x = x_begin; x < x_end; ++x) {
    if (translate_allowed(y, table, x)) ++out.counts[sig[x]];
  }
  return out;
}

PatternCounts pattern_counts(const Subset& y, const ResidueTable& table) {
  auto out = pattern_counts(y, table, 0, table.q);
  if (out.total() != allowed_translates(y, table)) {
    throw Error(ErrorCode::InvalidArgument, "pattern counts do not sum to the number of translates");
  }
  return out;
}

bool is_shattered(const Subset& y, const ResidueTable& table) {
  check_modulus(y, table);
  const int n = y.size();
  if (n >= 64 || (std::uint64_t{1} << n) > allowed_translates(y, table)) return false;
  const auto sig = row_signatures(y, table);
  std::vector<std::uint8_t> seen(std::size_t{1} << n, 0);
  std::uint64_t remaining = std::uint64_t{1} << n;
  for (Elem x = 0; x < table.q; ++x) {
    if (!translate_allowed(y, table, x) || seen[sig[x]]) continue;
    seen[sig[x]] = 1;
    if (--remaining == 0) return true;
  }
  return false;
}

int shattering_index(const PatternCounts& counts) {
  const auto m = counts.min();
  return m == 0 ? -1 : floor_log2(m);
}

int shattering_index(const Subset& y, const ResidueTable& table) {
  check_modulus(y, table);
  if (y.size() >= 64 || (std::uint64_t{1} << y.size()) > allowed_translates(y, table)) return -1;
  return shattering_index(pattern_counts(y, table));
}

ShatterReport shatter_report(const Subset& y, const ResidueTable& table) {
  const int index = shattering_index(y, table);
  return {index >= 0, index, table.convention};
}

bool RealizedPatterns::all() const {
  return std::all_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

RealizedPatterns realized_patterns(const PatternCounts& counts) {
  RealizedPatterns out{counts.n, std::vector<std::uint8_t>(counts.counts.size())};
  std::transform(counts.counts.begin(), counts.counts.end(), out.bits.begin(),
                 [](std::uint64_t c) { return static_cast<std::uint8_t>(c > 0); });
  return out;
}

RealizedPatterns realized_patterns(const Subset& y, const ResidueTable& table) {
  return realized_patterns(pattern_counts(y, table));
}

RealizedPatterns fold_patterns(const RealizedPatterns& patterns) {
  if (patterns.n == 0) throw Error(ErrorCode::EmptyFold, "cannot fold a width-0 pattern vector");
  const std::size_t half = std::size_t{1} << (patterns.n - 1);
  RealizedPatterns out{patterns.n - 1, std::vector<std::uint8_t>(half)};
  for (std::size_t t = 0; t < half; ++t) {
    out.bits[t] = static_cast<std::uint8_t>(patterns.bits[t] | patterns.bits[t + half]);
  }
  return out;
}

}  // namespace qrvc
