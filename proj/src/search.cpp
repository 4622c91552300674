#include "qrvc/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace qrvc {

std::string_view to_string(Canonicalization c) {
  switch (c) {
    case Canonicalization::Affine: return "affine";
    case Canonicalization::ZeroOne: return "zero-one";
    case Canonicalization::Translation: return "translation";
  }
  return "?";
}

Canonicalization parse_canonicalization(std::string_view s) {
  if (s == "affine") return Canonicalization::Affine;
  if (s == "zero-one") return Canonicalization::ZeroOne;
  if (s == "translation") return Canonicalization::Translation;
  throw Error(ErrorCode::InvalidArgument, "unknown canonicalization '" + std::string(s) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

// Incrementally maintained row signatures for a growing set Y. Level m holds
// the signatures of the first m elements.
class SignatureStack {
 public:
  explicit SignatureStack(const ResidueTable& table)
      : table_(table), q_(table.q), strict_(table.convention == ZeroConvention::Strict) {
    levels_.emplace_back(q_, 0);
  }

  int size() const noexcept { return static_cast<int>(ys_.size()); }
  const std::vector<Elem>& elems() const noexcept { return ys_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

  // Appends c (larger than every current element) and returns the minimum
  // pattern count of the enlarged set, 0 meaning not shattered.
  std::uint64_t push(Elem c) {
    ys_.push_back(c);
    ++nodes_;
    const int m = size();
    const std::uint64_t allowed = q_ - (strict_ ? static_cast<std::uint64_t>(m) : 0);
    if (static_cast<std::size_t>(m) >= levels_.size()) levels_.emplace_back(q_, 0);
    if (m >= 31 || (std::uint64_t{1} << m) > allowed) return 0;

    const auto& parent = levels_[static_cast<std::size_t>(m - 1)];
    auto& sig = levels_[static_cast<std::size_t>(m)];
    const auto& member = table_.member;
    const int bit = m - 1;
    for (Elem x = 0; x <= c; ++x) sig[x] = parent[x] | (std::uint32_t{member[c - x]} << bit);
    for (Elem x = c + 1; x < q_; ++x) sig[x] = parent[x] | (std::uint32_t{member[c + q_ - x]} << bit);

    const std::size_t width = std::size_t{1} << m;
    counts_.assign(width, 0);
    for (Elem x = 0; x < q_; ++x) ++counts_[sig[x]];
    if (strict_) {
      for (auto y : ys_) --counts_[sig[y]];
    }
    std::uint32_t mn = std::numeric_limits<std::uint32_t>::max();
    for (auto v : counts_) mn = std::min(mn, v);
    return mn;
  }

  void pop() { ys_.pop_back(); }

 private:
  const ResidueTable& table_;
  Elem q_;
  bool strict_;
  std::vector<Elem> ys_;
  std::vector<std::vector<std::uint32_t>> levels_;
  std::vector<std::uint32_t> counts_;
  std::uint64_t nodes_ = 0;
};

// The table T/a (x in T/a iff a x in T) searched from root {0, 1}; a set Z
// found there maps back to the witness a Z for T.
struct View {
  ResidueTable table;
  Elem scale = 1;
};

ResidueTable dilate_table(const ResidueTable& table, Elem a) {
  ResidueTable out = table;
  for (Elem x = 1; x < table.q; ++x) out.member[x] = table.member[std::uint64_t{a} * x % table.q];
  return out;
}

std::vector<View> search_views(const ResidueTable& table, Canonicalization canon) {
  if (canon == Canonicalization::Translation || table.q < 3) return {{table, 1}};
  if (canon == Canonicalization::ZeroOne) return {{table, 1}};
  if (table.r == 0) return {{table, 1}};  // arbitrary table: no dilation classes to exploit
  if (table.convention == ZeroConvention::Strict && table.r == 2) return {{table, 1}};
  const auto field = make_field(table.q);
  std::vector<View> views;
  for (Elem j = 0; j < table.r; ++j) {
    const Elem a = field.exp(j);
    views.push_back({j == 0 ? table : dilate_table(table, a), a});
  }
  return views;
}

class TreeSearch {
 public:
  TreeSearch(const ResidueTable& table, const SearchOptions& options)
      : table_(table), options_(options), views_(search_views(table, options.canonicalization)) {}

  VcResult run() {
    const auto start = Clock::now();
    const Elem q = table_.q;
    const bool rooted_pair = options_.canonicalization != Canonicalization::Translation;
    std::uint64_t nodes = 0;
    for (const auto& view : views_) {
      if (stop_.load()) break;
      std::vector<Elem> root = {0};
      if (rooted_pair && q > 1) root.push_back(1);
      nodes += search(view, root);
    }

    VcResult result;
    result.q = q;
    result.convention = table_.convention;
    result.vcdim = best_.load();
    result.alpha_q = result.vcdim / std::log2(static_cast<double>(q));
    result.witness = Subset(q, witness_);
    result.lower_bound = early_exit_hit_;
    result.nodes = nodes;
    result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    return result;
  }

 private:
  std::uint64_t search(const View& view, const std::vector<Elem>& root) {
    const Elem q = table_.q;
    // The root path is evaluated once here; workers replay it on their own stacks.
    SignatureStack main_stack(view.table);
    bool root_shattered = true;
    for (auto c : root) {
      if (main_stack.push(c) == 0) {
        root_shattered = false;
        break;
      }
      record(main_stack.elems(), view.scale);
    }
    std::uint64_t nodes = main_stack.nodes();
    if (!root_shattered || stop_.load()) return nodes;

    std::atomic<Elem> next{root.back() + 1};
    const int jobs = std::max(1, options_.jobs);
    std::vector<std::uint64_t> worker_nodes(static_cast<std::size_t>(jobs), 0);
    auto work = [&](int id) {
      SignatureStack stack(view.table);
      for (auto c : root) stack.push(c);
      while (!stop_.load(std::memory_order_relaxed)) {
        const Elem c = next.fetch_add(1);
        if (c >= q || !visit(stack, c, view.scale)) break;
      }
      worker_nodes[static_cast<std::size_t>(id)] = stack.nodes() - root.size();
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::jthread> threads;
      for (int i = 0; i < jobs; ++i) threads.emplace_back(work, i);
    }
    for (auto n : worker_nodes) nodes += n;
    return nodes;
  }

  // Visits the child Y + {c}. Returns false when the generation bound rules
  // out this child and every later sibling.
  bool visit(SignatureStack& stack, Elem c, Elem scale) {
    const Elem q = table_.q;
    const int m = stack.size() + 1;
    if (options_.generation_bound && m + static_cast<int>(q - 1 - c) <= best_.load()) return false;
    const auto min_count = stack.push(c);
    if (min_count > 0) {
      record(stack.elems(), scale);
      const bool may_improve = !options_.index_bound || m + floor_log2(min_count) > best_.load();
      if (c + 1 < q && may_improve && !stop_.load(std::memory_order_relaxed)) {
        for (Elem d = c + 1; d < q && !stop_.load(std::memory_order_relaxed); ++d) {
          if (!visit(stack, d, scale)) break;
        }
      }
    }
    stack.pop();
    return true;
  }

  void record(const std::vector<Elem>& ys, Elem scale) {
    const int m = static_cast<int>(ys.size());
    if (m <= best_.load()) return;
    std::lock_guard lock(mutex_);
    if (m <= best_.load()) return;
    best_.store(m);
    witness_.clear();
    for (auto y : ys) witness_.push_back(static_cast<Elem>(std::uint64_t{scale} * y % table_.q));
    if (options_.early_exit_at && m >= *options_.early_exit_at) {
      early_exit_hit_ = true;
      stop_.store(true);
    }
  }

  const ResidueTable& table_;
  SearchOptions options_;
  std::vector<View> views_;
  std::atomic<int> best_{0};
  std::atomic<bool> stop_{false};
  std::mutex mutex_;
  std::vector<Elem> witness_;
  bool early_exit_hit_ = false;
};

void check_search_modulus(std::uint64_t q) {
  if (q < 5 && is_prime(q)) throw Error(ErrorCode::TooSmall, "q must be at least 5");
}

// Checks every superset of the current stack with elements >= start, up to
// size `limit`; lowers `limit` below the size of each non-shattered set.
void check_supersets(SignatureStack& stack, Elem q, Elem start, int& limit) {
  for (Elem c = start; c < q && stack.size() < limit; ++c) {
    if (stack.push(c) == 0) {
      limit = std::min(limit, stack.size() - 1);
    } else if (stack.size() < limit) {
      check_supersets(stack, q, c + 1, limit);
    }
    stack.pop();
  }
}

bool affine_invariant(const ResidueTable& table) {
  return table.convention == ZeroConvention::Strict && table.r == 2;
}

}  // namespace

VcResult vc_dimension(const ResidueTable& table, const SearchOptions& options) {
  return TreeSearch(table, options).run();
}

VcResult vc_dimension(std::uint64_t q, const SearchOptions& options) {
  check_search_modulus(q);
  const auto field = make_field(q);
  return vc_dimension(squares(field, options.convention), options);
}

int testing_dimension(const ResidueTable& table, int cap) {
  if (cap < 0) throw Error(ErrorCode::InvalidArgument, "cap must be non-negative");
  int limit = cap;
  if (limit == 0) return 0;
  SignatureStack stack(table);
  // Every singleton is a translate of {0}.
  if (stack.push(0) == 0) return 0;
  if (limit == 1) return 1;
  if (affine_invariant(table)) {
    // Every pair is an affine image of {0, 1}.
    if (stack.push(1) == 0) return 1;
    check_supersets(stack, table.q, 2, limit);
  } else {
    check_supersets(stack, table.q, 1, limit);
  }
  return limit;
}

int testing_dimension(std::uint64_t q, ZeroConvention convention, int cap) {
  check_search_modulus(q);
  const auto field = make_field(q);
  return testing_dimension(squares(field, convention), cap);
}

ApResult longest_shattered_ap(const ResidueTable& table) {
  const Elem q = table.q;
  int n = floor_log2(q);
  auto patterns = realized_patterns(progression(q, n), table);
  while (!patterns.all()) {
    patterns = fold_patterns(patterns);
    --n;
    if (table.convention == ZeroConvention::Strict) {
      // The dropped element n is an allowed translate for the shorter prefix.
      std::uint64_t sig = 0;
      for (int i = 0; i < n; ++i) sig |= std::uint64_t{table.member[(static_cast<Elem>(i) + q - n) % q]} << i;
      patterns.bits[sig] = 1;
    }
  }
  return {q, n, n / std::log2(static_cast<double>(q)), table.convention};
}

ApResult longest_shattered_ap(std::uint64_t q, ZeroConvention convention) {
  check_search_modulus(q);
  const auto field = make_field(q);
  return longest_shattered_ap(squares(field, convention));
}

std::vector<SweepItem> vc_sweep(std::uint64_t q_lo, std::uint64_t q_hi, const SearchOptions& options,
                                EarlyExitPolicy policy, int jobs, const std::vector<Elem>& skip,
                                const std::function<void(const SweepItem&)>& on_item) {
  std::vector<SweepItem> items;
  if (q_lo > q_hi) throw Error(ErrorCode::InvalidArgument, "empty range: q_lo > q_hi");
  for (auto q : primes_in(q_lo, q_hi)) {
    if (std::find(skip.begin(), skip.end(), q) == skip.end()) items.push_back({static_cast<Elem>(q), {}, {}});
  }

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
      auto& item = items[i];
      auto local = options;
      local.jobs = 1;
      if (policy == EarlyExitPolicy::FloorLog2Minus1) local.early_exit_at = floor_log2(item.q) - 1;
      try {
        item.result = vc_dimension(item.q, local);
      } catch (const Error& e) {
        item.error = e.what();
      }
      if (on_item) {
        std::lock_guard lock(mutex);
        on_item(item);
      }
    }
  };
  if (jobs <= 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (int i = 0; i < jobs; ++i) threads.emplace_back(work);
  }
  return items;
}

}  // namespace qrvc
