#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cgrs/corpus.hpp"

namespace cgrs {

/// Sparse per-item and per-pair consumption statistics.
///
/// Keeps, for every item, the number of users who consumed it (support); for
/// every unordered pair, the number of users who consumed both (co-support,
/// stored once per pair); and for every ordered pair, the number of users who
/// consumed the first strictly before the second (stored per direction, the
/// two directions partitioning the pair's co-support). Immutable once built;
/// concurrent readers need no synchronization.
class StatIndex {
 public:
  struct PairCount {
    ItemId first = 0;
    ItemId second = 0;
    std::uint32_t count = 0;
  };

  StatIndex() = default;

  /// Counts over each user's train prefix (or the whole profile when
  /// use_train_only is false). Consumption order within a profile defines
  /// precedence; items of the dataset universe that nobody consumed get
  /// support 0.
  static StatIndex build(const Dataset& dataset, bool use_train_only = true);

  /// Builds an index from explicit counts (fixtures, externally computed
  /// matrices). co_support lists each unordered pair once, in either order;
  /// self pairs are implied by support and rejected if passed. When the
  /// precedence list is empty, each pair's co-support is assigned to its
  /// ascending-id direction so that the ordered-pair partition still holds.
  static StatIndex from_counts(std::uint32_t n_users,
                               std::vector<std::pair<ItemId, std::uint32_t>> support,
                               std::vector<PairCount> co_support,
                               std::vector<PairCount> precedence = {});

  std::uint32_t n_users() const { return n_users_; }
  std::size_t n_items() const { return items_.size(); }
  const std::vector<ItemId>& items() const { return items_; }

  std::uint32_t support(ItemId item) const;
  std::uint32_t co_support(ItemId a, ItemId b) const;
  /// Users who consumed `before` strictly earlier than `after`.
  std::uint32_t precedence_count(ItemId before, ItemId after) const;

  /// P(i | given) = co_support(i, given) / support(given).
  /// Throws undefined_conditional when support(given) is zero.
  double cond_prob(ItemId i, ItemId given) const;

  /// PP(i | given) = precedence_count(i, given) / support(given).
  double precedence_prob(ItemId i, ItemId given) const;

  std::uint64_t co_pair_count() const { return co_col_.size(); }
  std::uint64_t precedence_pair_count() const { return pr_col_.size(); }
  /// Footprint of the frozen arrays; grows with nonzero pairs, not items^2.
  std::uint64_t approx_bytes() const;

  /// Versioned binary cache, stamped with the source dataset's content hash.
  void save(std::ostream& out, std::uint64_t dataset_hash) const;
  static StatIndex load(std::istream& in);
  std::uint64_t dataset_hash() const { return dataset_hash_; }

  // Dense-id fast path for scoring loops. Dense ids follow ascending item id.
  std::int64_t dense_of(ItemId item) const;
  std::uint32_t support_at(std::uint32_t dense) const { return support_[dense]; }
  std::uint32_t co_at(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t prec_at(std::uint32_t before, std::uint32_t after) const;

 private:
  static StatIndex freeze(std::uint32_t n_users, std::vector<ItemId> items,
                          std::vector<std::uint32_t> support,
                          std::vector<std::uint64_t>& co_keys,
                          std::vector<std::uint32_t>& co_counts,
                          std::vector<std::uint64_t>& pr_keys,
                          std::vector<std::uint32_t>& pr_counts);

  std::uint32_t n_users_ = 0;
  std::uint64_t dataset_hash_ = 0;
  std::vector<ItemId> items_;            // ascending
  std::vector<std::uint32_t> support_;   // by dense id

  // CSR over dense ids. Co-support rows hold only columns > row (one entry
  // per unordered pair); precedence rows hold every later item of the pair.
  std::vector<std::uint64_t> co_off_;
  std::vector<std::uint32_t> co_col_;
  std::vector<std::uint32_t> co_cnt_;
  std::vector<std::uint64_t> pr_off_;
  std::vector<std::uint32_t> pr_col_;
  std::vector<std::uint32_t> pr_cnt_;
};

}  // namespace cgrs
