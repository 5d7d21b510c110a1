#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace cgrs {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

/// One consumption event. Ratings are parsed and kept around but never feed
/// the statistics: an interaction is a binary presence signal.
struct Interaction {
  UserId user = 0;
  ItemId item = 0;
  double rating = 0.0;
  std::int64_t timestamp = 0;
};

enum class SourceFormat {
  tab_data,     // user<TAB>item<TAB>rating<TAB>timestamp, no header
  csv_ratings,  // header "userId,movieId,rating,timestamp"
};

/// Maps a CLI/config tag ("tab_data", "csv_ratings") to its enum.
SourceFormat source_format_from(std::string_view tag);

/// A user's distinct items in consumption order (ascending timestamp, ties by
/// ascending item id), with the chronological train/test split as a prefix
/// length.
struct UserProfile {
  UserId user = 0;
  std::vector<ItemId> items;         // consumption order
  std::size_t train_count = 0;       // length of the train prefix
  std::vector<ItemId> train_sorted;  // train prefix, ascending item id

  std::span<const ItemId> train_items() const {
    return {items.data(), train_count};
  }
  std::span<const ItemId> test_items() const {
    return {items.data() + train_count, items.size() - train_count};
  }
  bool in_train(ItemId item) const;
};

/// Immutable after construction; safe to share across threads.
struct Dataset {
  std::vector<UserProfile> profiles;  // ascending user id
  std::vector<ItemId> item_universe;  // ascending distinct item ids

  std::size_t n_users() const { return profiles.size(); }
  std::size_t n_items() const { return item_universe.size(); }
  const UserProfile* find_user(UserId user) const;
};

/// Reads one interaction per data row, preserving row order.
/// Throws parse_error (with the offending 1-based line) on malformed rows.
std::vector<Interaction> parse_interactions(std::istream& source, SourceFormat format);

/// Groups interactions into chronologically ordered profiles. Duplicate
/// (user,item) events keep the earliest timestamp; users with fewer than
/// min_profile distinct items are dropped; the item universe is recomputed
/// over the survivors. The result is unsplit (everything in the train prefix).
Dataset build_profiles(std::vector<Interaction> interactions, std::size_t min_profile = 20);

/// Deterministic chronological split: the earliest floor(train_fraction * n)
/// items of each profile become the train prefix, the remainder the test
/// suffix. Requires every profile to hold at least 2 items.
Dataset split_profiles(Dataset dataset, double train_fraction = 0.6);

/// Line-delimited profile cache: `user<TAB>item,item,...` in consumption
/// order, users ascending. Splits are not stored; re-split after loading.
void save_profile_cache(const Dataset& dataset, std::ostream& out);
Dataset load_profile_cache(std::istream& in);

/// FNV-1a over the cache serialization; used to invalidate stat-index caches.
std::uint64_t content_hash(const Dataset& dataset);

}  // namespace cgrs
