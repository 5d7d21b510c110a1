#pragma once

#include <cstdint>
#include <vector>

#include "cgrs/scoring.hpp"

namespace cgrs {

struct Group {
  std::vector<UserId> members;  // ascending, distinct
  std::size_t size() const { return members.size(); }
};

/// g distinct users drawn uniformly without replacement. Deterministic for a
/// given seed.
Group form_random_group(const Dataset& dataset, std::size_t g, std::uint64_t seed);

/// Rejection-samples random groups until every member shares enough of the
/// group's common train items: with I the intersection of all members' train
/// sets, each member u must satisfy |I| / |train(u)| >= 1 / (2g), boundary
/// inclusive. Throws no_homogeneous_group after max_attempts rejections.
Group form_homogeneous_group(const Dataset& dataset, std::size_t g, std::uint64_t seed,
                             std::size_t max_attempts = 100000);

/// True when the group satisfies the shared-items criterion above.
bool is_homogeneous(const Dataset& dataset, const Group& group);

/// Group preference weight of an item: members who consumed it contribute 1,
/// the rest contribute their relevance score for it; the mean over members is
/// returned. The item must appear in at least one member's train set.
double group_weight(const StatIndex& index, const Dataset& dataset, const Group& group,
                    ItemId item, ScoreModel model = ScoreModel::association);

/// How retained items carry weight into the virtual profile.
enum class ProfileStrategy {
  threshold_only,  // keep items above the threshold, all at weight 1
  weighted,        // keep every group item with its weight (threshold unused)
  hybrid,          // keep items above the threshold, with their weights
};

/// A group collapsed to one weighted pseudo-user, split into the part that
/// plays the training role and the held-out calibration items.
struct VirtualProfile {
  WeightedProfile weighted_items;   // every retained item with its weight
  WeightedProfile train_part;
  std::vector<ItemId> calib_part;   // ascending; weights are not carried here
  double threshold = 0.0;
};

/// Weighs every item consumed by at least one member, drops those at or below
/// tau (strategy permitting), and randomly assigns floor(calib_fraction * n)
/// of the survivors to the calibration part. Deterministic for a given seed.
/// Throws empty_profile_error / degenerate_profile_error when nothing (or too
/// little) survives.
VirtualProfile build_virtual_profile(const StatIndex& index, const Dataset& dataset,
                                     const Group& group, double tau,
                                     double calib_fraction = 0.25, std::uint64_t seed = 0,
                                     ScoreModel model = ScoreModel::association,
                                     ProfileStrategy strategy = ProfileStrategy::hybrid);

}  // namespace cgrs
