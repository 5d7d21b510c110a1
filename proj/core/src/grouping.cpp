#include "cgrs/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgrs/errors.hpp"
#include "cgrs/rng.hpp"

namespace cgrs {

namespace {

Group draw_group(const Dataset& dataset, std::size_t g, Rng& rng) {
  auto idx = rng.sample_indices(dataset.n_users(), g);
  Group group;
  group.members.reserve(g);
  for (std::size_t i : idx) group.members.push_back(dataset.profiles[i].user);
  std::sort(group.members.begin(), group.members.end());
  return group;
}

const UserProfile& member_profile(const Dataset& dataset, UserId user) {
  const UserProfile* p = dataset.find_user(user);
  if (!p) throw contract_error("group member " + std::to_string(user) + " not in dataset");
  return *p;
}

}  // namespace

Group form_random_group(const Dataset& dataset, std::size_t g, std::uint64_t seed) {
  if (g < 2) throw contract_error("group size must be at least 2");
  if (g > dataset.n_users()) {
    throw contract_error("group size exceeds the number of users");
  }
  Rng rng(seed);
  return draw_group(dataset, g, rng);
}

bool is_homogeneous(const Dataset& dataset, const Group& group) {
  const std::size_t g = group.size();
  std::vector<const std::vector<ItemId>*> trains;
  trains.reserve(g);
  std::size_t max_train = 0;
  for (UserId u : group.members) {
    const auto& p = member_profile(dataset, u);
    trains.push_back(&p.train_sorted);
    max_train = std::max(max_train, p.train_sorted.size());
  }
  // intersect smallest-first so the working set only shrinks
  std::sort(trains.begin(), trains.end(),
            [](const auto* a, const auto* b) { return a->size() < b->size(); });

  std::vector<ItemId> common = *trains[0];
  std::vector<ItemId> next;
  for (std::size_t i = 1; i < trains.size(); ++i) {
    next.clear();
    std::set_intersection(common.begin(), common.end(), trains[i]->begin(), trains[i]->end(),
                          std::back_inserter(next));
    common.swap(next);
    // the member with the largest train set is the binding constraint
    if (2 * g * common.size() < max_train) return false;
  }
  return 2 * g * common.size() >= max_train;
}

Group form_homogeneous_group(const Dataset& dataset, std::size_t g, std::uint64_t seed,
                             std::size_t max_attempts) {
  if (g < 2) throw contract_error("group size must be at least 2");
  if (g > dataset.n_users()) {
    throw contract_error("group size exceeds the number of users");
  }
  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    Group group = draw_group(dataset, g, rng);
    if (is_homogeneous(dataset, group)) return group;
  }
  throw no_homogeneous_group("no qualifying group of size " + std::to_string(g) + " within " +
                             std::to_string(max_attempts) + " attempts");
}

namespace {

double weight_over_members(const StatIndex& index,
                           const std::vector<const UserProfile*>& members,
                           const std::vector<detail::DenseProfile>& dense_trains, ItemId item,
                           ScoreModel model) {
  std::int64_t d = index.dense_of(item);
  double sum = 0.0;
  bool consumed = false;
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (members[m]->in_train(item)) {
      sum += 1.0;
      consumed = true;
    } else if (d >= 0) {
      sum += detail::score_dense(index, dense_trains[m], static_cast<std::uint32_t>(d), model);
    }
  }
  if (!consumed) {
    throw contract_error("item " + std::to_string(item) + " consumed by no group member");
  }
  return sum / static_cast<double>(members.size());
}

}  // namespace

double group_weight(const StatIndex& index, const Dataset& dataset, const Group& group,
                    ItemId item, ScoreModel model) {
  std::vector<const UserProfile*> members;
  std::vector<detail::DenseProfile> dense_trains;
  for (UserId u : group.members) {
    const auto& p = member_profile(dataset, u);
    members.push_back(&p);
    dense_trains.push_back(
        detail::resolve(index, WeightedProfile::uniform(p.train_sorted)));
  }
  return weight_over_members(index, members, dense_trains, item, model);
}

VirtualProfile build_virtual_profile(const StatIndex& index, const Dataset& dataset,
                                     const Group& group, double tau, double calib_fraction,
                                     std::uint64_t seed, ScoreModel model,
                                     ProfileStrategy strategy) {
  if (!(calib_fraction >= 0.0 && calib_fraction < 1.0)) {
    throw config_error("calib_fraction must lie in [0,1)");
  }

  std::vector<const UserProfile*> members;
  std::vector<detail::DenseProfile> dense_trains;
  std::vector<ItemId> pool;
  for (UserId u : group.members) {
    const auto& p = member_profile(dataset, u);
    members.push_back(&p);
    dense_trains.push_back(detail::resolve(index, WeightedProfile::uniform(p.train_sorted)));
    pool.insert(pool.end(), p.train_sorted.begin(), p.train_sorted.end());
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (pool.empty()) throw empty_profile_error("group has no train items");

  const double effective_tau = strategy == ProfileStrategy::weighted ? 0.0 : tau;
  std::vector<std::pair<ItemId, double>> retained;
  retained.reserve(pool.size());
  for (ItemId item : pool) {
    double w = weight_over_members(index, members, dense_trains, item, model);
    if (w > effective_tau) {
      retained.emplace_back(item, strategy == ProfileStrategy::threshold_only ? 1.0 : w);
    }
  }
  if (retained.empty()) {
    throw empty_profile_error("every group item weighed at or below the threshold");
  }
  if (retained.size() < 2) {
    throw degenerate_profile_error("fewer than 2 retained items; nothing to split");
  }

  const std::size_t calib_n =
      static_cast<std::size_t>(calib_fraction * static_cast<double>(retained.size()));
  Rng rng(seed);
  rng.shuffle(retained);

  std::vector<std::pair<ItemId, double>> train_entries(retained.begin(),
                                                       retained.end() - static_cast<std::ptrdiff_t>(calib_n));
  std::vector<ItemId> calib;
  calib.reserve(calib_n);
  for (std::size_t i = retained.size() - calib_n; i < retained.size(); ++i) {
    calib.push_back(retained[i].first);
  }
  std::sort(calib.begin(), calib.end());

  VirtualProfile vp;
  vp.train_part = WeightedProfile::from_entries(std::move(train_entries));
  vp.weighted_items = WeightedProfile::from_entries(std::move(retained));
  vp.calib_part = std::move(calib);
  vp.threshold = effective_tau;
  return vp;
}

}  // namespace cgrs
