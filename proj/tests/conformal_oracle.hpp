#pragma once

// Randomized conformal fixtures with strictly positive, integer-exact
// factors, plus a brute-force leave-one-out oracle.
//
// Weights are dyadic (m/32) and co-supports integers, so every item's own
// factor against a target is proportional to X = m * co(item, target) with a
// shared denominator. The oracle multiplies leave-one-out products of the X
// values in 128-bit integers: exact, and fully independent of the production
// path. Fixtures are re-drawn until no X values tie, so no comparison can
// hinge on floating-point rounding of an exact tie.

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cgrs/grouping.hpp"
#include "cgrs/rng.hpp"
#include "cgrs/scoring.hpp"
#include "cgrs/stats.hpp"

namespace testsup {

struct ConformalFixture {
  cgrs::StatIndex index;
  std::vector<std::pair<cgrs::ItemId, int>> train;  // (item, m), weight = m/32
  std::vector<cgrs::ItemId> targets;
  std::vector<cgrs::ItemId> pool;  // candidate items, ids above every other item

  cgrs::WeightedProfile train_part() const {
    std::vector<std::pair<cgrs::ItemId, double>> entries;
    for (const auto& [item, m] : train) entries.emplace_back(item, m / 32.0);
    return cgrs::WeightedProfile::from_entries(std::move(entries));
  }

  cgrs::VirtualProfile virtual_profile() const {
    cgrs::VirtualProfile vp;
    vp.train_part = train_part();
    vp.calib_part = targets;
    std::vector<std::pair<cgrs::ItemId, double>> all;
    for (const auto& [item, m] : train) all.emplace_back(item, m / 32.0);
    for (cgrs::ItemId t : targets) all.emplace_back(t, 1.0);
    vp.weighted_items = cgrs::WeightedProfile::from_entries(std::move(all));
    return vp;
  }
};

inline ConformalFixture make_fixture(cgrs::Rng& rng, std::size_t n, std::size_t k,
                                     std::size_t n_pool = 1) {
  const std::size_t total = n + k + n_pool;
  std::vector<std::pair<cgrs::ItemId, std::uint32_t>> support;
  std::vector<cgrs::StatIndex::PairCount> co;
  for (std::size_t i = 1; i <= total; ++i) {
    support.emplace_back(static_cast<cgrs::ItemId>(i),
                         16 + static_cast<std::uint32_t>(rng.below(15)));
    for (std::size_t j = i + 1; j <= total; ++j) {
      co.push_back({static_cast<cgrs::ItemId>(i), static_cast<cgrs::ItemId>(j),
                    1 + static_cast<std::uint32_t>(rng.below(15))});
    }
  }

  ConformalFixture fx;
  fx.index = cgrs::StatIndex::from_counts(40, std::move(support), std::move(co));
  for (std::size_t i = n + 1; i <= n + k; ++i) fx.targets.push_back(static_cast<cgrs::ItemId>(i));
  for (std::size_t i = n + k + 1; i <= total; ++i) fx.pool.push_back(static_cast<cgrs::ItemId>(i));

  for (int attempt = 0; attempt < 500; ++attempt) {
    fx.train.clear();
    for (std::size_t i = 1; i <= n; ++i) {
      fx.train.emplace_back(static_cast<cgrs::ItemId>(i), 17 + static_cast<int>(rng.below(16)));
    }
    bool distinct = true;
    for (cgrs::ItemId target : fx.targets) {
      std::vector<std::uint64_t> xs;
      for (const auto& [item, m] : fx.train) {
        xs.push_back(static_cast<std::uint64_t>(m) * fx.index.co_support(item, target));
      }
      std::sort(xs.begin(), xs.end());
      distinct &= std::adjacent_find(xs.begin(), xs.end()) == xs.end();
      for (cgrs::ItemId cand : fx.pool) {
        const std::uint64_t own = 32ull * fx.index.co_support(cand, target);
        distinct &= !std::binary_search(xs.begin(), xs.end(), own);
      }
    }
    if (distinct) return fx;
  }
  throw std::runtime_error("could not build a tie-free conformal fixture");
}

using uint128 = unsigned __int128;

/// Brute-force pairwise p: expand every leave-one-out product over the
/// extended training set and count the ones at least as nonconforming as the
/// candidate's.
inline double oracle_pair_p(const ConformalFixture& fx, cgrs::ItemId candidate,
                            cgrs::ItemId target) {
  std::vector<std::pair<cgrs::ItemId, int>> ext = fx.train;
  ext.emplace_back(candidate, 32);
  std::sort(ext.begin(), ext.end());

  const std::size_t m = ext.size();
  std::vector<std::uint64_t> x(m);
  std::size_t cand_pos = 0;
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = static_cast<std::uint64_t>(ext[i].second) * fx.index.co_support(ext[i].first, target);
    if (ext[i].first == candidate) cand_pos = i;
  }
  std::vector<uint128> loo(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    uint128 prod = 1;
    for (std::size_t l = 0; l < m; ++l) {
      if (l != i) prod *= x[l];
    }
    loo[i] = prod;
  }
  std::size_t count = 0;
  for (const uint128& v : loo) {
    if (v >= loo[cand_pos]) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(m);
}

inline double oracle_avg_p(const ConformalFixture& fx, cgrs::ItemId candidate) {
  double acc = 0.0;
  for (cgrs::ItemId t : fx.targets) acc += oracle_pair_p(fx, candidate, t);
  return acc / static_cast<double>(fx.targets.size());
}

}  // namespace testsup
