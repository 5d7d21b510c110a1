#pragma once

#include <span>
#include <vector>

#include "cgrs/stats.hpp"

namespace cgrs {

/// Relevance model used wherever a score is needed: association keeps
/// co-consumption probabilities, precedence keeps strict consumption order.
enum class ScoreModel { association, precedence };

/// Items with weights in (0,1], kept in ascending item order so every product
/// over the profile is evaluated in one canonical sequence.
class WeightedProfile {
 public:
  WeightedProfile() = default;

  /// All weights 1 (a plain profile).
  static WeightedProfile uniform(std::vector<ItemId> items);
  static WeightedProfile from_entries(std::vector<std::pair<ItemId, double>> entries);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<ItemId>& items() const { return items_; }
  const std::vector<double>& weights() const { return weights_; }
  bool contains(ItemId item) const;

 private:
  std::vector<ItemId> items_;    // ascending
  std::vector<double> weights_;  // parallel to items_
};

struct RelevanceScore {
  ItemId item = 0;
  double score = 0.0;
};

namespace detail {

/// Profile resolved against an index's dense ids; build once, score many.
struct DenseProfile {
  std::vector<std::uint32_t> dense;  // ascending
  std::vector<double> weights;
  bool has_unknown_item = false;  // an item outside the index zeroes everything
};

DenseProfile resolve(const StatIndex& index, const WeightedProfile& profile);

/// Score of a candidate (by dense id) for a resolved profile. The popularity
/// prior support/n_users is multiplied by one weighted probability factor per
/// profile item, ascending item order, exact-zero short circuit. Profiles
/// longer than 30 items are evaluated in log space to dodge underflow; the
/// rankings and thresholds downstream only consume relative order.
double score_dense(const StatIndex& index, const DenseProfile& profile, std::uint32_t candidate,
                   ScoreModel model);

}  // namespace detail

/// Association-mining relevance: prior times the probability of each profile
/// item conditioned on the candidate. Candidate must not sit in the profile;
/// zero-support candidates score 0.
RelevanceScore am_score(const StatIndex& index, const WeightedProfile& profile, ItemId candidate);

/// Precedence-mining relevance: prior times the probability of each profile
/// item being consumed before the candidate.
RelevanceScore pm_score(const StatIndex& index, const WeightedProfile& profile, ItemId candidate);

RelevanceScore relevance_score(const StatIndex& index, const WeightedProfile& profile,
                               ItemId candidate, ScoreModel model);

/// Scores every pool item, preserving pool order.
std::vector<RelevanceScore> score_pool(const StatIndex& index, const WeightedProfile& profile,
                                       std::span<const ItemId> pool, ScoreModel model);

/// Ranking order: score desc, then support desc, then item id asc. The
/// support tie-break mainly orders the zero-score tail.
void sort_by_relevance(std::vector<RelevanceScore>& scores, const StatIndex& index);

/// score_pool followed by sort_by_relevance.
std::vector<RelevanceScore> rank_candidates(const StatIndex& index, const WeightedProfile& profile,
                                            std::span<const ItemId> pool, ScoreModel model);

}  // namespace cgrs
