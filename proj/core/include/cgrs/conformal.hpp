#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cgrs/grouping.hpp"
#include "cgrs/scoring.hpp"

namespace cgrs {

/// Nonconformity of every item in the extended training part (train items
/// plus the tentative new item at weight 1) against one calibration target.
/// alpha[i] is the target's relevance score computed over everyone but item i,
/// so a high alpha marks an item whose own factor contributes little.
/// weighted_prob[i] is that own factor, the key the fast p-value path ranks
/// by: alpha[h] >= alpha[t] exactly when weighted_prob[h] <= weighted_prob[t]
/// as long as no factor is an exact zero.
struct AlphaRow {
  ItemId target = 0;
  std::vector<ItemId> items;          // extended training part, ascending
  std::vector<double> alpha;          // parallel to items
  std::vector<double> weighted_prob;  // parallel to items
  bool degenerate = false;            // target with zero support: all-zero row
};

AlphaRow nonconformity(const StatIndex& index, const WeightedProfile& train_part,
                       ItemId new_item, ItemId target);

/// Share of entries at most as large as the one at new_item_pos, out of all
/// of them. The entry compares against itself, so the result is always at
/// least 1/(n+1); exact zeros tie and count.
double p_value_pair(std::span<const double> weighted_probs, std::size_t new_item_pos);

/// Average over the calibration items of the pairwise p-values of the
/// candidate against the virtual profile's training part.
double p_value(const StatIndex& index, const VirtualProfile& virtual_profile, ItemId candidate);

struct CandidateResult {
  ItemId item = 0;
  double p = 0.0;
  double score = 0.0;  // relevance against the full weighted profile
  bool in_region = false;
};

/// Output for one significance level: candidates in ranked order (p desc,
/// score desc, support desc, id asc), with the confidence region
/// {candidate : p > epsilon}.
struct ConformalOutput {
  double epsilon = 0.0;
  std::vector<CandidateResult> ranked;

  std::vector<ItemId> ranking() const;
  std::vector<ItemId> region() const;  // in ranked order
  double p_of(ItemId item) const;      // throws contract_error if absent
};

/// Conformal recommendation over the candidate pool. Candidates must be
/// disjoint from every group member's train items (and therefore from the
/// virtual profile). Relevance scores for tie-breaking are computed against
/// the full weighted profile unless supplied.
ConformalOutput recommend_cgrs(const StatIndex& index, const VirtualProfile& virtual_profile,
                               std::span<const ItemId> pool, double epsilon,
                               ScoreModel model = ScoreModel::association);
ConformalOutput recommend_cgrs(const StatIndex& index, const VirtualProfile& virtual_profile,
                               std::span<const ItemId> pool, double epsilon,
                               std::span<const RelevanceScore> pool_scores);

/// Plain baseline: candidates ranked by relevance against the full weighted
/// profile, no split, no p-values.
std::vector<RelevanceScore> recommend_grs(const StatIndex& index,
                                          const VirtualProfile& virtual_profile,
                                          std::span<const ItemId> pool,
                                          ScoreModel model = ScoreModel::association);

/// One row per candidate in ranked order: candidate_id, p_value, am_score,
/// in_region.
void write_region_csv(const ConformalOutput& output, std::ostream& out);

}  // namespace cgrs
