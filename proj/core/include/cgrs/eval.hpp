#pragma once

#include <map>
#include <span>
#include <vector>

#include "cgrs/corpus.hpp"

namespace cgrs {

/// Items the group actually went on to consume, restricted to the candidate
/// pool. Instances with an empty (or pool-covering) truth set are skipped
/// upstream, never scored.
struct GroundTruth {
  std::vector<ItemId> relevant;  // ascending

  bool contains(ItemId item) const;
  std::size_t size() const { return relevant.size(); }
};

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Hits in the top K over K, over |relevant|, and their harmonic mean
/// (0 when both are 0). Requires K >= 1 and a non-empty truth set.
PRF precision_recall_f1(std::span<const ItemId> ranking, const GroundTruth& truth, std::size_t k);

/// Binary-relevance NDCG at K: each hit at 1-based rank i gains 1/log2(i+1),
/// normalized by the gain of packing all relevant items first.
double ndcg(std::span<const ItemId> ranking, const GroundTruth& truth, std::size_t k);

/// 1/rank of the first relevant item; 0 when the ranking holds none.
double reciprocal_rank(std::span<const ItemId> ranking, const GroundTruth& truth);

/// Mean of precision-at-hit over the first N positions, divided by the number
/// of relevant items.
double average_precision(std::span<const ItemId> ranking, const GroundTruth& truth, std::size_t n);

/// Probability that a relevant item outranks an irrelevant one, counted over
/// all pairs. Requires at least one of each.
double auc(std::span<const ItemId> ranking, const GroundTruth& truth);

struct MetricReport {
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, double> recall_at;
  std::map<std::size_t, double> f1_at;
  double ndcg = 0.0;  // over the full ranking
  double rr = 0.0;
  double ap = 0.0;    // over the full ranking
  double auc = 0.0;
};

/// One pass over the ranking computing everything above; ks gives the
/// precision/recall/f1 cutoffs.
MetricReport evaluate_ranking(std::span<const ItemId> ranking, const GroundTruth& truth,
                              std::span<const std::size_t> ks);

}  // namespace cgrs
