#include "cgrs/eval.hpp"

#include <algorithm>
#include <cmath>

#include "cgrs/errors.hpp"

namespace cgrs {

namespace {

double log2_gain(std::size_t rank_1based) {
  return 1.0 / std::log2(static_cast<double>(rank_1based) + 1.0);
}

void require_truth(const GroundTruth& truth) {
  if (truth.relevant.empty()) {
    throw contract_error("metrics over an empty ground-truth set are undefined");
  }
}

}  // namespace

bool GroundTruth::contains(ItemId item) const {
  return std::binary_search(relevant.begin(), relevant.end(), item);
}

PRF precision_recall_f1(std::span<const ItemId> ranking, const GroundTruth& truth, std::size_t k) {
  require_truth(truth);
  if (k == 0) throw contract_error("K must be at least 1");
  std::size_t hits = 0;
  const std::size_t depth = std::min(k, ranking.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (truth.contains(ranking[i])) ++hits;
  }
  PRF r;
  r.precision = static_cast<double>(hits) / static_cast<double>(k);
  r.recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

double ndcg(std::span<const ItemId> ranking, const GroundTruth& truth, std::size_t k) {
  require_truth(truth);
  const std::size_t depth = std::min(k, ranking.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (truth.contains(ranking[i])) dcg += log2_gain(i + 1);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, truth.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += log2_gain(i + 1);
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

double reciprocal_rank(std::span<const ItemId> ranking, const GroundTruth& truth) {
  require_truth(truth);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (truth.contains(ranking[i])) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double average_precision(std::span<const ItemId> ranking, const GroundTruth& truth,
                         std::size_t n) {
  require_truth(truth);
  const std::size_t depth = std::min(n, ranking.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (truth.contains(ranking[i])) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(truth.size());
}

double auc(std::span<const ItemId> ranking, const GroundTruth& truth) {
  require_truth(truth);
  const std::size_t m = truth.size();
  if (ranking.size() <= m) {
    throw contract_error("AUC needs at least one irrelevant candidate");
  }
  std::size_t rel_seen = 0;
  std::uint64_t above = 0;
  for (ItemId item : ranking) {
    if (truth.contains(item)) {
      ++rel_seen;
    } else {
      above += rel_seen;
    }
  }
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(ranking.size() - m);
  return static_cast<double>(above) / static_cast<double>(pairs);
}

MetricReport evaluate_ranking(std::span<const ItemId> ranking, const GroundTruth& truth,
                              std::span<const std::size_t> ks) {
  require_truth(truth);
  MetricReport report;

  // cumulative hits per rank, one sweep
  std::vector<std::size_t> hits_at(ranking.size() + 1, 0);
  double dcg = 0.0;
  double ap_sum = 0.0;
  std::uint64_t above = 0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const bool rel = truth.contains(ranking[i]);
    hits_at[i + 1] = hits_at[i] + (rel ? 1 : 0);
    if (rel) {
      dcg += log2_gain(i + 1);
      ap_sum += static_cast<double>(hits_at[i + 1]) / static_cast<double>(i + 1);
      if (report.rr == 0.0) report.rr = 1.0 / static_cast<double>(i + 1);
    } else {
      above += hits_at[i + 1];
    }
  }

  const std::size_t m = truth.size();
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(ranking.size(), m); ++i) idcg += log2_gain(i + 1);
  report.ndcg = idcg == 0.0 ? 0.0 : dcg / idcg;
  report.ap = ap_sum / static_cast<double>(m);
  if (ranking.size() <= m) {
    throw contract_error("AUC needs at least one irrelevant candidate");
  }
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(ranking.size() - m);
  report.auc = static_cast<double>(above) / static_cast<double>(pairs);

  for (std::size_t k : ks) {
    if (k == 0) continue;
    const std::size_t hits = hits_at[std::min(k, ranking.size())];
    const double p = static_cast<double>(hits) / static_cast<double>(k);
    const double r = static_cast<double>(hits) / static_cast<double>(m);
    report.precision_at[k] = p;
    report.recall_at[k] = r;
    report.f1_at[k] = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
  }
  return report;
}

}  // namespace cgrs
