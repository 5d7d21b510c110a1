#include "cgrs/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cgrs/errors.hpp"

namespace cgrs {

namespace {

struct ExtendedTrain {
  std::vector<ItemId> items;     // train part plus the new item, ascending
  std::vector<double> weights;   // new item carries weight 1
  std::size_t new_item_pos = 0;
};

ExtendedTrain extend_train(const WeightedProfile& train_part, ItemId new_item) {
  ExtendedTrain ext;
  const auto& items = train_part.items();
  const auto& weights = train_part.weights();
  ext.items.reserve(items.size() + 1);
  ext.weights.reserve(items.size() + 1);
  std::size_t i = 0;
  for (; i < items.size() && items[i] < new_item; ++i) {
    ext.items.push_back(items[i]);
    ext.weights.push_back(weights[i]);
  }
  ext.new_item_pos = ext.items.size();
  ext.items.push_back(new_item);
  ext.weights.push_back(1.0);
  for (; i < items.size(); ++i) {
    ext.items.push_back(items[i]);
    ext.weights.push_back(weights[i]);
  }
  return ext;
}

/// w_i * P(item_i | target) for every extended-train item, zeros when either
/// the pair never co-occurred or the target has no support.
std::vector<double> weighted_probs(const StatIndex& index, const ExtendedTrain& ext,
                                   ItemId target) {
  std::vector<double> wps(ext.items.size(), 0.0);
  const std::int64_t td = index.dense_of(target);
  const std::uint32_t sup = td < 0 ? 0 : index.support_at(static_cast<std::uint32_t>(td));
  if (sup == 0) return wps;
  const double inv_sup = 1.0 / static_cast<double>(sup);
  for (std::size_t i = 0; i < ext.items.size(); ++i) {
    std::int64_t d = index.dense_of(ext.items[i]);
    if (d < 0) continue;
    std::uint32_t co = index.co_at(static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(td));
    wps[i] = ext.weights[i] * (static_cast<double>(co) * inv_sup);
  }
  return wps;
}

}  // namespace

AlphaRow nonconformity(const StatIndex& index, const WeightedProfile& train_part,
                       ItemId new_item, ItemId target) {
  if (train_part.contains(new_item)) {
    throw contract_error("new item already in the training part");
  }
  if (train_part.contains(target)) {
    throw contract_error("calibration target overlaps the training part");
  }
  if (new_item == target) {
    throw contract_error("new item and calibration target must differ");
  }

  ExtendedTrain ext = extend_train(train_part, new_item);
  AlphaRow row;
  row.target = target;
  row.items = ext.items;
  row.weighted_prob = weighted_probs(index, ext, target);

  const std::uint32_t target_sup = index.support(target);
  const std::size_t m = ext.items.size();
  row.alpha.assign(m, 0.0);
  if (target_sup == 0) {
    row.degenerate = true;
    return row;
  }

  // leave-one-out products by prefix/suffix, so exact zeros need no division
  const double prior = static_cast<double>(target_sup) / static_cast<double>(index.n_users());
  std::vector<double> prefix(m + 1, 1.0), suffix(m + 1, 1.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * row.weighted_prob[i];
  for (std::size_t i = m; i > 0; --i) suffix[i - 1] = suffix[i] * row.weighted_prob[i - 1];
  for (std::size_t i = 0; i < m; ++i) row.alpha[i] = prior * prefix[i] * suffix[i + 1];
  return row;
}

double p_value_pair(std::span<const double> weighted_probs, std::size_t new_item_pos) {
  if (new_item_pos >= weighted_probs.size()) {
    throw contract_error("new item position outside the weighted probability row");
  }
  const double own = weighted_probs[new_item_pos];
  std::size_t count = 0;
  for (double v : weighted_probs) {
    if (v <= own) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(weighted_probs.size());
}

namespace {

struct TargetTable {
  std::int64_t dense = -1;
  double inv_sup = 0.0;
  std::vector<double> sorted_train_wps;
};

/// Per-target constants shared by every candidate: the training part's
/// weighted probabilities, sorted for rank counting.
std::vector<TargetTable> build_target_tables(const StatIndex& index,
                                             const VirtualProfile& vp) {
  const auto& items = vp.train_part.items();
  const auto& weights = vp.train_part.weights();
  std::vector<std::int64_t> train_dense(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) train_dense[i] = index.dense_of(items[i]);

  std::vector<TargetTable> tables;
  tables.reserve(vp.calib_part.size());
  for (ItemId target : vp.calib_part) {
    TargetTable t;
    t.dense = index.dense_of(target);
    const std::uint32_t sup = t.dense < 0 ? 0 : index.support_at(static_cast<std::uint32_t>(t.dense));
    t.sorted_train_wps.assign(items.size(), 0.0);
    if (sup > 0) {
      t.inv_sup = 1.0 / static_cast<double>(sup);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (train_dense[i] < 0) continue;
        std::uint32_t co = index.co_at(static_cast<std::uint32_t>(train_dense[i]),
                                       static_cast<std::uint32_t>(t.dense));
        t.sorted_train_wps[i] = weights[i] * (static_cast<double>(co) * t.inv_sup);
      }
    }
    std::sort(t.sorted_train_wps.begin(), t.sorted_train_wps.end());
    tables.push_back(std::move(t));
  }
  return tables;
}

double candidate_wp(const StatIndex& index, const TargetTable& t, std::int64_t cand_dense) {
  if (t.dense < 0 || cand_dense < 0 || t.inv_sup == 0.0) return 0.0;
  std::uint32_t co =
      index.co_at(static_cast<std::uint32_t>(cand_dense), static_cast<std::uint32_t>(t.dense));
  return static_cast<double>(co) * t.inv_sup;
}

}  // namespace

double p_value(const StatIndex& index, const VirtualProfile& virtual_profile, ItemId candidate) {
  if (virtual_profile.weighted_items.contains(candidate)) {
    throw contract_error("candidate " + std::to_string(candidate) + " is in the virtual profile");
  }
  const std::size_t k = virtual_profile.calib_part.size();
  if (k == 0) throw degenerate_profile_error("virtual profile has no calibration items");

  const std::vector<TargetTable> tables = build_target_tables(index, virtual_profile);
  const std::int64_t cd = index.dense_of(candidate);
  const double denom = static_cast<double>(virtual_profile.train_part.size()) + 1.0;
  double acc = 0.0;
  for (const TargetTable& t : tables) {
    const double wp = candidate_wp(index, t, cd);
    const auto& s = t.sorted_train_wps;
    const std::size_t count =
        1 + static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), wp) - s.begin());
    acc += static_cast<double>(count) / denom;
  }
  return acc / static_cast<double>(k);
}

std::vector<ItemId> ConformalOutput::ranking() const {
  std::vector<ItemId> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(r.item);
  return out;
}

std::vector<ItemId> ConformalOutput::region() const {
  std::vector<ItemId> out;
  for (const auto& r : ranked) {
    if (r.in_region) out.push_back(r.item);
  }
  return out;
}

double ConformalOutput::p_of(ItemId item) const {
  for (const auto& r : ranked) {
    if (r.item == item) return r.p;
  }
  throw contract_error("item " + std::to_string(item) + " was not a candidate");
}

ConformalOutput recommend_cgrs(const StatIndex& index, const VirtualProfile& virtual_profile,
                               std::span<const ItemId> pool, double epsilon,
                               std::span<const RelevanceScore> pool_scores) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw config_error("epsilon must lie in [0,1]");
  }
  if (pool_scores.size() != pool.size()) {
    throw contract_error("pool_scores must align with the candidate pool");
  }
  const std::size_t k = virtual_profile.calib_part.size();
  if (k == 0) throw degenerate_profile_error("virtual profile has no calibration items");

  const std::vector<TargetTable> tables = build_target_tables(index, virtual_profile);
  const double denom = static_cast<double>(virtual_profile.train_part.size()) + 1.0;

  ConformalOutput out;
  out.epsilon = epsilon;
  out.ranked.reserve(pool.size());
  for (std::size_t c = 0; c < pool.size(); ++c) {
    if (virtual_profile.weighted_items.contains(pool[c])) {
      throw contract_error("candidate " + std::to_string(pool[c]) + " is in the virtual profile");
    }
    if (pool_scores[c].item != pool[c]) {
      throw contract_error("pool_scores must align with the candidate pool");
    }
    const std::int64_t cd = index.dense_of(pool[c]);
    double acc = 0.0;
    for (const TargetTable& t : tables) {
      const double wp = candidate_wp(index, t, cd);
      const auto& s = t.sorted_train_wps;
      const std::size_t count =
          1 + static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), wp) - s.begin());
      acc += static_cast<double>(count) / denom;
    }
    const double p = acc / static_cast<double>(k);
    out.ranked.push_back({pool[c], p, pool_scores[c].score, p > epsilon});
  }

  std::sort(out.ranked.begin(), out.ranked.end(),
            [&index](const CandidateResult& a, const CandidateResult& b) {
              if (a.p != b.p) return a.p > b.p;
              if (a.score != b.score) return a.score > b.score;
              std::uint32_t sa = index.support(a.item), sb = index.support(b.item);
              if (sa != sb) return sa > sb;
              return a.item < b.item;
            });
  return out;
}

ConformalOutput recommend_cgrs(const StatIndex& index, const VirtualProfile& virtual_profile,
                               std::span<const ItemId> pool, double epsilon, ScoreModel model) {
  std::vector<RelevanceScore> scores =
      score_pool(index, virtual_profile.weighted_items, pool, model);
  return recommend_cgrs(index, virtual_profile, pool, epsilon, scores);
}

std::vector<RelevanceScore> recommend_grs(const StatIndex& index,
                                          const VirtualProfile& virtual_profile,
                                          std::span<const ItemId> pool, ScoreModel model) {
  return rank_candidates(index, virtual_profile.weighted_items, pool, model);
}

void write_region_csv(const ConformalOutput& output, std::ostream& out) {
  out << "candidate_id,p_value,am_score,in_region\n";
  char buf[64];
  for (const auto& r : output.ranked) {
    std::snprintf(buf, sizeof(buf), "%.5f", r.p);
    out << r.item << ',' << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.score);
    out << buf << ',' << (r.in_region ? 1 : 0) << '\n';
  }
}

}  // namespace cgrs
