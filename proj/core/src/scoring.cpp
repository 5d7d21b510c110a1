#include "cgrs/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cgrs/errors.hpp"

namespace cgrs {

namespace {

// beyond this many factors the plain product risks drifting toward denormals
constexpr std::size_t kPlainProductLimit = 30;

}  // namespace

WeightedProfile WeightedProfile::uniform(std::vector<ItemId> items) {
  std::vector<std::pair<ItemId, double>> entries;
  entries.reserve(items.size());
  for (ItemId it : items) entries.emplace_back(it, 1.0);
  return from_entries(std::move(entries));
}

WeightedProfile WeightedProfile::from_entries(std::vector<std::pair<ItemId, double>> entries) {
  std::sort(entries.begin(), entries.end());
  WeightedProfile p;
  p.items_.reserve(entries.size());
  p.weights_.reserve(entries.size());
  for (const auto& [item, w] : entries) {
    if (!p.items_.empty() && p.items_.back() == item) {
      throw contract_error("duplicate item in weighted profile: " + std::to_string(item));
    }
    if (!(w > 0.0 && w <= 1.0)) {
      throw contract_error("profile weight outside (0,1] for item " + std::to_string(item));
    }
    p.items_.push_back(item);
    p.weights_.push_back(w);
  }
  return p;
}

bool WeightedProfile::contains(ItemId item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

namespace detail {

DenseProfile resolve(const StatIndex& index, const WeightedProfile& profile) {
  DenseProfile dp;
  dp.dense.reserve(profile.size());
  dp.weights.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    std::int64_t d = index.dense_of(profile.items()[i]);
    if (d < 0) {
      dp.has_unknown_item = true;
      continue;
    }
    dp.dense.push_back(static_cast<std::uint32_t>(d));
    dp.weights.push_back(profile.weights()[i]);
  }
  return dp;
}

double score_dense(const StatIndex& index, const DenseProfile& profile, std::uint32_t candidate,
                   ScoreModel model) {
  const std::uint32_t sup = index.support_at(candidate);
  if (sup == 0 || profile.has_unknown_item) return 0.0;
  const double prior =
      static_cast<double>(sup) / static_cast<double>(index.n_users());
  const double inv_sup = 1.0 / static_cast<double>(sup);

  auto pair_count = [&](std::uint32_t other) {
    return model == ScoreModel::association ? index.co_at(other, candidate)
                                            : index.prec_at(other, candidate);
  };

  if (profile.dense.size() <= kPlainProductLimit) {
    double score = prior;
    for (std::size_t i = 0; i < profile.dense.size(); ++i) {
      std::uint32_t c = pair_count(profile.dense[i]);
      if (c == 0) return 0.0;
      score *= profile.weights[i] * (static_cast<double>(c) * inv_sup);
    }
    return score;
  }

  double log_score = std::log(prior);
  const double log_sup = std::log(static_cast<double>(sup));
  for (std::size_t i = 0; i < profile.dense.size(); ++i) {
    std::uint32_t c = pair_count(profile.dense[i]);
    if (c == 0) return 0.0;
    log_score += std::log(profile.weights[i]) + std::log(static_cast<double>(c)) - log_sup;
  }
  return std::exp(log_score);
}

}  // namespace detail

namespace {

RelevanceScore scored(const StatIndex& index, const WeightedProfile& profile, ItemId candidate,
                      ScoreModel model) {
  if (profile.contains(candidate)) {
    throw contract_error("candidate " + std::to_string(candidate) + " already in the profile");
  }
  std::int64_t d = index.dense_of(candidate);
  if (d < 0) return {candidate, 0.0};
  detail::DenseProfile dp = detail::resolve(index, profile);
  return {candidate, detail::score_dense(index, dp, static_cast<std::uint32_t>(d), model)};
}

}  // namespace

RelevanceScore am_score(const StatIndex& index, const WeightedProfile& profile, ItemId candidate) {
  return scored(index, profile, candidate, ScoreModel::association);
}

RelevanceScore pm_score(const StatIndex& index, const WeightedProfile& profile, ItemId candidate) {
  return scored(index, profile, candidate, ScoreModel::precedence);
}

RelevanceScore relevance_score(const StatIndex& index, const WeightedProfile& profile,
                               ItemId candidate, ScoreModel model) {
  return scored(index, profile, candidate, model);
}

std::vector<RelevanceScore> score_pool(const StatIndex& index, const WeightedProfile& profile,
                                       std::span<const ItemId> pool, ScoreModel model) {
  detail::DenseProfile dp = detail::resolve(index, profile);
  std::vector<RelevanceScore> out;
  out.reserve(pool.size());
  for (ItemId c : pool) {
    if (profile.contains(c)) {
      throw contract_error("pool overlaps the profile at item " + std::to_string(c));
    }
    std::int64_t d = index.dense_of(c);
    double s = d < 0 ? 0.0
                     : detail::score_dense(index, dp, static_cast<std::uint32_t>(d), model);
    out.push_back({c, s});
  }
  return out;
}

void sort_by_relevance(std::vector<RelevanceScore>& scores, const StatIndex& index) {
  std::sort(scores.begin(), scores.end(),
            [&index](const RelevanceScore& a, const RelevanceScore& b) {
              if (a.score != b.score) return a.score > b.score;
              std::uint32_t sa = index.support(a.item), sb = index.support(b.item);
              if (sa != sb) return sa > sb;
              return a.item < b.item;
            });
}

std::vector<RelevanceScore> rank_candidates(const StatIndex& index, const WeightedProfile& profile,
                                            std::span<const ItemId> pool, ScoreModel model) {
  std::vector<RelevanceScore> out = score_pool(index, profile, pool, model);
  sort_by_relevance(out, index);
  return out;
}

}  // namespace cgrs
