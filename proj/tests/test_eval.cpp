#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cgrs/errors.hpp"
#include "cgrs/eval.hpp"
#include "cgrs/rng.hpp"

using namespace cgrs;

namespace {

GroundTruth truth_of(std::vector<ItemId> items) {
  std::sort(items.begin(), items.end());
  return GroundTruth{std::move(items)};
}

}  // namespace

TEST_CASE("precision/recall/f1: perfect, empty, and fractional hits") {
  std::vector<ItemId> ranking = {1, 2, 3, 4, 5, 6, 7, 8};

  PRF perfect = precision_recall_f1(ranking, truth_of({1, 2, 3}), 3);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  PRF none = precision_recall_f1(ranking, truth_of({7, 8}), 3);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);

  // K=5 with hits {2,4} out of 4 relevant: P=0.4, R=0.5, F1=4/9
  PRF frac = precision_recall_f1(ranking, truth_of({2, 4, 30, 40}), 5);
  CHECK(frac.precision == doctest::Approx(0.4));
  CHECK(frac.recall == doctest::Approx(0.5));
  CHECK(frac.f1 == doctest::Approx(4.0 / 9.0).epsilon(1e-12));

  CHECK_THROWS_AS(precision_recall_f1(ranking, truth_of({}), 3), contract_error);
  CHECK_THROWS_AS(precision_recall_f1(ranking, truth_of({1}), 0), contract_error);
}

TEST_CASE("ndcg: ideal, miss, and the single-hit-at-rank-2 value") {
  std::vector<ItemId> ranking = {1, 2, 3, 4};
  CHECK(ndcg(ranking, truth_of({1, 2}), 4) == doctest::Approx(1.0));
  CHECK(ndcg(ranking, truth_of({9}), 4) == 0.0);

  const double expected = std::log2(2.0) / std::log2(3.0);
  CHECK(std::abs(ndcg(ranking, truth_of({2}), 4) - expected) <= 1e-9);
  CHECK(std::abs(ndcg(ranking, truth_of({2}), 2) - expected) <= 1e-9);
}

TEST_CASE("reciprocal rank: first hit, deep hit, no hit") {
  std::vector<ItemId> ranking = {5, 6, 7, 8};
  CHECK(reciprocal_rank(ranking, truth_of({5, 8})) == 1.0);
  CHECK(reciprocal_rank(ranking, truth_of({8})) == doctest::Approx(0.25));
  CHECK(reciprocal_rank(ranking, truth_of({99})) == 0.0);
}

TEST_CASE("average precision: textbook cases") {
  std::vector<ItemId> ranking = {1, 2, 3, 4, 5};
  CHECK(average_precision(ranking, truth_of({1, 2}), 5) == doctest::Approx(1.0));
  CHECK(average_precision(ranking, truth_of({3}), 5) == doctest::Approx(1.0 / 3.0));
  // relevant at ranks 1 and 3: (1 + 2/3)/2 = 5/6
  CHECK(average_precision(ranking, truth_of({1, 3}), 5) ==
        doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("auc: separation, interleaving, and the pair-count oracle") {
  CHECK(auc(std::vector<ItemId>{1, 2, 3, 4}, truth_of({1, 2})) == 1.0);   // all relevant on top
  CHECK(auc(std::vector<ItemId>{1, 2, 3, 4}, truth_of({3, 4})) == 0.0);   // reversed
  // irrelevant, relevant, irrelevant, relevant: 1 concordant pair of 4
  CHECK(auc(std::vector<ItemId>{9, 1, 8, 2}, truth_of({1, 2})) == doctest::Approx(0.25));

  CHECK_THROWS_AS(auc(std::vector<ItemId>{1, 2}, truth_of({1, 2})), contract_error);
  CHECK_THROWS_AS(auc(std::vector<ItemId>{1, 2}, truth_of({})), contract_error);

  // brute-force pair enumeration on random rankings
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ItemId> ranking;
    for (ItemId i = 1; i <= 30; ++i) ranking.push_back(i);
    rng.shuffle(ranking);
    std::vector<ItemId> rel(ranking.begin(), ranking.begin() + 8);
    GroundTruth truth = truth_of(rel);

    std::size_t concordant = 0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      for (std::size_t j = 0; j < ranking.size(); ++j) {
        if (truth.contains(ranking[i]) && !truth.contains(ranking[j]) && i < j) ++concordant;
      }
    }
    const double expected = static_cast<double>(concordant) / (8.0 * 22.0);
    CHECK(auc(ranking, truth) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("auc of random rankings hovers at one half") {
  Rng rng(7);
  std::vector<ItemId> ranking;
  for (ItemId i = 1; i <= 20; ++i) ranking.push_back(i);
  GroundTruth truth = truth_of({1, 2, 3, 4, 5});
  double sum = 0.0;
  const int shuffles = 10000;
  for (int s = 0; s < shuffles; ++s) {
    rng.shuffle(ranking);
    sum += auc(ranking, truth);
  }
  // mean of U/(m*n) over uniform shuffles is 1/2; se ~ 0.0015 here
  CHECK(std::abs(sum / shuffles - 0.5) < 0.006);
}

TEST_CASE("metrics ignore item relabeling") {
  std::vector<ItemId> ranking = {3, 1, 4, 1599, 2, 6};
  GroundTruth truth = truth_of({1, 2});
  auto relabel = [](ItemId x) { return x * 1000 + 7; };
  std::vector<ItemId> ranking2;
  for (ItemId x : ranking) ranking2.push_back(relabel(x));
  GroundTruth truth2 = truth_of({relabel(1), relabel(2)});

  std::vector<std::size_t> ks = {1, 3, 5};
  MetricReport a = evaluate_ranking(ranking, truth, ks);
  MetricReport b = evaluate_ranking(ranking2, truth2, ks);
  CHECK(a.ap == b.ap);
  CHECK(a.rr == b.rr);
  CHECK(a.auc == b.auc);
  CHECK(a.ndcg == b.ndcg);
  CHECK(a.precision_at == b.precision_at);
  CHECK(a.recall_at == b.recall_at);
}

TEST_CASE("hit counts recovered from precision and recall are consistent integers") {
  Rng rng(17);
  std::vector<ItemId> ranking;
  for (ItemId i = 1; i <= 40; ++i) ranking.push_back(i);
  for (int trial = 0; trial < 30; ++trial) {
    rng.shuffle(ranking);
    std::vector<ItemId> rel(ranking.begin(), ranking.begin() + 6);
    GroundTruth truth = truth_of(rel);
    for (std::size_t k : {1u, 5u, 13u, 40u}) {
      PRF prf = precision_recall_f1(ranking, truth, k);
      const double hits_p = prf.precision * static_cast<double>(k);
      const double hits_r = prf.recall * static_cast<double>(truth.size());
      CHECK(hits_p == doctest::Approx(std::round(hits_p)).epsilon(1e-12));
      CHECK(hits_p == doctest::Approx(hits_r).epsilon(1e-12));
    }
  }
}

TEST_CASE("ideal rankings max out every metric; reversed AUC bottoms out") {
  std::vector<ItemId> ranking = {10, 11, 12, 13, 14, 15};
  GroundTruth truth = truth_of({10, 11, 12});
  std::vector<std::size_t> ks = {3};
  MetricReport m = evaluate_ranking(ranking, truth, ks);
  CHECK(m.ap == 1.0);
  CHECK(m.rr == 1.0);
  CHECK(m.ndcg == 1.0);
  CHECK(m.auc == 1.0);
  CHECK(m.precision_at.at(3) == 1.0);

  std::vector<ItemId> reversed = {13, 14, 15, 10, 11, 12};
  CHECK(evaluate_ranking(reversed, truth, ks).auc == 0.0);
}

TEST_CASE("evaluate_ranking matches the standalone metric functions") {
  Rng rng(23);
  std::vector<ItemId> ranking;
  for (ItemId i = 1; i <= 25; ++i) ranking.push_back(i);
  for (int trial = 0; trial < 20; ++trial) {
    rng.shuffle(ranking);
    std::vector<ItemId> rel(ranking.begin() + 3, ranking.begin() + 9);
    GroundTruth truth = truth_of(rel);
    std::vector<std::size_t> ks = {1, 2, 7, 25};
    MetricReport m = evaluate_ranking(ranking, truth, ks);
    CHECK(m.ap == doctest::Approx(average_precision(ranking, truth, 25)).epsilon(1e-14));
    CHECK(m.rr == reciprocal_rank(ranking, truth));
    CHECK(m.auc == doctest::Approx(auc(ranking, truth)).epsilon(1e-14));
    CHECK(m.ndcg == doctest::Approx(ndcg(ranking, truth, 25)).epsilon(1e-14));
    for (std::size_t k : ks) {
      PRF prf = precision_recall_f1(ranking, truth, k);
      CHECK(m.precision_at.at(k) == prf.precision);
      CHECK(m.recall_at.at(k) == prf.recall);
      CHECK(m.f1_at.at(k) == doctest::Approx(prf.f1).epsilon(1e-14));
    }
  }
}
