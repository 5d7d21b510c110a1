#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "cgrs/errors.hpp"
#include "cgrs/stats.hpp"
#include "test_support.hpp"

using namespace cgrs;

TEST_CASE("watch log: supports and precedence counts match hand tallies") {
  Dataset ds = testsup::watch_log_dataset();
  StatIndex ix = StatIndex::build(ds);

  CHECK(ix.n_users() == 9);
  CHECK(ix.support(4) == 6);
  CHECK(ix.support(2) == 6);
  CHECK(ix.precedence_count(5, 4) == 1);
  CHECK(ix.precedence_count(6, 4) == 2);
  CHECK(ix.precedence_count(3, 4) == 6);
  CHECK(ix.precedence_count(1, 4) == 1);
  CHECK(ix.co_support(1, 2) == 5);

  for (ItemId a = 1; a <= 6; ++a) {
    CHECK(ix.support(a) == testsup::log_support(a));
    for (ItemId b = 1; b <= 6; ++b) {
      CHECK(ix.co_support(a, b) == testsup::log_cosupport(a, b));
      CHECK(ix.precedence_count(a, b) == testsup::log_precedence(a, b));
    }
  }
}

TEST_CASE("watch log: conditional and precedence probabilities") {
  StatIndex ix = StatIndex::build(testsup::watch_log_dataset());
  CHECK(ix.precedence_prob(6, 4) == doctest::Approx(2.0 / 6.0));
  CHECK(ix.precedence_prob(3, 4) == doctest::Approx(1.0));
  CHECK(ix.cond_prob(1, 2) == doctest::Approx(5.0 / 6.0));
  CHECK(ix.cond_prob(4, 4) == doctest::Approx(1.0));
}

TEST_CASE("co-matrix fixture: conditionals read straight from the matrix") {
  StatIndex ix = testsup::co_matrix_index();
  CHECK(ix.n_users() == 30);
  CHECK(ix.co_support(1, 2) == 9);
  CHECK(ix.support(2) == 25);
  CHECK(ix.cond_prob(1, 2) == doctest::Approx(9.0 / 25.0));
  CHECK(ix.cond_prob(3, 3) == doctest::Approx(1.0));
}

TEST_CASE("conditionals against unconsumed items are undefined") {
  std::vector<std::pair<ItemId, std::uint32_t>> support = {{1, 3}, {2, 0}};
  StatIndex ix = StatIndex::from_counts(5, support, {});
  CHECK_THROWS_AS(ix.cond_prob(1, 2), undefined_conditional);
  CHECK_THROWS_AS(ix.precedence_prob(1, 2), undefined_conditional);
  CHECK(ix.cond_prob(2, 1) == doctest::Approx(0.0));
}

TEST_CASE("from_counts rejects inconsistent inputs") {
  using PC = StatIndex::PairCount;
  std::vector<std::pair<ItemId, std::uint32_t>> support = {{1, 3}, {2, 5}};
  CHECK_THROWS_AS(StatIndex::from_counts(5, {{1, 6}}, {}), contract_error);
  CHECK_THROWS_AS(StatIndex::from_counts(5, support, {PC{1, 2, 4}}), contract_error);
  CHECK_THROWS_AS(StatIndex::from_counts(5, support, {PC{1, 1, 2}}), contract_error);
  CHECK_THROWS_AS(StatIndex::from_counts(5, support, {PC{1, 3, 1}}), contract_error);
  // precedence must partition the pair's co-support
  CHECK_THROWS_AS(
      StatIndex::from_counts(5, support, {PC{1, 2, 3}}, {PC{1, 2, 1}, PC{2, 1, 1}}),
      contract_error);
  StatIndex ok = StatIndex::from_counts(5, support, {PC{1, 2, 3}}, {PC{1, 2, 1}, PC{2, 1, 2}});
  CHECK(ok.precedence_count(1, 2) == 1);
  CHECK(ok.precedence_count(2, 1) == 2);
}

namespace {

void check_invariants(const StatIndex& ix) {
  const auto& items = ix.items();
  for (ItemId a : items) {
    CHECK(ix.support(a) <= ix.n_users());
    CHECK(ix.co_support(a, a) == ix.support(a));
    for (ItemId b : items) {
      const auto co = ix.co_support(a, b);
      CHECK(co == ix.co_support(b, a));
      CHECK(co <= std::min(ix.support(a), ix.support(b)));
      if (a != b) {
        CHECK(ix.precedence_count(a, b) + ix.precedence_count(b, a) == co);
      }
    }
  }
}

}  // namespace

TEST_CASE("index invariants hold exhaustively on fixtures") {
  check_invariants(StatIndex::build(testsup::watch_log_dataset()));
  check_invariants(testsup::co_matrix_index());
}

TEST_CASE("index invariants hold on sampled synthetic data") {
  Dataset ds = split_profiles(testsup::synthetic_dataset(5, 80, 50, 20));
  StatIndex ix = StatIndex::build(ds);
  check_invariants(ix);

  // train-only by default: per-item support equals distinct train consumers
  std::size_t users_with_item1 = 0;
  for (const auto& p : ds.profiles) users_with_item1 += p.in_train(1) ? 1 : 0;
  CHECK(ix.support(1) == users_with_item1);
}

TEST_CASE("full-profile indexing counts test items too") {
  Dataset ds = split_profiles(testsup::synthetic_dataset(6, 30, 40, 10));
  StatIndex train_only = StatIndex::build(ds, true);
  StatIndex full = StatIndex::build(ds, false);
  std::uint64_t train_total = 0, full_total = 0;
  for (ItemId it : ds.item_universe) {
    train_total += train_only.support(it);
    full_total += full.support(it);
  }
  CHECK(full_total == 30 * 10);
  CHECK(train_total == 30 * 6);
}

TEST_CASE("rebuilds are deterministic") {
  Dataset ds = split_profiles(testsup::synthetic_dataset(7, 60, 40, 15));
  StatIndex a = StatIndex::build(ds);
  StatIndex b = StatIndex::build(ds);
  std::ostringstream sa, sb;
  a.save(sa, 1);
  b.save(sb, 1);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("index cache round-trips and carries the dataset hash") {
  Dataset ds = split_profiles(testsup::synthetic_dataset(8, 50, 45, 12));
  StatIndex ix = StatIndex::build(ds);
  std::stringstream buf;
  ix.save(buf, 0xabcdef1234ULL);
  StatIndex back = StatIndex::load(buf);
  CHECK(back.dataset_hash() == 0xabcdef1234ULL);
  CHECK(back.n_users() == ix.n_users());
  CHECK(back.co_pair_count() == ix.co_pair_count());
  for (ItemId a : ds.item_universe) {
    CHECK(back.support(a) == ix.support(a));
  }
  CHECK(back.co_support(1, 2) == ix.co_support(1, 2));

  std::istringstream junk("definitely not an index");
  CHECK_THROWS_AS(StatIndex::load(junk), io_error);
}

TEST_CASE("memory footprint scales with nonzero pairs, not items squared") {
  // universe as wide as the largest public movie catalogs (62k items): a
  // dense pair matrix would need n_items^2 cells (double-digit GiB); the
  // index must stay proportional to observed pairs
  const std::size_t n_items = 62000;
  const std::size_t n_users = 2000;
  const std::size_t len = 60;
  Dataset ds = split_profiles(testsup::synthetic_dataset(9, n_users, n_items, len, 0.8));
  StatIndex ix = StatIndex::build(ds);

  const std::uint64_t raw_pairs = n_users * (36 * 35) / 2;  // train prefix is 36 items
  CHECK(ix.co_pair_count() <= raw_pairs);
  CHECK(ix.co_pair_count() > 0);
  const std::uint64_t dense_cells =
      static_cast<std::uint64_t>(n_items) * static_cast<std::uint64_t>(n_items);
  CHECK(ix.approx_bytes() < dense_cells / 64);  // orders of magnitude under a dense matrix
  CHECK(ix.approx_bytes() < (std::uint64_t{1} << 28));  // and under a 256 MiB budget outright
}
