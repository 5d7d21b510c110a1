#include "cgrs/stats.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "cgrs/errors.hpp"

namespace cgrs {

namespace {

constexpr char kMagic[8] = {'C', 'G', 'R', 'S', 'I', 'X', '0', '1'};

std::uint64_t pack(std::uint32_t row, std::uint32_t col) {
  return (static_cast<std::uint64_t>(row) << 32) | col;
}

/// Sorts raw pair keys and collapses duplicates by summing their counts.
void run_length_fold(std::vector<std::uint64_t>& keys, std::vector<std::uint32_t>& counts) {
  std::sort(keys.begin(), keys.end());
  std::size_t w = 0;
  for (std::size_t r = 0; r < keys.size();) {
    std::size_t r2 = r;
    while (r2 < keys.size() && keys[r2] == keys[r]) ++r2;
    keys[w] = keys[r];
    counts.push_back(static_cast<std::uint32_t>(r2 - r));
    ++w;
    r = r2;
  }
  keys.resize(w);
}

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw io_error("truncated stat-index stream");
}

template <typename T>
void write_vec(std::ostream& out, const std::vector<T>& v) {
  write_pod(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
void read_vec(std::istream& in, std::vector<T>& v) {
  std::uint64_t n = 0;
  read_pod(in, n);
  v.resize(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw io_error("truncated stat-index stream");
}

void build_csr(const std::vector<std::uint64_t>& keys, const std::vector<std::uint32_t>& counts,
               std::size_t n_rows, std::vector<std::uint64_t>& off,
               std::vector<std::uint32_t>& col, std::vector<std::uint32_t>& cnt) {
  off.assign(n_rows + 1, 0);
  col.resize(keys.size());
  cnt.resize(keys.size());
  for (std::uint64_t k : keys) ++off[(k >> 32) + 1];
  for (std::size_t i = 1; i <= n_rows; ++i) off[i] += off[i - 1];
  for (std::size_t i = 0; i < keys.size(); ++i) {
    col[i] = static_cast<std::uint32_t>(keys[i] & 0xffffffffu);
    cnt[i] = counts[i];
  }
}

std::uint32_t csr_lookup(const std::vector<std::uint64_t>& off, const std::vector<std::uint32_t>& col,
                         const std::vector<std::uint32_t>& cnt, std::uint32_t row, std::uint32_t c) {
  auto first = col.begin() + static_cast<std::ptrdiff_t>(off[row]);
  auto last = col.begin() + static_cast<std::ptrdiff_t>(off[row + 1]);
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0;
  return cnt[static_cast<std::size_t>(it - col.begin())];
}

}  // namespace

StatIndex StatIndex::freeze(std::uint32_t n_users, std::vector<ItemId> items,
                            std::vector<std::uint32_t> support,
                            std::vector<std::uint64_t>& co_keys,
                            std::vector<std::uint32_t>& co_counts,
                            std::vector<std::uint64_t>& pr_keys,
                            std::vector<std::uint32_t>& pr_counts) {
  StatIndex ix;
  ix.n_users_ = n_users;
  ix.items_ = std::move(items);
  ix.support_ = std::move(support);
  build_csr(co_keys, co_counts, ix.items_.size(), ix.co_off_, ix.co_col_, ix.co_cnt_);
  build_csr(pr_keys, pr_counts, ix.items_.size(), ix.pr_off_, ix.pr_col_, ix.pr_cnt_);
  return ix;
}

StatIndex StatIndex::build(const Dataset& dataset, bool use_train_only) {
  const auto& universe = dataset.item_universe;
  std::vector<std::uint32_t> support(universe.size(), 0);

  auto dense = [&universe](ItemId item) {
    return static_cast<std::uint32_t>(
        std::lower_bound(universe.begin(), universe.end(), item) - universe.begin());
  };

  std::vector<std::uint64_t> co_keys, pr_keys;
  std::vector<std::uint32_t> co_counts, pr_counts;
  std::vector<std::uint32_t> seq;
  for (const auto& p : dataset.profiles) {
    auto span = use_train_only ? p.train_items() : std::span<const ItemId>(p.items);
    seq.clear();
    for (ItemId it : span) seq.push_back(dense(it));
    for (std::uint32_t d : seq) ++support[d];
    for (std::size_t a = 0; a < seq.size(); ++a) {
      for (std::size_t b = a + 1; b < seq.size(); ++b) {
        pr_keys.push_back(pack(seq[a], seq[b]));
        co_keys.push_back(pack(std::min(seq[a], seq[b]), std::max(seq[a], seq[b])));
      }
    }
  }
  run_length_fold(co_keys, co_counts);
  run_length_fold(pr_keys, pr_counts);
  return freeze(static_cast<std::uint32_t>(dataset.n_users()), universe, std::move(support),
                co_keys, co_counts, pr_keys, pr_counts);
}

StatIndex StatIndex::from_counts(std::uint32_t n_users,
                                 std::vector<std::pair<ItemId, std::uint32_t>> support,
                                 std::vector<PairCount> co_support,
                                 std::vector<PairCount> precedence) {
  std::sort(support.begin(), support.end());
  std::vector<ItemId> items;
  std::vector<std::uint32_t> sup;
  items.reserve(support.size());
  for (const auto& [item, count] : support) {
    if (!items.empty() && items.back() == item) throw contract_error("duplicate support entry");
    if (count > n_users) throw contract_error("support exceeds user count");
    items.push_back(item);
    sup.push_back(count);
  }

  auto dense = [&items](ItemId item) -> std::uint32_t {
    auto it = std::lower_bound(items.begin(), items.end(), item);
    if (it == items.end() || *it != item) throw contract_error("pair references unknown item");
    return static_cast<std::uint32_t>(it - items.begin());
  };

  std::vector<std::uint64_t> co_keys;
  std::vector<std::uint32_t> co_counts;
  std::unordered_map<std::uint64_t, std::uint32_t> co_map;
  for (const auto& pc : co_support) {
    if (pc.first == pc.second) throw contract_error("self co-support pairs are implied by support");
    std::uint32_t a = dense(pc.first), b = dense(pc.second);
    if (a > b) std::swap(a, b);
    if (pc.count > std::min(sup[a], sup[b])) {
      throw contract_error("co-support exceeds min support of pair");
    }
    if (pc.count == 0) continue;
    if (!co_map.emplace(pack(a, b), pc.count).second) {
      throw contract_error("duplicate co-support pair");
    }
  }
  co_keys.reserve(co_map.size());
  for (const auto& [k, c] : co_map) co_keys.push_back(k);
  std::sort(co_keys.begin(), co_keys.end());
  for (std::uint64_t k : co_keys) co_counts.push_back(co_map[k]);

  std::vector<std::uint64_t> pr_keys;
  std::vector<std::uint32_t> pr_counts;
  if (precedence.empty()) {
    // no order information: park each pair's count on its ascending direction
    pr_keys = co_keys;
    pr_counts = co_counts;
  } else {
    std::unordered_map<std::uint64_t, std::uint32_t> pr_map;
    for (const auto& pc : precedence) {
      if (pc.first == pc.second) throw contract_error("an item cannot precede itself");
      std::uint32_t a = dense(pc.first), b = dense(pc.second);
      if (pc.count == 0) continue;
      if (!pr_map.emplace(pack(a, b), pc.count).second) {
        throw contract_error("duplicate precedence pair");
      }
    }
    for (const auto& [k, c] : pr_map) {
      std::uint32_t a = static_cast<std::uint32_t>(k >> 32);
      std::uint32_t b = static_cast<std::uint32_t>(k & 0xffffffffu);
      std::uint64_t co_key = pack(std::min(a, b), std::max(a, b));
      auto it = co_map.find(co_key);
      std::uint32_t co = it == co_map.end() ? 0 : it->second;
      auto rev = pr_map.find(pack(b, a));
      std::uint32_t reverse = rev == pr_map.end() ? 0 : rev->second;
      if (c + reverse != co) {
        throw contract_error("precedence directions must partition the pair's co-support");
      }
    }
    pr_keys.reserve(pr_map.size());
    for (const auto& [k, c] : pr_map) pr_keys.push_back(k);
    std::sort(pr_keys.begin(), pr_keys.end());
    for (std::uint64_t k : pr_keys) pr_counts.push_back(pr_map[k]);
  }

  return freeze(n_users, std::move(items), std::move(sup), co_keys, co_counts, pr_keys, pr_counts);
}

std::int64_t StatIndex::dense_of(ItemId item) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), item);
  if (it == items_.end() || *it != item) return -1;
  return it - items_.begin();
}

std::uint32_t StatIndex::support(ItemId item) const {
  std::int64_t d = dense_of(item);
  return d < 0 ? 0 : support_[static_cast<std::size_t>(d)];
}

std::uint32_t StatIndex::co_at(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return support_[a];
  if (a > b) std::swap(a, b);
  return csr_lookup(co_off_, co_col_, co_cnt_, a, b);
}

std::uint32_t StatIndex::prec_at(std::uint32_t before, std::uint32_t after) const {
  if (before == after) return 0;
  return csr_lookup(pr_off_, pr_col_, pr_cnt_, before, after);
}

std::uint32_t StatIndex::co_support(ItemId a, ItemId b) const {
  std::int64_t da = dense_of(a), db = dense_of(b);
  if (da < 0 || db < 0) return 0;
  return co_at(static_cast<std::uint32_t>(da), static_cast<std::uint32_t>(db));
}

std::uint32_t StatIndex::precedence_count(ItemId before, ItemId after) const {
  std::int64_t da = dense_of(before), db = dense_of(after);
  if (da < 0 || db < 0) return 0;
  return prec_at(static_cast<std::uint32_t>(da), static_cast<std::uint32_t>(db));
}

double StatIndex::cond_prob(ItemId i, ItemId given) const {
  std::uint32_t s = support(given);
  if (s == 0) {
    throw undefined_conditional("conditioning item " + std::to_string(given) + " has zero support");
  }
  return static_cast<double>(co_support(i, given)) / static_cast<double>(s);
}

double StatIndex::precedence_prob(ItemId i, ItemId given) const {
  std::uint32_t s = support(given);
  if (s == 0) {
    throw undefined_conditional("conditioning item " + std::to_string(given) + " has zero support");
  }
  return static_cast<double>(precedence_count(i, given)) / static_cast<double>(s);
}

std::uint64_t StatIndex::approx_bytes() const {
  auto bytes = [](const auto& v) { return v.size() * sizeof(v[0]); };
  return bytes(items_) + bytes(support_) + bytes(co_off_) + bytes(co_col_) + bytes(co_cnt_) +
         bytes(pr_off_) + bytes(pr_col_) + bytes(pr_cnt_);
}

void StatIndex::save(std::ostream& out, std::uint64_t dataset_hash) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, dataset_hash);
  write_pod(out, n_users_);
  write_vec(out, items_);
  write_vec(out, support_);
  write_vec(out, co_off_);
  write_vec(out, co_col_);
  write_vec(out, co_cnt_);
  write_vec(out, pr_off_);
  write_vec(out, pr_col_);
  write_vec(out, pr_cnt_);
  if (!out) throw io_error("failed to write stat-index cache");
}

StatIndex StatIndex::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw io_error("not a stat-index cache (bad magic/version)");
  }
  StatIndex ix;
  read_pod(in, ix.dataset_hash_);
  read_pod(in, ix.n_users_);
  read_vec(in, ix.items_);
  read_vec(in, ix.support_);
  read_vec(in, ix.co_off_);
  read_vec(in, ix.co_col_);
  read_vec(in, ix.co_cnt_);
  read_vec(in, ix.pr_off_);
  read_vec(in, ix.pr_col_);
  read_vec(in, ix.pr_cnt_);
  if (ix.co_off_.size() != ix.items_.size() + 1 || ix.pr_off_.size() != ix.items_.size() + 1 ||
      ix.support_.size() != ix.items_.size()) {
    throw io_error("inconsistent stat-index cache");
  }
  return ix;
}

}  // namespace cgrs
