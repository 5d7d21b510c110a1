#include "cgrs/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <utility>

#include "cgrs/errors.hpp"

namespace cgrs {

namespace {

constexpr std::string_view kCsvHeader = "userId,movieId,rating,timestamp";

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

bool split_fields(std::string_view line, char sep, std::string_view (&fields)[4]) {
  std::size_t n = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      if (n == 4) return false;
      fields[n++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  return n == 4;
}

Interaction parse_row(std::string_view line, char sep, std::size_t line_no) {
  std::string_view fields[4];
  if (!split_fields(line, sep, fields)) {
    throw parse_error("expected 4 fields", line_no);
  }
  Interaction rec;
  if (!parse_number(fields[0], rec.user)) throw parse_error("bad user id", line_no);
  if (!parse_number(fields[1], rec.item)) throw parse_error("bad item id", line_no);
  if (!parse_number(fields[2], rec.rating)) throw parse_error("bad rating", line_no);
  if (!parse_number(fields[3], rec.timestamp) || rec.timestamp < 0) {
    throw parse_error("bad timestamp", line_no);
  }
  return rec;
}

}  // namespace

SourceFormat source_format_from(std::string_view tag) {
  if (tag == "tab_data") return SourceFormat::tab_data;
  if (tag == "csv_ratings") return SourceFormat::csv_ratings;
  throw config_error("unknown source format tag: " + std::string(tag));
}

std::vector<Interaction> parse_interactions(std::istream& source, SourceFormat format) {
  std::vector<Interaction> out;
  std::string line;
  std::size_t line_no = 0;

  if (format == SourceFormat::csv_ratings) {
    if (!std::getline(source, line)) {
      throw parse_error("missing header", 1);
    }
    ++line_no;
    if (strip_cr(line) != kCsvHeader) {
      throw parse_error("unexpected header, want \"" + std::string(kCsvHeader) + "\"", line_no);
    }
  }

  const char sep = format == SourceFormat::tab_data ? '\t' : ',';
  while (std::getline(source, line)) {
    ++line_no;
    std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    out.push_back(parse_row(row, sep, line_no));
  }
  return out;
}

bool UserProfile::in_train(ItemId item) const {
  return std::binary_search(train_sorted.begin(), train_sorted.end(), item);
}

const UserProfile* Dataset::find_user(UserId user) const {
  auto it = std::lower_bound(profiles.begin(), profiles.end(), user,
                             [](const UserProfile& p, UserId u) { return p.user < u; });
  if (it == profiles.end() || it->user != user) return nullptr;
  return &*it;
}

namespace {

void refresh_train_sorted(UserProfile& p) {
  p.train_sorted.assign(p.items.begin(), p.items.begin() + static_cast<std::ptrdiff_t>(p.train_count));
  std::sort(p.train_sorted.begin(), p.train_sorted.end());
}

}  // namespace

Dataset build_profiles(std::vector<Interaction> interactions, std::size_t min_profile) {
  std::sort(interactions.begin(), interactions.end(), [](const Interaction& a, const Interaction& b) {
    if (a.user != b.user) return a.user < b.user;
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.item < b.item;
  });

  Dataset ds;
  std::unordered_set<ItemId> seen;
  for (std::size_t i = 0; i < interactions.size();) {
    std::size_t j = i;
    while (j < interactions.size() && interactions[j].user == interactions[i].user) ++j;

    UserProfile p;
    p.user = interactions[i].user;
    seen.clear();
    for (std::size_t r = i; r < j; ++r) {
      // rows are time-ordered, so the first sighting is the earliest event
      if (seen.insert(interactions[r].item).second) {
        p.items.push_back(interactions[r].item);
      }
    }
    if (p.items.size() >= min_profile) {
      p.train_count = p.items.size();
      refresh_train_sorted(p);
      ds.profiles.push_back(std::move(p));
    }
    i = j;
  }

  std::unordered_set<ItemId> universe;
  for (const auto& p : ds.profiles) universe.insert(p.items.begin(), p.items.end());
  ds.item_universe.assign(universe.begin(), universe.end());
  std::sort(ds.item_universe.begin(), ds.item_universe.end());
  return ds;
}

Dataset split_profiles(Dataset dataset, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw config_error("train_fraction must lie in (0,1)");
  }
  for (auto& p : dataset.profiles) {
    if (p.items.size() < 2) {
      throw contract_error("cannot split a profile with fewer than 2 items (user " +
                           std::to_string(p.user) + ")");
    }
    p.train_count = static_cast<std::size_t>(train_fraction * static_cast<double>(p.items.size()));
    refresh_train_sorted(p);
  }
  return dataset;
}

void save_profile_cache(const Dataset& dataset, std::ostream& out) {
  for (const auto& p : dataset.profiles) {
    out << p.user << '\t';
    for (std::size_t i = 0; i < p.items.size(); ++i) {
      if (i) out << ',';
      out << p.items[i];
    }
    out << '\n';
  }
}

Dataset load_profile_cache(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::unordered_set<ItemId> universe;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    auto tab = row.find('\t');
    if (tab == std::string_view::npos) throw parse_error("expected user<TAB>items", line_no);

    UserProfile p;
    if (!parse_number(row.substr(0, tab), p.user)) throw parse_error("bad user id", line_no);
    std::string_view rest = row.substr(tab + 1);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i == rest.size() || rest[i] == ',') {
        ItemId item = 0;
        if (!parse_number(rest.substr(start, i - start), item)) {
          throw parse_error("bad item id", line_no);
        }
        p.items.push_back(item);
        start = i + 1;
      }
    }
    if (!ds.profiles.empty() && ds.profiles.back().user >= p.user) {
      throw parse_error("users out of order in profile cache", line_no);
    }
    universe.insert(p.items.begin(), p.items.end());
    p.train_count = p.items.size();
    refresh_train_sorted(p);
    ds.profiles.push_back(std::move(p));
  }
  ds.item_universe.assign(universe.begin(), universe.end());
  std::sort(ds.item_universe.begin(), ds.item_universe.end());
  return ds;
}

std::uint64_t content_hash(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& p : dataset.profiles) {
    mix(p.user);
    mix(p.items.size());
    for (ItemId it : p.items) mix(it);
  }
  return h;
}

}  // namespace cgrs
