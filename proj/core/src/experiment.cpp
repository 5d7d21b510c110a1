#include "cgrs/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "cgrs/errors.hpp"
#include "cgrs/rng.hpp"

namespace cgrs {

namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.5f", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == sep) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

double parse_double(std::string_view s) {
  return std::strtod(std::string(s).c_str(), nullptr);
}

template <typename T>
T parse_uint(std::string_view s) {
  T v{};
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

GroupSetting group_setting_from(std::string_view tag) {
  if (tag == "homogeneous") return GroupSetting::homogeneous;
  if (tag == "random") return GroupSetting::random;
  throw config_error("unknown group setting: " + std::string(tag));
}

std::string_view to_string(GroupSetting setting) {
  return setting == GroupSetting::homogeneous ? "homogeneous" : "random";
}

ScoreModel score_model_from(std::string_view tag) {
  if (tag == "am") return ScoreModel::association;
  if (tag == "pm") return ScoreModel::precedence;
  throw config_error("unknown scoring model: " + std::string(tag));
}

std::string_view to_string(ScoreModel model) {
  return model == ScoreModel::association ? "am" : "pm";
}

ProfileStrategy profile_strategy_from(std::string_view tag) {
  if (tag == "threshold") return ProfileStrategy::threshold_only;
  if (tag == "weighted") return ProfileStrategy::weighted;
  if (tag == "hybrid") return ProfileStrategy::hybrid;
  throw config_error("unknown profile strategy: " + std::string(tag));
}

std::string_view to_string(ProfileStrategy strategy) {
  switch (strategy) {
    case ProfileStrategy::threshold_only: return "threshold";
    case ProfileStrategy::weighted: return "weighted";
    default: return "hybrid";
  }
}

std::string_view to_string(SourceFormat format) {
  return format == SourceFormat::tab_data ? "tab_data" : "csv_ratings";
}

void ExperimentConfig::validate() const {
  if (n_instances < 1) throw config_error("instances must be at least 1");
  if (group_sizes.empty()) throw config_error("at least one group size is required");
  for (std::size_t g : group_sizes) {
    if (g < 2) throw config_error("group sizes must be at least 2");
  }
  if (epsilons.empty()) throw config_error("at least one epsilon is required");
  for (double e : epsilons) {
    if (!(e >= 0.0 && e <= 1.0)) throw config_error("epsilon values must lie in [0,1]");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw config_error("tau must lie in [0,1]");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw config_error("train_fraction must lie in (0,1)");
  }
  if (!(calib_fraction > 0.0 && calib_fraction < 1.0)) {
    throw config_error("calib_fraction must lie in (0,1)");
  }
  if (min_profile < 2) throw config_error("min_profile must be at least 2");
  if (max_group_attempts < 1) throw config_error("max_group_attempts must be at least 1");
}

std::vector<std::size_t> ExperimentConfig::k_values() const {
  std::vector<std::size_t> ks;
  ks.reserve(top_k);
  for (std::size_t k = 1; k <= top_k; ++k) ks.push_back(k);
  return ks;
}

namespace {

/// Candidate pool per the recommendation contract: the whole item universe
/// minus everything any member consumed in training.
std::vector<ItemId> candidate_pool(const Dataset& dataset, const Group& group) {
  std::vector<ItemId> consumed;
  for (UserId u : group.members) {
    const UserProfile* p = dataset.find_user(u);
    consumed.insert(consumed.end(), p->train_sorted.begin(), p->train_sorted.end());
  }
  std::sort(consumed.begin(), consumed.end());
  consumed.erase(std::unique(consumed.begin(), consumed.end()), consumed.end());

  std::vector<ItemId> pool;
  pool.reserve(dataset.item_universe.size() - consumed.size());
  std::set_difference(dataset.item_universe.begin(), dataset.item_universe.end(),
                      consumed.begin(), consumed.end(), std::back_inserter(pool));
  return pool;
}

/// Group truth: the union of the members' held-out test items, restricted to
/// the candidate pool.
GroundTruth group_truth(const Dataset& dataset, const Group& group,
                        const std::vector<ItemId>& pool) {
  std::vector<ItemId> test;
  for (UserId u : group.members) {
    const UserProfile* p = dataset.find_user(u);
    auto span = p->test_items();
    test.insert(test.end(), span.begin(), span.end());
  }
  std::sort(test.begin(), test.end());
  test.erase(std::unique(test.begin(), test.end()), test.end());

  GroundTruth truth;
  std::set_intersection(test.begin(), test.end(), pool.begin(), pool.end(),
                        std::back_inserter(truth.relevant));
  return truth;
}

std::uint64_t instance_stream(GroupSetting setting, std::size_t group_size, std::size_t instance) {
  return (static_cast<std::uint64_t>(group_size) << 33) |
         (static_cast<std::uint64_t>(setting == GroupSetting::random ? 1 : 0) << 32) |
         static_cast<std::uint64_t>(instance);
}

}  // namespace

RunArtifact run_experiment_on(const ExperimentConfig& config, const Dataset& dataset,
                              const StatIndex& index) {
  config.validate();
  for (std::size_t g : config.group_sizes) {
    if (g > dataset.n_users()) {
      throw config_error("group size " + std::to_string(g) + " exceeds the " +
                         std::to_string(dataset.n_users()) + " available users");
    }
  }
  const std::vector<std::size_t> ks = config.k_values();
  const auto run_start = clock_type::now();

  RunArtifact artifact;
  artifact.config = config;
  artifact.instances.reserve(config.group_sizes.size() * config.n_instances);

  for (std::size_t g : config.group_sizes) {
    for (std::size_t inst = 0; inst < config.n_instances; ++inst) {
      InstanceOutcome out;
      out.group_size = g;
      out.instance = inst;
      out.seed = derive_seed(config.global_seed, instance_stream(config.setting, g, inst));

      Group group;
      try {
        group = config.setting == GroupSetting::homogeneous
                    ? form_homogeneous_group(dataset, g, out.seed, config.max_group_attempts)
                    : form_random_group(dataset, g, out.seed);
      } catch (const no_homogeneous_group&) {
        out.skip_reason = "no_homogeneous_group";
        artifact.instances.push_back(std::move(out));
        continue;
      }
      out.members = group.members;
      out.homogeneous = is_homogeneous(dataset, group);

      VirtualProfile vp;
      try {
        vp = build_virtual_profile(index, dataset, group, config.tau, config.calib_fraction,
                                   derive_seed(out.seed, 1), config.model, config.strategy);
      } catch (const empty_profile_error&) {
        out.skip_reason = "empty_virtual_profile";
        artifact.instances.push_back(std::move(out));
        continue;
      } catch (const degenerate_profile_error&) {
        out.skip_reason = "degenerate_virtual_profile";
        artifact.instances.push_back(std::move(out));
        continue;
      }
      if (vp.calib_part.empty()) {
        out.skip_reason = "no_calibration_items";
        artifact.instances.push_back(std::move(out));
        continue;
      }

      const std::vector<ItemId> pool = candidate_pool(dataset, group);
      const GroundTruth truth = group_truth(dataset, group, pool);
      out.pool_size = pool.size();
      out.truth_size = truth.size();
      if (truth.relevant.empty()) {
        out.skip_reason = "empty_ground_truth";
        artifact.instances.push_back(std::move(out));
        continue;
      }
      if (truth.size() == pool.size()) {
        out.skip_reason = "no_irrelevant_items";
        artifact.instances.push_back(std::move(out));
        continue;
      }

      // paired evaluation: both systems see the identical group and seed
      std::vector<RelevanceScore> scores =
          score_pool(index, vp.weighted_items, pool, config.model);
      std::vector<RelevanceScore> grs_ranked = scores;
      sort_by_relevance(grs_ranked, index);
      std::vector<ItemId> grs_items;
      grs_items.reserve(grs_ranked.size());
      for (const auto& r : grs_ranked) grs_items.push_back(r.item);

      ConformalOutput cgrs =
          recommend_cgrs(index, vp, pool, config.epsilons.front(), scores);
      std::vector<ItemId> cgrs_items = cgrs.ranking();

      out.grs = evaluate_ranking(grs_items, truth, ks);
      out.cgrs = evaluate_ranking(cgrs_items, truth, ks);

      out.region_error.resize(config.epsilons.size(), 0.0);
      out.region_size.resize(config.epsilons.size(), 0.0);
      std::unordered_map<ItemId, double> p_of;
      p_of.reserve(cgrs.ranked.size());
      for (const auto& r : cgrs.ranked) p_of.emplace(r.item, r.p);
      for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
        const double eps = config.epsilons[e];
        std::size_t errors = 0;
        for (ItemId t : truth.relevant) {
          if (p_of.at(t) <= eps) ++errors;
        }
        std::size_t region = 0;
        for (const auto& r : cgrs.ranked) {
          if (r.p > eps) ++region;
        }
        out.region_error[e] = static_cast<double>(errors) / static_cast<double>(truth.size());
        out.region_size[e] = static_cast<double>(region);
      }
      artifact.instances.push_back(std::move(out));
    }
  }

  bool any_evaluated = false;
  for (const auto& inst : artifact.instances) any_evaluated |= inst.evaluated();
  if (!any_evaluated) {
    throw run_failure("no instance could be evaluated; see skip reasons");
  }
  artifact.run_seconds = seconds_since(run_start);
  return artifact;
}

RunArtifact run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::ifstream in(config.dataset_path, std::ios::binary);
  if (!in) throw io_error("cannot open dataset: " + config.dataset_path);

  const auto ingest_start = clock_type::now();
  Dataset dataset = split_profiles(
      build_profiles(parse_interactions(in, config.format), config.min_profile),
      config.train_fraction);
  const double ingest_seconds = seconds_since(ingest_start);

  const auto index_start = clock_type::now();
  StatIndex index = StatIndex::build(dataset, /*use_train_only=*/true);
  const double index_seconds = seconds_since(index_start);

  RunArtifact artifact = run_experiment_on(config, dataset, index);
  artifact.ingest_seconds = ingest_seconds;
  artifact.index_seconds = index_seconds;
  return artifact;
}

namespace {

void echo_config(std::ostream& out, const ExperimentConfig& c) {
  auto join_sizes = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(v[i]);
    }
    return s;
  };
  std::string eps;
  for (std::size_t i = 0; i < c.epsilons.size(); ++i) {
    if (i) eps += ',';
    eps += fmt_exact(c.epsilons[i]);
  }
  out << "# config: dataset=" << c.dataset_path << '\n'
      << "# config: dataset_label=" << c.dataset_label << '\n'
      << "# config: format=" << to_string(c.format) << '\n'
      << "# config: setting=" << to_string(c.setting) << '\n'
      << "# config: group_sizes=" << join_sizes(c.group_sizes) << '\n'
      << "# config: instances=" << c.n_instances << '\n'
      << "# config: epsilons=" << eps << '\n'
      << "# config: tau=" << fmt_exact(c.tau) << '\n'
      << "# config: train_fraction=" << fmt_exact(c.train_fraction) << '\n'
      << "# config: calib_fraction=" << fmt_exact(c.calib_fraction) << '\n'
      << "# config: min_profile=" << c.min_profile << '\n'
      << "# config: topk=" << c.top_k << '\n'
      << "# config: seed=" << c.global_seed << '\n'
      << "# config: model=" << to_string(c.model) << '\n'
      << "# config: strategy=" << to_string(c.strategy) << '\n'
      << "# config: max_group_attempts=" << c.max_group_attempts << '\n';
}

void apply_config_line(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "dataset") c.dataset_path = value;
  else if (key == "dataset_label") c.dataset_label = value;
  else if (key == "format") c.format = source_format_from(value);
  else if (key == "setting") c.setting = group_setting_from(value);
  else if (key == "group_sizes") {
    c.group_sizes.clear();
    for (auto f : split(value, ',')) c.group_sizes.push_back(parse_uint<std::size_t>(f));
  } else if (key == "instances") c.n_instances = parse_uint<std::size_t>(value);
  else if (key == "epsilons") {
    c.epsilons.clear();
    for (auto f : split(value, ',')) c.epsilons.push_back(parse_double(f));
  } else if (key == "tau") c.tau = parse_double(value);
  else if (key == "train_fraction") c.train_fraction = parse_double(value);
  else if (key == "calib_fraction") c.calib_fraction = parse_double(value);
  else if (key == "min_profile") c.min_profile = parse_uint<std::size_t>(value);
  else if (key == "topk") c.top_k = parse_uint<std::size_t>(value);
  else if (key == "seed") c.global_seed = parse_uint<std::uint64_t>(value);
  else if (key == "model") c.model = score_model_from(value);
  else if (key == "strategy") c.strategy = profile_strategy_from(value);
  else if (key == "max_group_attempts") c.max_group_attempts = parse_uint<std::size_t>(value);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  return out;
}

void write_manifest(const RunArtifact& a, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "# cgrs experiment manifest\n";
  echo_config(out, a.config);
  out << "# columns: group_size, instance, seed, homogeneous, members\n";
  for (const auto& inst : a.instances) {
    out << inst.group_size << '\t' << inst.instance << '\t' << inst.seed << '\t'
        << (inst.homogeneous ? 1 : 0) << '\t';
    if (inst.members.empty()) {
      out << '-';
    } else {
      for (std::size_t i = 0; i < inst.members.size(); ++i) {
        if (i) out << ',';
        out << inst.members[i];
      }
    }
    out << '\n';
  }
}

void write_instances(const RunArtifact& a, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "group_size,instance,seed,homogeneous,status,pool_size,truth_size,system,ap,rr,auc,ndcg";
  for (double e : a.config.epsilons) out << ",err@" << fmt_exact(e);
  for (double e : a.config.epsilons) out << ",region@" << fmt_exact(e);
  out << '\n';

  auto prefix = [&out](const InstanceOutcome& inst, std::string_view status) {
    out << inst.group_size << ',' << inst.instance << ',' << inst.seed << ','
        << (inst.homogeneous ? 1 : 0) << ',' << status << ',' << inst.pool_size << ','
        << inst.truth_size;
  };
  const std::size_t n_eps = a.config.epsilons.size();
  for (const auto& inst : a.instances) {
    if (!inst.evaluated()) {
      prefix(inst, inst.skip_reason);
      out << ",none,,,,";
      for (std::size_t e = 0; e < 2 * n_eps; ++e) out << ',';
      out << '\n';
      continue;
    }
    prefix(inst, "ok");
    out << ",grs," << fmt_exact(inst.grs.ap) << ',' << fmt_exact(inst.grs.rr) << ','
        << fmt_exact(inst.grs.auc) << ',' << fmt_exact(inst.grs.ndcg);
    for (std::size_t e = 0; e < 2 * n_eps; ++e) out << ',';
    out << '\n';
    prefix(inst, "ok");
    out << ",cgrs," << fmt_exact(inst.cgrs.ap) << ',' << fmt_exact(inst.cgrs.rr) << ','
        << fmt_exact(inst.cgrs.auc) << ',' << fmt_exact(inst.cgrs.ndcg);
    for (std::size_t e = 0; e < n_eps; ++e) out << ',' << fmt_exact(inst.region_error[e]);
    for (std::size_t e = 0; e < n_eps; ++e) out << ',' << fmt_exact(inst.region_size[e]);
    out << '\n';
  }
}

void write_instances_topk(const RunArtifact& a, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "group_size,instance,system,k,precision,recall,f1\n";
  auto rows = [&out](const InstanceOutcome& inst, std::string_view system,
                     const MetricReport& m) {
    for (const auto& [k, p] : m.precision_at) {
      out << inst.group_size << ',' << inst.instance << ',' << system << ',' << k << ','
          << fmt_exact(p) << ',' << fmt_exact(m.recall_at.at(k)) << ','
          << fmt_exact(m.f1_at.at(k)) << '\n';
    }
  };
  for (const auto& inst : a.instances) {
    if (!inst.evaluated()) continue;
    rows(inst, "grs", inst.grs);
    rows(inst, "cgrs", inst.cgrs);
  }
}

struct SystemAggregate {
  double ap = 0, rr = 0, auc = 0, ndcg = 0;
  std::map<std::size_t, double> p, r, f1;
};

void write_summary_and_topk(const RunArtifact& a, const fs::path& summary_path,
                            const fs::path& topk_path) {
  std::ofstream summary = open_out(summary_path);
  std::ofstream topk = open_out(topk_path);
  summary << "dataset,setting,group_size,system,ap,rr,auc,ndcg,skip_rate,n_eval\n";
  topk << "dataset,setting,group_size,system,k,precision,recall,f1\n";

  const std::string label = a.config.dataset_label;
  const std::string_view setting = to_string(a.config.setting);
  const std::vector<std::size_t> ks = a.config.k_values();

  for (std::size_t g : a.config.group_sizes) {
    SystemAggregate grs, cgrs;
    std::size_t n_eval = 0, n_total = 0;
    for (const auto& inst : a.instances) {
      if (inst.group_size != g) continue;
      ++n_total;
      if (!inst.evaluated()) continue;
      ++n_eval;
      auto add = [&ks](SystemAggregate& agg, const MetricReport& m) {
        agg.ap += m.ap;
        agg.rr += m.rr;
        agg.auc += m.auc;
        agg.ndcg += m.ndcg;
        for (std::size_t k : ks) {
          agg.p[k] += m.precision_at.at(k);
          agg.r[k] += m.recall_at.at(k);
          agg.f1[k] += m.f1_at.at(k);
        }
      };
      add(grs, inst.grs);
      add(cgrs, inst.cgrs);
    }
    const double denom = n_eval > 0 ? static_cast<double>(n_eval) : 1.0;
    const double skip_rate =
        n_total > 0 ? static_cast<double>(n_total - n_eval) / static_cast<double>(n_total) : 0.0;
    for (auto [name, agg] : {std::pair<std::string_view, SystemAggregate*>{"grs", &grs},
                             {"cgrs", &cgrs}}) {
      summary << label << ',' << setting << ',' << g << ',' << name << ','
              << fmt_fixed(agg->ap / denom) << ',' << fmt_fixed(agg->rr / denom) << ','
              << fmt_fixed(agg->auc / denom) << ',' << fmt_fixed(agg->ndcg / denom) << ','
              << fmt_fixed(skip_rate) << ',' << n_eval << '\n';
      for (std::size_t k : ks) {
        topk << label << ',' << setting << ',' << g << ',' << name << ',' << k << ','
             << fmt_fixed(agg->p[k] / denom) << ',' << fmt_fixed(agg->r[k] / denom) << ','
             << fmt_fixed(agg->f1[k] / denom) << '\n';
      }
    }
  }
}

void write_validity(const RunArtifact& a, const fs::path& path) {
  std::ofstream out = open_out(path);
  out << "epsilon,empirical_error,region_size_mean\n";
  for (std::size_t e = 0; e < a.config.epsilons.size(); ++e) {
    double err = 0.0, size = 0.0;
    std::size_t n = 0;
    for (const auto& inst : a.instances) {
      if (!inst.evaluated()) continue;
      err += inst.region_error[e];
      size += inst.region_size[e];
      ++n;
    }
    const double denom = n > 0 ? static_cast<double>(n) : 1.0;
    out << fmt_fixed(a.config.epsilons[e]) << ',' << fmt_fixed(err / denom) << ','
        << fmt_fixed(size / denom) << '\n';
  }
}

}  // namespace

void emit_reports(const RunArtifact& artifact, const std::filesystem::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory " + out_dir.string());
  write_manifest(artifact, out_dir / "manifest.txt");
  write_instances(artifact, out_dir / "instances.csv");
  write_instances_topk(artifact, out_dir / "instances_topk.csv");
  write_summary_and_topk(artifact, out_dir / "summary.csv", out_dir / "topk.csv");
  write_validity(artifact, out_dir / "validity.csv");
}

RunArtifact load_artifact(const std::filesystem::path& dir) {
  RunArtifact artifact;
  {
    std::ifstream in(dir / "manifest.txt");
    if (!in) throw io_error("cannot open " + (dir / "manifest.txt").string());
    std::string line;
    while (std::getline(in, line)) {
      std::string_view v = line;
      if (v.rfind("# config: ", 0) == 0) {
        v.remove_prefix(10);
        auto eq = v.find('=');
        if (eq != std::string_view::npos) {
          apply_config_line(artifact.config, v.substr(0, eq), v.substr(eq + 1));
        }
        continue;
      }
      if (v.empty() || v[0] == '#') continue;
      auto fields = split(v, '\t');
      if (fields.size() != 5) throw io_error("malformed manifest line: " + line);
      InstanceOutcome inst;
      inst.group_size = parse_uint<std::size_t>(fields[0]);
      inst.instance = parse_uint<std::size_t>(fields[1]);
      inst.seed = parse_uint<std::uint64_t>(fields[2]);
      inst.homogeneous = fields[3] == "1";
      if (fields[4] != "-") {
        for (auto m : split(fields[4], ',')) inst.members.push_back(parse_uint<UserId>(m));
      }
      artifact.instances.push_back(std::move(inst));
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> position;
  position.reserve(artifact.instances.size());
  for (std::size_t i = 0; i < artifact.instances.size(); ++i) {
    const auto& inst = artifact.instances[i];
    position[(static_cast<std::uint64_t>(inst.group_size) << 32) | inst.instance] = i;
  }
  auto find_instance = [&artifact, &position](std::size_t g, std::size_t idx) -> InstanceOutcome& {
    auto it = position.find((static_cast<std::uint64_t>(g) << 32) | idx);
    if (it == position.end()) throw io_error("instance row without a manifest entry");
    return artifact.instances[it->second];
  };

  {
    std::ifstream in(dir / "instances.csv");
    if (!in) throw io_error("cannot open " + (dir / "instances.csv").string());
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty instances.csv");
    const std::size_t n_eps = artifact.config.epsilons.size();
    while (std::getline(in, line)) {
      auto f = split(line, ',');
      if (f.size() != 12 + 2 * n_eps) throw io_error("malformed instances.csv row: " + line);
      InstanceOutcome& inst =
          find_instance(parse_uint<std::size_t>(f[0]), parse_uint<std::size_t>(f[1]));
      const std::string_view status = f[4];
      inst.pool_size = parse_uint<std::size_t>(f[5]);
      inst.truth_size = parse_uint<std::size_t>(f[6]);
      const std::string_view system = f[7];
      if (status != "ok") {
        inst.skip_reason = status;
        continue;
      }
      MetricReport& m = system == "grs" ? inst.grs : inst.cgrs;
      m.ap = parse_double(f[8]);
      m.rr = parse_double(f[9]);
      m.auc = parse_double(f[10]);
      m.ndcg = parse_double(f[11]);
      if (system == "cgrs") {
        inst.region_error.resize(n_eps);
        inst.region_size.resize(n_eps);
        for (std::size_t e = 0; e < n_eps; ++e) {
          inst.region_error[e] = parse_double(f[12 + e]);
          inst.region_size[e] = parse_double(f[12 + n_eps + e]);
        }
      }
    }
  }

  {
    std::ifstream in(dir / "instances_topk.csv");
    if (!in) throw io_error("cannot open " + (dir / "instances_topk.csv").string());
    std::string line;
    if (!std::getline(in, line)) throw io_error("empty instances_topk.csv");
    while (std::getline(in, line)) {
      auto f = split(line, ',');
      if (f.size() != 7) throw io_error("malformed instances_topk.csv row: " + line);
      InstanceOutcome& inst =
          find_instance(parse_uint<std::size_t>(f[0]), parse_uint<std::size_t>(f[1]));
      MetricReport& m = f[2] == "grs" ? inst.grs : inst.cgrs;
      const std::size_t k = parse_uint<std::size_t>(f[3]);
      m.precision_at[k] = parse_double(f[4]);
      m.recall_at[k] = parse_double(f[5]);
      m.f1_at[k] = parse_double(f[6]);
    }
  }
  return artifact;
}

}  // namespace cgrs
