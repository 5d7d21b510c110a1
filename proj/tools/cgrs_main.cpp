// Command-line experiment runner around the cgrs library:
//   ingest  parse raw interactions into the line-delimited profile cache
//   index   build (and cache) the consumption statistics
//   run     paired GRS/CGRS sweep with CSV reports
//   report  re-derive the report tables from a stored run artifact

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "cgrs/corpus.hpp"
#include "cgrs/errors.hpp"
#include "cgrs/experiment.hpp"
#include "cgrs/rng.hpp"
#include "cgrs/stats.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitRun = 3;

struct CommonOptions {
  std::string dataset;
  std::string cache;
  std::string format = "tab_data";
  std::size_t min_profile = 20;
  double train_fraction = 0.6;
};

cgrs::Dataset load_dataset(const CommonOptions& opt, bool split) {
  cgrs::Dataset ds;
  if (!opt.cache.empty() && fs::exists(opt.cache) && opt.dataset.empty()) {
    std::ifstream in(opt.cache, std::ios::binary);
    if (!in) throw cgrs::io_error("cannot open profile cache: " + opt.cache);
    ds = cgrs::load_profile_cache(in);
  } else {
    if (opt.dataset.empty()) {
      throw cgrs::config_error("either --dataset or an existing --cache is required");
    }
    std::ifstream in(opt.dataset, std::ios::binary);
    if (!in) throw cgrs::io_error("cannot open dataset: " + opt.dataset);
    ds = cgrs::build_profiles(
        cgrs::parse_interactions(in, cgrs::source_format_from(opt.format)), opt.min_profile);
  }
  if (split) ds = cgrs::split_profiles(std::move(ds), opt.train_fraction);
  return ds;
}

/// The index cache is keyed on the profile content hash plus the split
/// fraction, so a stale cache is rebuilt instead of silently reused.
std::uint64_t index_cache_key(const cgrs::Dataset& ds, double train_fraction) {
  std::uint64_t h = cgrs::content_hash(ds);
  std::uint64_t bits = 0;
  static_assert(sizeof(bits) == sizeof(train_fraction));
  std::memcpy(&bits, &train_fraction, sizeof(bits));
  return cgrs::derive_seed(h, bits);
}

cgrs::StatIndex obtain_index(const cgrs::Dataset& ds, double train_fraction,
                             const std::string& index_path) {
  const std::uint64_t key = index_cache_key(ds, train_fraction);
  if (!index_path.empty() && fs::exists(index_path)) {
    std::ifstream in(index_path, std::ios::binary);
    if (in) {
      try {
        cgrs::StatIndex ix = cgrs::StatIndex::load(in);
        if (ix.dataset_hash() == key) return ix;
        std::cerr << "index cache is stale; rebuilding\n";
      } catch (const cgrs::io_error& e) {
        std::cerr << "ignoring unreadable index cache: " << e.what() << "\n";
      }
    }
  }
  cgrs::StatIndex ix = cgrs::StatIndex::build(ds, /*use_train_only=*/true);
  if (!index_path.empty()) {
    std::ofstream out(index_path, std::ios::binary);
    if (!out) throw cgrs::io_error("cannot write index cache: " + index_path);
    ix.save(out, key);
  }
  return ix;
}

/// Flat key=value config: every key mirrors a `run` flag (without the
/// leading dashes); values given on the command line win.
void apply_flat_config(const fs::path& path, const CLI::App* run,
                       const std::function<void(const std::string&, const std::string&)>& set) {
  std::ifstream in(path);
  if (!in) throw cgrs::io_error("cannot open config file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw cgrs::config_error("config line " + std::to_string(line_no) + " is not key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    const CLI::Option* opt = run->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw cgrs::config_error("unknown config key: " + key);
    }
    if (opt->count() > 0) continue;  // the flag takes precedence
    try {
      set(key, value);
    } catch (const cgrs::config_error&) {
      throw;
    } catch (const std::exception&) {
      throw cgrs::config_error("bad value for config key " + key + ": " + value);
    }
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool dataset_required) {
  auto* d = cmd->add_option("--dataset", opt.dataset, "raw interaction file");
  cmd->add_option("--cache", opt.cache, "profile cache path (read if present)");
  cmd->add_option("--format", opt.format, "tab_data | csv_ratings")
      ->check(CLI::IsMember({"tab_data", "csv_ratings"}));
  cmd->add_option("--min-profile", opt.min_profile, "drop users with fewer distinct items");
  cmd->add_option("--train-fraction", opt.train_fraction, "chronological train share");
  if (dataset_required) d->required();
}

int dispatch(int argc, char** argv) {
  CLI::App app{"conformal group recommendation experiments"};
  app.require_subcommand(1);

  // ingest
  CommonOptions ingest_opt;
  std::string ingest_out;
  auto* ingest = app.add_subcommand("ingest", "build the profile cache");
  add_common(ingest, ingest_opt, /*dataset_required=*/true);
  ingest->add_option("--out", ingest_out, "profile cache to write")->required();

  // index
  CommonOptions index_opt;
  std::string index_out;
  auto* index_cmd = app.add_subcommand("index", "build and store the stat index");
  add_common(index_cmd, index_opt, /*dataset_required=*/false);
  index_cmd->add_option("--out", index_out, "index cache to write")->required();

  // run
  CommonOptions run_opt;
  cgrs::ExperimentConfig cfg;
  std::string run_out = "out";
  std::string index_path;
  std::string setting = "homogeneous";
  std::string model = "am";
  std::string strategy = "hybrid";
  std::vector<std::size_t> group_sizes;
  std::vector<double> epsilons;
  auto* run = app.add_subcommand("run", "run a paired GRS/CGRS experiment");
  std::string config_path;
  run->add_option("--config", config_path, "flat key=value config file; flags win");
  add_common(run, run_opt, /*dataset_required=*/false);
  run->add_option("--index", index_path, "stat-index cache (read/write)");
  run->add_option("--setting", setting, "homogeneous | random")
      ->check(CLI::IsMember({"homogeneous", "random"}));
  run->add_option("--group-size", group_sizes, "group sizes to sweep (default 2..6)");
  run->add_option("--instances", cfg.n_instances, "instances per group size");
  run->add_option("--epsilon", epsilons, "significance grid (default 0.01 0.05 0.1 0.2)");
  run->add_option("--tau", cfg.tau, "virtual-profile weight threshold");
  run->add_option("--calib-fraction", cfg.calib_fraction, "share of the virtual profile held out");
  run->add_option("--seed", cfg.global_seed, "global seed");
  run->add_option("--topk", cfg.top_k, "report precision/recall/f1 for K in 1..topk (0 disables)");
  run->add_option("--model", model, "am | pm")->check(CLI::IsMember({"am", "pm"}));
  run->add_option("--strategy", strategy, "threshold | weighted | hybrid")
      ->check(CLI::IsMember({"threshold", "weighted", "hybrid"}));
  run->add_option("--max-group-attempts", cfg.max_group_attempts,
                  "rejection budget for homogeneous groups");
  run->add_option("--label", cfg.dataset_label, "dataset label in the reports");
  run->add_option("--out", run_out, "report directory");

  // report
  std::string artifact_dir;
  std::string report_out;
  auto* report = app.add_subcommand("report", "re-emit reports from a run artifact");
  report->add_option("--artifact", artifact_dir, "directory of a previous run")->required();
  report->add_option("--out", report_out, "report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (ingest->parsed()) {
    cgrs::Dataset ds = load_dataset(ingest_opt, /*split=*/false);
    std::ofstream out(ingest_out, std::ios::binary);
    if (!out) throw cgrs::io_error("cannot write profile cache: " + ingest_out);
    cgrs::save_profile_cache(ds, out);
    std::printf("ingested %zu users over %zu items\n", ds.n_users(), ds.n_items());
    return kExitOk;
  }

  if (index_cmd->parsed()) {
    cgrs::Dataset ds = load_dataset(index_opt, /*split=*/true);
    const auto t0 = std::chrono::steady_clock::now();
    cgrs::StatIndex ix = obtain_index(ds, index_opt.train_fraction, index_out);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("index: %zu items, %llu co-pairs, %llu precedence pairs, %.1f MiB, %.2fs\n",
                ix.n_items(), static_cast<unsigned long long>(ix.co_pair_count()),
                static_cast<unsigned long long>(ix.precedence_pair_count()),
                static_cast<double>(ix.approx_bytes()) / (1024.0 * 1024.0), secs);
    return kExitOk;
  }

  if (run->parsed()) {
    if (!config_path.empty()) {
      apply_flat_config(config_path, run, [&](const std::string& key, const std::string& value) {
        if (key == "dataset") run_opt.dataset = value;
        else if (key == "cache") run_opt.cache = value;
        else if (key == "format") run_opt.format = value;
        else if (key == "min-profile") run_opt.min_profile = std::stoull(value);
        else if (key == "train-fraction") run_opt.train_fraction = std::stod(value);
        else if (key == "index") index_path = value;
        else if (key == "setting") setting = value;
        else if (key == "group-size") {
          group_sizes.clear();
          for (const auto& f : split_commas(value)) group_sizes.push_back(std::stoull(f));
        } else if (key == "instances") cfg.n_instances = std::stoull(value);
        else if (key == "epsilon") {
          epsilons.clear();
          for (const auto& f : split_commas(value)) epsilons.push_back(std::stod(f));
        } else if (key == "tau") cfg.tau = std::stod(value);
        else if (key == "calib-fraction") cfg.calib_fraction = std::stod(value);
        else if (key == "seed") cfg.global_seed = std::stoull(value);
        else if (key == "topk") cfg.top_k = std::stoull(value);
        else if (key == "model") model = value;
        else if (key == "strategy") strategy = value;
        else if (key == "max-group-attempts") cfg.max_group_attempts = std::stoull(value);
        else if (key == "label") cfg.dataset_label = value;
        else if (key == "out") run_out = value;
      });
    }
    cfg.dataset_path = run_opt.dataset;
    cfg.format = cgrs::source_format_from(run_opt.format);
    cfg.setting = cgrs::group_setting_from(setting);
    cfg.model = cgrs::score_model_from(model);
    cfg.strategy = cgrs::profile_strategy_from(strategy);
    cfg.min_profile = run_opt.min_profile;
    cfg.train_fraction = run_opt.train_fraction;
    if (!group_sizes.empty()) cfg.group_sizes = group_sizes;
    if (!epsilons.empty()) cfg.epsilons = epsilons;
    if (cfg.dataset_label.empty()) {
      fs::path p = cfg.dataset_path.empty() ? fs::path(run_opt.cache) : fs::path(cfg.dataset_path);
      cfg.dataset_label = p.stem().string();
    }
    cfg.validate();

    cgrs::Dataset ds = load_dataset(run_opt, /*split=*/true);
    cgrs::StatIndex ix = obtain_index(ds, run_opt.train_fraction, index_path);
    cgrs::RunArtifact artifact = cgrs::run_experiment_on(cfg, ds, ix);
    cgrs::emit_reports(artifact, run_out);

    std::size_t evaluated = 0;
    for (const auto& inst : artifact.instances) evaluated += inst.evaluated() ? 1 : 0;
    std::printf("evaluated %zu/%zu instances in %.2fs; reports in %s\n", evaluated,
                artifact.instances.size(), artifact.run_seconds, run_out.c_str());
    return kExitOk;
  }

  if (report->parsed()) {
    cgrs::RunArtifact artifact = cgrs::load_artifact(artifact_dir);
    cgrs::emit_reports(artifact, report_out);
    std::printf("re-emitted reports for %zu instances into %s\n", artifact.instances.size(),
                report_out.c_str());
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const cgrs::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cgrs::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cgrs::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const cgrs::run_failure& e) {
    std::cerr << "run failure: " << e.what() << "\n";
    return kExitRun;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRun;
  }
}
