#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cgrs/conformal.hpp"
#include "cgrs/eval.hpp"

namespace cgrs {

enum class GroupSetting { homogeneous, random };

GroupSetting group_setting_from(std::string_view tag);
std::string_view to_string(GroupSetting setting);
ScoreModel score_model_from(std::string_view tag);
std::string_view to_string(ScoreModel model);
ProfileStrategy profile_strategy_from(std::string_view tag);
std::string_view to_string(ProfileStrategy strategy);
std::string_view to_string(SourceFormat format);

/// Everything a run needs; mirrors the CLI flags one to one.
struct ExperimentConfig {
  std::string dataset_path;
  std::string dataset_label;  // defaults to the dataset file stem
  SourceFormat format = SourceFormat::tab_data;
  GroupSetting setting = GroupSetting::homogeneous;
  std::vector<std::size_t> group_sizes = {2, 3, 4, 5, 6};
  std::size_t n_instances = 500;
  std::vector<double> epsilons = {0.01, 0.05, 0.1, 0.2};
  double tau = 0.1;
  double train_fraction = 0.6;
  double calib_fraction = 0.25;
  std::size_t min_profile = 20;
  std::size_t top_k = 20;  // per-K metrics over 1..top_k; 0 disables them
  std::uint64_t global_seed = 42;
  ScoreModel model = ScoreModel::association;
  ProfileStrategy strategy = ProfileStrategy::hybrid;
  std::size_t max_group_attempts = 100000;

  void validate() const;  // throws config_error
  std::vector<std::size_t> k_values() const;
};

/// One experiment instance: the sampled group, what happened to it, and both
/// systems' metrics when it was evaluable.
struct InstanceOutcome {
  std::size_t group_size = 0;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::vector<UserId> members;
  bool homogeneous = false;
  std::string skip_reason;  // empty when evaluated
  std::size_t pool_size = 0;
  std::size_t truth_size = 0;
  MetricReport grs;
  MetricReport cgrs;
  // indexed like ExperimentConfig::epsilons
  std::vector<double> region_error;  // share of truth items with p <= epsilon
  std::vector<double> region_size;   // |{candidates with p > epsilon}|

  bool evaluated() const { return skip_reason.empty(); }
};

struct RunArtifact {
  ExperimentConfig config;
  std::vector<InstanceOutcome> instances;  // group-size major, instance minor
  double ingest_seconds = 0.0;
  double index_seconds = 0.0;
  double run_seconds = 0.0;
};

/// Loads the dataset named by the config, builds profiles and the stat index,
/// and runs the paired GRS/CGRS sweep. Fully deterministic for a given config.
RunArtifact run_experiment(const ExperimentConfig& config);

/// Same sweep over an already-prepared dataset and index.
RunArtifact run_experiment_on(const ExperimentConfig& config, const Dataset& dataset,
                              const StatIndex& index);

/// Writes manifest.txt, instances.csv, instances_topk.csv (full-precision
/// artifact rows) plus summary.csv, topk.csv, validity.csv (fixed 5-decimal
/// report tables) into out_dir.
void emit_reports(const RunArtifact& artifact, const std::filesystem::path& out_dir);

/// Rebuilds a RunArtifact from its emitted files, so reports can be re-derived
/// without re-running.
RunArtifact load_artifact(const std::filesystem::path& dir);

}  // namespace cgrs
