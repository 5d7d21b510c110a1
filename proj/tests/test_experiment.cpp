#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgrs/errors.hpp"
#include "cgrs/experiment.hpp"
#include "test_support.hpp"

using namespace cgrs;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("cgrs_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.dataset_label = "synthetic";
  cfg.setting = GroupSetting::homogeneous;
  cfg.group_sizes = {2};
  cfg.n_instances = 6;
  cfg.epsilons = {0.05, 0.1, 0.2};
  cfg.tau = 0.1;
  cfg.min_profile = 10;
  cfg.top_k = 5;
  cfg.global_seed = 99;
  return cfg;
}

struct Prepared {
  Dataset dataset;
  StatIndex index;
};

Prepared prepared_world(std::uint64_t seed = 12) {
  Dataset ds = split_profiles(testsup::synthetic_dataset(seed, 80, 60, 20, 0.8));
  StatIndex ix = StatIndex::build(ds);
  return {std::move(ds), std::move(ix)};
}

}  // namespace

TEST_CASE("config validation rejects out-of-range settings") {
  ExperimentConfig cfg = small_config();
  cfg.n_instances = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = small_config();
  cfg.epsilons = {1.5};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = small_config();
  cfg.train_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = small_config();
  cfg.group_sizes = {1};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = small_config();
  cfg.calib_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("a single-instance run yields one metric row per system") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  cfg.n_instances = 1;
  RunArtifact a = run_experiment_on(cfg, w.dataset, w.index);
  REQUIRE(a.instances.size() == 1);
  const InstanceOutcome& inst = a.instances[0];
  REQUIRE(inst.evaluated());
  CHECK(inst.grs.ap >= 0.0);
  CHECK(inst.cgrs.ap >= 0.0);
  CHECK(inst.members.size() == 2);
  CHECK(inst.region_error.size() == cfg.epsilons.size());
  CHECK(inst.truth_size > 0);
  CHECK(inst.pool_size > inst.truth_size);
}

TEST_CASE("runs are deterministic: identical config and seed, byte-identical reports") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();

  fs::path d1 = temp_dir("det1"), d2 = temp_dir("det2");
  emit_reports(run_experiment_on(cfg, w.dataset, w.index), d1);
  emit_reports(run_experiment_on(cfg, w.dataset, w.index), d2);

  for (const char* name : {"summary.csv", "topk.csv", "validity.csv", "manifest.txt",
                           "instances.csv", "instances_topk.csv"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }

  // a different seed visibly changes the sampled groups
  cfg.global_seed = 100;
  fs::path d3 = temp_dir("det3");
  emit_reports(run_experiment_on(cfg, w.dataset, w.index), d3);
  CHECK(slurp(d1 / "manifest.txt") != slurp(d3 / "manifest.txt"));
}

TEST_CASE("summary of a single instance equals that instance's rows") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  cfg.n_instances = 1;
  RunArtifact a = run_experiment_on(cfg, w.dataset, w.index);
  fs::path dir = temp_dir("single");
  emit_reports(a, dir);

  std::istringstream summary(slurp(dir / "summary.csv"));
  std::string line;
  std::getline(summary, line);  // header
  char ap_buf[32];
  while (std::getline(summary, line)) {
    const bool is_grs = line.find(",grs,") != std::string::npos;
    const MetricReport& m = is_grs ? a.instances[0].grs : a.instances[0].cgrs;
    std::snprintf(ap_buf, sizeof(ap_buf), "%.5f", m.ap);
    CHECK(line.find(ap_buf) != std::string::npos);
    CHECK(line.substr(line.size() - 2) == ",1");  // n_eval
  }
}

TEST_CASE("topk.csv is header-only when the K range is empty") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  cfg.top_k = 0;
  fs::path dir = temp_dir("nok");
  emit_reports(run_experiment_on(cfg, w.dataset, w.index), dir);
  CHECK(slurp(dir / "topk.csv") == "dataset,setting,group_size,system,k,precision,recall,f1\n");
}

TEST_CASE("validity.csv has one row per epsilon, with plausible aggregates") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  fs::path dir = temp_dir("val");
  RunArtifact a = run_experiment_on(cfg, w.dataset, w.index);
  emit_reports(a, dir);

  std::istringstream in(slurp(dir / "validity.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "epsilon,empirical_error,region_size_mean");
  std::size_t rows = 0;
  double prev_region = 1e18;
  while (std::getline(in, line)) {
    ++rows;
    double eps, err, region;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &eps, &err, &region) == 3);
    CHECK(err >= 0.0);
    CHECK(err <= 1.0);
    CHECK(region <= prev_region);  // regions shrink as epsilon grows
    prev_region = region;
  }
  CHECK(rows == cfg.epsilons.size());
}

TEST_CASE("artifacts reload and re-emit byte-identically") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  fs::path first = temp_dir("art1");
  emit_reports(run_experiment_on(cfg, w.dataset, w.index), first);

  RunArtifact reloaded = load_artifact(first);
  CHECK(reloaded.config.global_seed == cfg.global_seed);
  CHECK(reloaded.config.epsilons == cfg.epsilons);
  CHECK(reloaded.instances.size() == cfg.n_instances);

  fs::path second = temp_dir("art2");
  emit_reports(reloaded, second);
  for (const char* name : {"summary.csv", "topk.csv", "validity.csv", "manifest.txt",
                           "instances.csv", "instances_topk.csv"}) {
    CHECK(slurp(first / name) == slurp(second / name));
  }
}

TEST_CASE("skips are recorded, and an unevaluable run fails") {
  // two disjoint user cliques: homogeneous pairs exist inside a clique, and
  // max_group_attempts=1 forces frequent rejection-based skips
  std::vector<std::vector<ItemId>> logs;
  for (int u = 0; u < 6; ++u) {
    std::vector<ItemId> items;
    for (ItemId i = 1; i <= 12; ++i) items.push_back(u < 3 ? i : i + 100);
    logs.push_back(items);
  }
  Dataset ds = split_profiles(testsup::dataset_from_logs(logs), 0.6);
  StatIndex ix = StatIndex::build(ds);

  ExperimentConfig cfg = small_config();
  cfg.min_profile = 2;
  cfg.n_instances = 30;
  cfg.max_group_attempts = 1;
  RunArtifact a = run_experiment_on(cfg, ds, ix);
  std::size_t skipped = 0;
  for (const auto& inst : a.instances) {
    if (!inst.evaluated()) {
      ++skipped;
      CHECK(inst.skip_reason == "no_homogeneous_group");
    }
  }
  CHECK(skipped > 0);
  CHECK(skipped < a.instances.size());

  // no user shares anything across cliques: size-4 homogeneous groups are
  // impossible, so every instance skips and the run fails
  ExperimentConfig doomed = cfg;
  doomed.group_sizes = {4};
  doomed.max_group_attempts = 50;
  CHECK_THROWS_AS(run_experiment_on(doomed, ds, ix), run_failure);
}

TEST_CASE("run_experiment ingests from disk and errors cleanly when missing") {
  // write a tab_data file for a synthetic world
  Dataset world = testsup::synthetic_dataset(5, 60, 50, 16, 0.8);
  fs::path dir = temp_dir("ingest");
  fs::path data = dir / "events.tsv";
  {
    std::ofstream out(data);
    for (const auto& p : world.profiles) {
      for (std::size_t t = 0; t < p.items.size(); ++t) {
        out << p.user << '\t' << p.items[t] << '\t' << 3 << '\t' << (t + 1) << '\n';
      }
    }
  }

  ExperimentConfig cfg = small_config();
  cfg.dataset_path = data.string();
  cfg.format = SourceFormat::tab_data;
  cfg.min_profile = 10;
  cfg.n_instances = 3;
  RunArtifact a = run_experiment(cfg);
  CHECK(a.instances.size() == 3);
  CHECK(a.ingest_seconds >= 0.0);

  cfg.dataset_path = (dir / "absent.tsv").string();
  CHECK_THROWS_AS(run_experiment(cfg), io_error);
}

TEST_CASE("random setting samples groups without the homogeneity gate") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  cfg.setting = GroupSetting::random;
  cfg.n_instances = 8;
  RunArtifact a = run_experiment_on(cfg, w.dataset, w.index);
  std::size_t evaluated = 0;
  for (const auto& inst : a.instances) evaluated += inst.evaluated() ? 1 : 0;
  CHECK(evaluated == 8);

  // the manifest still records each group's homogeneity flag
  fs::path dir = temp_dir("rand");
  emit_reports(a, dir);
  CHECK(slurp(dir / "manifest.txt").find("setting=random") != std::string::npos);
}

TEST_CASE("paired systems see identical groups") {
  Prepared w = prepared_world();
  ExperimentConfig cfg = small_config();
  RunArtifact a = run_experiment_on(cfg, w.dataset, w.index);
  for (const auto& inst : a.instances) {
    if (!inst.evaluated()) continue;
    // per-instance pool/truth sizes are shared by construction; both reports
    // must refer to the same ranking universe
    CHECK(inst.pool_size > 0);
    CHECK(inst.grs.precision_at.size() == cfg.top_k);
    CHECK(inst.cgrs.precision_at.size() == cfg.top_k);
  }
}
