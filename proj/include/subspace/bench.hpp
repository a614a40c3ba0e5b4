#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subspace/params.hpp"
#include "subspace/sampling.hpp"

namespace subspace::bench {

enum class ExperimentKind { gen, recover, cluster, sweep, theory };

/// Flat experiment description, fillable from a key=value config file and/or
/// command-line flags.  Unset counts (0) fall back to per-kind defaults.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::recover;
  bool kind_from_config = false;

  std::vector<TheoryParams> rows;
  int trials = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms;
  std::string out;
  int workers = 1;
  ReplacementMode replacement = ReplacementMode::with_replacement;
  long long iteration_cap = 1'000'000;
  bool unknown_dimension = false;
  long long budget_per_dim = 100;
  int affinity_tuples = 500;

  std::vector<int> sweep_d = {1, 2, 3, 4};
  std::vector<double> sweep_ratio = {1.25, 1.5, 2.0};
  int sweep_m = 40;
  int sweep_p = 10;

  std::string scene_prefix;
  int audit_samples = 64;
};

/// Applies one key=value pair; throws ConfigError on unknown keys or values
/// that do not parse.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// Reads a flat key=value file ('#' starts a comment).
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// One per-trial CSV row; unset optionals become empty cells.
struct TrialRecord {
  std::string experiment;
  std::string algorithm;
  std::optional<int> d, p, K, m, m0, n;
  int trial = 0;
  std::uint64_t seed = 0;
  long long iterations = 0;
  std::optional<double> angle;
  std::optional<double> rand_index_value;
  std::optional<int> exact;
  double elapsed_s = 0.0;
  std::string replacement_mode;
};

struct SummaryRecord {
  std::string experiment;
  std::string algorithm;
  std::optional<int> d, p, K, m, m0, n;
  int trials = 0;
  double mean_iterations = 0.0;
  double se_iterations = 0.0;
  std::optional<double> theory_iterations;
  std::optional<double> mean_angle;
  std::optional<double> exact_fraction;
  std::optional<double> mean_rand_index;
};

struct SweepCell {
  int d = 0;
  double ratio = 0.0;
  std::optional<double> empirical_mean;
  double theory_mean = 0.0;
  std::optional<double> se;
  int trials = 0;
  std::string skip_reason;  // empty when the cell ran
};

struct TheoryRecord {
  TheoryParams params;
  double theta1_value = 0.0;
  std::optional<double> theta2_value;
  double expected_ransac = 0.0;
  double expected_without_replacement = 0.0;
  std::optional<double> expected_hm;
  double expected_clustering = 0.0;
  double negative_binomial_bound = 0.0;
};

struct ExperimentOutput {
  std::vector<TrialRecord> trials;
  std::vector<SummaryRecord> summary;
  std::vector<SweepCell> sweep;
  std::vector<TheoryRecord> theory;
};

ExperimentOutput run_recovery_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_clustering_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_complexity_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_theory_table(const ExperimentConfig& cfg);
void run_generate(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind and, when cfg.out is set, writes the CSV outputs
/// (per-trial CSV plus <out minus .csv>.summary.csv for trial experiments)
/// and a .meta sidecar describing how to reproduce the run.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

std::string trial_csv(const std::vector<TrialRecord>& rows);
std::string summary_csv(const std::vector<SummaryRecord>& rows);
std::string sweep_csv(const std::vector<SweepCell>& cells);
std::string theory_csv(const std::vector<TheoryRecord>& rows);
std::string metadata_text(const ExperimentConfig& cfg);

}  // namespace subspace::bench
