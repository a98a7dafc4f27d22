#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tangle/learn.hpp"
#include "tangle/stats.hpp"

namespace tangle {

// Experiment driver: runs independent seeded trials, collects the four
// per-episode metrics, writes raw and aggregate CSVs, and persists each
// trial's learned table and rule programs.

inline constexpr std::array<const char*, 4> kMetricNames = {
    "steps", "return", "visited_states", "qtable_pairs"};

enum class Metric : std::size_t { steps, ret, visited_states, qtable_pairs };

double metric_value(const EpisodeMetrics& m, Metric metric);
Metric metric_from_name(const std::string& name);

struct ExperimentConfig {
  EnvConfig env;
  AlgorithmKind algorithm = AlgorithmKind::qlearning;
  LearnerConfig learner;
  int trials = 30;
  std::uint64_t base_seed = 1;  // trial k runs on base_seed + k
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> heuristic_from;
  bool parallel = false;
  bool persist_artifacts = true;  // per-trial q-table and programs
};

struct TrialSeries {
  std::vector<EpisodeMetrics> episodes;
};

struct AggregateSeries {
  struct PerMetric {
    std::vector<double> mean;
    std::vector<double> sd;
  };
  std::array<PerMetric, 4> metrics;  // indexed by Metric
  std::size_t episodes() const { return metrics[0].mean.size(); }
};

// Per-episode mean and sample standard deviation across trials. Trials must
// agree on episode count.
AggregateSeries aggregate(const std::vector<TrialSeries>& trials);

void export_raw_csv(const std::filesystem::path& path,
                    const std::vector<TrialSeries>& trials);
std::vector<TrialSeries> load_raw_csv(const std::filesystem::path& path);

void export_aggregate_csv(const std::filesystem::path& path,
                          const AggregateSeries& agg);

struct ExperimentResult {
  std::vector<TrialSeries> trials;
  AggregateSeries aggregate;
};

// Runs config.trials independent trials (in parallel when asked; outputs do
// not depend on scheduling). Writes raw.csv and aggregate.csv under
// config.out_dir plus trial<k>/qtable.tsv and trial<k>/programs/* artifacts.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Welch's (default) or pooled t-test per episode between two raw series.
std::vector<TTestResult> ttest_by_episode(const std::vector<TrialSeries>& a,
                                          const std::vector<TrialSeries>& b,
                                          Metric metric, bool pooled = false);

void export_ttest_csv(const std::filesystem::path& path,
                      const std::vector<TTestResult>& results);

}  // namespace tangle
