#include "tangle/harness.hpp"

#include <atomic>
#include <mutex>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tangle/numfmt.hpp"

namespace tangle {

double metric_value(const EpisodeMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::steps: return m.steps;
    case Metric::ret: return m.accumulated_return;
    case Metric::visited_states: return static_cast<double>(m.visited_states);
    case Metric::qtable_pairs: return static_cast<double>(m.qtable_pairs);
  }
  throw std::logic_error("bad metric");
}

Metric metric_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
    if (name == kMetricNames[i]) return static_cast<Metric>(i);
  }
  throw std::invalid_argument("unknown metric column: " + name);
}

AggregateSeries aggregate(const std::vector<TrialSeries>& trials) {
  if (trials.empty()) throw std::invalid_argument("no trials to aggregate");
  const std::size_t episodes = trials[0].episodes.size();
  for (const TrialSeries& t : trials) {
    if (t.episodes.size() != episodes) {
      throw std::invalid_argument("trials disagree on episode count");
    }
  }
  AggregateSeries agg;
  std::vector<double> column(trials.size());
  for (std::size_t m = 0; m < 4; ++m) {
    agg.metrics[m].mean.resize(episodes);
    agg.metrics[m].sd.resize(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
      for (std::size_t k = 0; k < trials.size(); ++k) {
        column[k] = metric_value(trials[k].episodes[e], static_cast<Metric>(m));
      }
      const SampleSummary s = mean_sd(column);
      agg.metrics[m].mean[e] = s.mean;
      agg.metrics[m].sd[e] = s.sd;
    }
  }
  return agg;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void export_raw_csv(const std::filesystem::path& path,
                    const std::vector<TrialSeries>& trials) {
  std::ofstream out = open_out(path);
  out << "trial,episode,steps,return,visited_states,qtable_pairs\n";
  for (std::size_t k = 0; k < trials.size(); ++k) {
    for (std::size_t e = 0; e < trials[k].episodes.size(); ++e) {
      const EpisodeMetrics& m = trials[k].episodes[e];
      out << k << ',' << (e + 1) << ',' << m.steps << ','
          << format_double(m.accumulated_return) << ',' << m.visited_states << ','
          << m.qtable_pairs << '\n';
    }
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path.string());
}

std::vector<TrialSeries> load_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + ": empty file");
  }
  std::vector<TrialSeries> trials;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 6) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 6 columns");
    }
    const std::size_t trial = std::stoul(fields[0]);
    const std::size_t episode = std::stoul(fields[1]);
    if (trial >= trials.size()) trials.resize(trial + 1);
    if (episode != trials[trial].episodes.size() + 1) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": episodes out of order");
    }
    EpisodeMetrics m;
    m.steps = std::stoi(fields[2]);
    m.accumulated_return = std::strtod(fields[3].c_str(), nullptr);
    m.visited_states = std::stoul(fields[4]);
    m.qtable_pairs = std::stoul(fields[5]);
    trials[trial].episodes.push_back(m);
  }
  return trials;
}

void export_aggregate_csv(const std::filesystem::path& path,
                          const AggregateSeries& agg) {
  std::ofstream out = open_out(path);
  out << "episode";
  for (const char* name : kMetricNames) {
    out << ',' << name << "_mean," << name << "_sd";
  }
  out << '\n';
  for (std::size_t e = 0; e < agg.episodes(); ++e) {
    out << (e + 1);
    for (std::size_t m = 0; m < 4; ++m) {
      out << ',' << format_double(agg.metrics[m].mean[e]) << ','
          << format_double(agg.metrics[m].sd[e]);
    }
    out << '\n';
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path.string());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (uses_heuristic(config.algorithm) && !config.heuristic_from) {
    throw std::invalid_argument(std::string(algorithm_name(config.algorithm)) +
                                " needs --heuristic-from");
  }

  std::optional<HeuristicSource> source;
  if (config.heuristic_from) {
    source = load_heuristic_source(*config.heuristic_from, config.env.spec);
  }

  std::filesystem::create_directories(config.out_dir);

  std::vector<TrialSeries> trials(config.trials);
  std::vector<std::unique_ptr<Agent>> agents(config.trials);

  auto run_trial = [&](int k) {
    TrialResult r =
        train_trial(config.algorithm, config.env, config.learner,
                    source ? &*source : nullptr, config.base_seed + k);
    trials[k].episodes = std::move(r.episodes);
    agents[k] = std::move(r.agent);
  };

  if (config.parallel && config.trials > 1) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<unsigned>(hw, static_cast<unsigned>(config.trials));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (int k = next.fetch_add(1); k < config.trials;
               k = next.fetch_add(1)) {
            run_trial(k);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  } else {
    for (int k = 0; k < config.trials; ++k) run_trial(k);
  }

  if (config.persist_artifacts) {
    const std::vector<ActionTriple> actions = enumerate_actions(config.env.spec);
    for (int k = 0; k < config.trials; ++k) {
      const std::filesystem::path trial_dir =
          config.out_dir / ("trial" + std::to_string(k));
      std::filesystem::create_directories(trial_dir);
      save_qtable(trial_dir / "qtable.tsv", config.env.spec, actions,
                  agents[k]->qtable());
      if (const GlobalProgram* program = agents[k]->program()) {
        program->write_files(trial_dir / "programs");
      }
    }
  }

  ExperimentResult result;
  result.aggregate = aggregate(trials);
  result.trials = std::move(trials);
  export_raw_csv(config.out_dir / "raw.csv", result.trials);
  export_aggregate_csv(config.out_dir / "aggregate.csv", result.aggregate);
  return result;
}

std::vector<TTestResult> ttest_by_episode(const std::vector<TrialSeries>& a,
                                          const std::vector<TrialSeries>& b,
                                          Metric metric, bool pooled) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty series");
  const std::size_t episodes = a[0].episodes.size();
  for (const auto& series : {&a, &b}) {
    for (const TrialSeries& t : *series) {
      if (t.episodes.size() != episodes) {
        throw std::invalid_argument("series disagree on episode count");
      }
    }
  }
  std::vector<TTestResult> out;
  out.reserve(episodes);
  std::vector<double> va(a.size()), vb(b.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      va[k] = metric_value(a[k].episodes[e], metric);
    }
    for (std::size_t k = 0; k < b.size(); ++k) {
      vb[k] = metric_value(b[k].episodes[e], metric);
    }
    out.push_back(pooled ? pooled_t_test(va, vb) : welch_t_test(va, vb));
  }
  return out;
}

void export_ttest_csv(const std::filesystem::path& path,
                      const std::vector<TTestResult>& results) {
  std::ofstream out = open_out(path);
  out << "episode,t,df,p\n";
  for (std::size_t e = 0; e < results.size(); ++e) {
    out << (e + 1) << ',' << format_double(results[e].t) << ','
        << format_double(results[e].df) << ',' << format_double(results[e].p)
        << '\n';
  }
  if (!out.good()) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace tangle
