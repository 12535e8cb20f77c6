#pragma once

// Experiment orchestration: configuration, replica execution on independent
// RNG streams, CSV rows and JSON summaries.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sofic/group.hpp"
#include "sofic/rng.hpp"

namespace sofic {

/// Recognised kinds: first-moment, density, local-convergence, sofic,
/// concentration.
struct ExperimentConfig {
  std::string kind;
  int k = 3;
  std::optional<int> d;
  std::optional<double> eta;
  std::vector<int> n_list;
  std::uint64_t seed = 0;
  int replicas = 1;
  int level = 4;
  std::int64_t tree_samples = 100000;
  std::map<std::string, double> tolerances;
  std::string output;

  /// Throws InputError on an invalid record.
  void validate() const;
  /// d, or the count implied by eta.
  int resolved_d() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
/// One-line parameter record, echoed as "# params: ..." in every CSV.
std::string describe(const ExperimentConfig& config);

struct ExperimentReport {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string csv;
  std::string summary_json;
  bool pass = false;
  std::int64_t failed_rows = 0;
};

/// Runs every replica (stream = replica index) and, when config.output is
/// set, writes the CSV there and the summary next to it with a .json suffix.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct ConcentrationReport {
  std::vector<double> values;
  double mean = 0;
  /// Bin centres and counts of f - mean.
  std::vector<std::pair<double, std::int64_t>> histogram;
  /// Empirical P(|f - mean| > t) for t in {0.05, 0.1, 0.2}.
  std::map<double, double> tail;
};

/// f(sigma) = (1/d) sum_i d_Ham(sigma(s_i), ref(s_i)) over planted samples,
/// with ref a fixed planted sample; f is 1-Lipschitz in the per-generator
/// Hamming metric.
ConcentrationReport concentration_probe(const ModelParams& params, int replicas, std::uint64_t seed);

/// Calls body(i) for i in [0, count) on a small worker pool. Each index is
/// processed exactly once; callers write results to slot i.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace sofic
