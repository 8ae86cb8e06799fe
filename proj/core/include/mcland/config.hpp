#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcland/census.hpp"
#include "mcland/experiment.hpp"
#include "mcland/metric.hpp"

namespace mcland {

/// Where the instance of a command comes from: a file, or a graph built on
/// the fly plus a (perturbed) canonical ground truth.
struct ProblemSpec {
  std::optional<std::string> instance_file;
  /// Named pattern; empty together with erdos_renyi = false means no graph given.
  std::optional<Pattern> pattern;
  PatternParams pattern_params;
  bool erdos_renyi = false;
  double p = 0.3;
  int n = 0;
  int r = 1;
  /// 0-based; empty selects the greedy maximal independent set.
  std::optional<VertexSet> s;
  double gamma = 0.0;
  /// "canonical" (I_r blocks on S) or "gaussian".
  std::string ground_truth = "canonical";
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir = "out";

  ProblemSpec problem;
  LossSpec loss;
  InitDistribution init = InitDistribution::gaussian(1.0);
  GdConfig gd;

  // census
  std::int64_t n_starts = 0;
  double dedup_radius = 1e-4;

  // experiment
  std::vector<int> s_sizes;
  GammaGrid gamma_grid{10, 0.0, 0.5, {}};
  bool full_grid = false;
  std::int64_t trials = 0;
  double success_rel_tol = 1e-4;

  // metric
  MetricBudget budget;
  double separation = 0.0;

  // descend
  std::optional<std::string> init_file;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"gen", "solve", "descend", "census", "experiment", "metric", "check"};
  return names;
}

/// Parses a YAML (or JSON) key-value document. Unknown keys and missing
/// required keys raise ValidationError naming the field; syntax errors raise
/// ConfigParseError.
ExperimentConfig parse_config(const std::string& text, const std::optional<std::string>& command_override = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             const std::optional<std::string>& command_override = {});

/// Markdown reference of every key and its default.
std::string config_reference();

}  // namespace mcland
