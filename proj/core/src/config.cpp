#include "mcland/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mcland/error.hpp"

namespace mcland {
namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationError, field + ": " + why);
}

void check_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& known) {
  if (!node.IsMap()) invalid(prefix.empty() ? "config" : prefix, "expected a key-value map");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) invalid(prefix.empty() ? key : prefix + "." + key, "unknown field");
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& path, T fallback) {
  const YAML::Node v = node[key];
  if (!v || v.IsNull()) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    invalid(path, "wrong type");
  }
}

template <typename T>
T require(const YAML::Node& node, const std::string& key, const std::string& path) {
  if (!node[key] || node[key].IsNull()) invalid(path, "missing required field");
  return get<T>(node, key, path, T{});
}

ProblemSpec parse_problem(const YAML::Node& node) {
  check_keys(node, "problem",
             {"instance_file", "pattern", "size", "k", "p", "n", "r", "S", "gamma", "ground_truth"});
  ProblemSpec spec;
  if (node["instance_file"]) {
    spec.instance_file = require<std::string>(node, "instance_file", "problem.instance_file");
    return spec;
  }
  spec.n = require<int>(node, "n", "problem.n");
  spec.r = get<int>(node, "r", "problem.r", 1);
  if (spec.n < 1) invalid("problem.n", "must be positive");
  if (spec.r < 1 || spec.r > spec.n) invalid("problem.r", "must satisfy 1 <= r <= n");
  const auto pattern = get<std::string>(node, "pattern", "problem.pattern", "");
  if (pattern == "erdos_renyi") {
    spec.erdos_renyi = true;
  } else if (!pattern.empty()) {
    try {
      spec.pattern = parse_pattern(pattern);
    } catch (const Error& e) {
      invalid("problem.pattern", e.what());
    }
  }
  spec.pattern_params.size = get<int>(node, "size", "problem.size", spec.n / spec.r);
  spec.pattern_params.k = get<int>(node, "k", "problem.k", 1) - 1;
  spec.pattern_params.r = spec.r;
  spec.p = get<double>(node, "p", "problem.p", 0.3);
  if (spec.p < 0.0 || spec.p > 1.0) invalid("problem.p", "must lie in [0, 1]");
  if (node["S"]) {
    VertexSet s;
    for (int v : get<std::vector<int>>(node, "S", "problem.S", {})) s.push_back(v - 1);
    spec.s = normalize_vertex_set(s);
  }
  spec.gamma = get<double>(node, "gamma", "problem.gamma", 0.0);
  if (spec.gamma < 0.0) invalid("problem.gamma", "must be nonnegative");
  spec.ground_truth = get<std::string>(node, "ground_truth", "problem.ground_truth", "canonical");
  if (spec.ground_truth != "canonical" && spec.ground_truth != "gaussian") {
    invalid("problem.ground_truth", "expected canonical or gaussian");
  }
  if (!spec.pattern && !spec.erdos_renyi) invalid("problem.pattern", "missing required field");
  return spec;
}

GdConfig parse_gd(const YAML::Node& node) {
  check_keys(node, "gd", {"step", "max_iters", "grad_tol", "divergence_bound"});
  GdConfig gd;
  gd.step = get<double>(node, "step", "gd.step", 0.0);
  gd.max_iters = get<std::int64_t>(node, "max_iters", "gd.max_iters", gd.max_iters);
  gd.grad_tol = get<double>(node, "grad_tol", "gd.grad_tol", 0.0);
  gd.divergence_bound = get<double>(node, "divergence_bound", "gd.divergence_bound", 0.0);
  if (gd.step < 0.0) invalid("gd.step", "must be positive (0 = automatic)");
  if (gd.max_iters < 1) invalid("gd.max_iters", "must be positive");
  if (gd.grad_tol < 0.0) invalid("gd.grad_tol", "must be positive (0 = automatic)");
  if (gd.divergence_bound < 0.0) invalid("gd.divergence_bound", "must be positive (0 = automatic)");
  return gd;
}

InitDistribution parse_init(const YAML::Node& node) {
  check_keys(node, "init", {"dist", "scale"});
  const auto dist = get<std::string>(node, "dist", "init.dist", "gaussian");
  const double scale = get<double>(node, "scale", "init.scale", 1.0);
  if (!(scale > 0.0)) invalid("init.scale", "must be positive");
  if (dist == "gaussian") return InitDistribution::gaussian(scale);
  if (dist == "ball") return InitDistribution::ball(scale);
  invalid("init.dist", "expected gaussian or ball");
}

LossSpec parse_loss(const YAML::Node& node) {
  check_keys(node, "loss", {"kind", "lambda", "alpha"});
  const auto kind = get<std::string>(node, "kind", "loss.kind", "l2");
  if (kind == "l2") return LossSpec::l2();
  if (kind != "l2_regularized") invalid("loss.kind", "expected l2 or l2_regularized");
  const double lambda = require<double>(node, "lambda", "loss.lambda");
  const double alpha = require<double>(node, "alpha", "loss.alpha");
  if (!(lambda > 0.0)) invalid("loss.lambda", "must be positive");
  if (!(alpha > 0.0)) invalid("loss.alpha", "must be positive");
  return LossSpec::regularized(lambda, alpha);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::optional<std::string>& command_override) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::ConfigParseError, std::string("config: ") + e.what());
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  check_keys(root, "",
             {"command", "seed", "threads", "out_dir", "problem", "loss", "init", "gd", "n_starts", "dedup_radius",
              "S_sizes", "gamma_grid", "full_grid", "trials", "success_rel_tol", "budget", "separation",
              "init_file"});

  ExperimentConfig cfg;
  cfg.command = command_override ? *command_override : require<std::string>(root, "command", "command");
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end()) invalid("command", "unknown command '" + cfg.command + "'");
  cfg.seed = get<std::uint64_t>(root, "seed", "seed", 0);
  cfg.threads = get<int>(root, "threads", "threads", 0);
  if (cfg.threads < 0) invalid("threads", "must be nonnegative");
  cfg.out_dir = get<std::string>(root, "out_dir", "out_dir", "out");
  if (root["loss"]) cfg.loss = parse_loss(root["loss"]);
  if (root["init"]) cfg.init = parse_init(root["init"]);
  if (root["gd"]) cfg.gd = parse_gd(root["gd"]);
  cfg.init_file = root["init_file"] ? std::optional(get<std::string>(root, "init_file", "init_file", "")) : std::nullopt;

  if (!root["problem"]) invalid("problem", "missing required field");
  cfg.problem = parse_problem(root["problem"]);

  if (cfg.command == "census") {
    cfg.n_starts = require<std::int64_t>(root, "n_starts", "n_starts");
    if (cfg.n_starts < 1) invalid("n_starts", "must be positive");
  }
  cfg.dedup_radius = get<double>(root, "dedup_radius", "dedup_radius", 1e-4);
  if (!(cfg.dedup_radius > 0.0)) invalid("dedup_radius", "must be positive");

  if (cfg.command == "experiment") {
    if (cfg.problem.instance_file) invalid("problem.instance_file", "experiment builds its own instances");
    cfg.trials = require<std::int64_t>(root, "trials", "trials");
    if (cfg.trials < 1) invalid("trials", "must be positive");
    cfg.s_sizes = require<std::vector<int>>(root, "S_sizes", "S_sizes");
    if (cfg.s_sizes.empty()) invalid("S_sizes", "must be nonempty");
    for (int s : cfg.s_sizes) {
      if (s < 1 || s >= cfg.problem.n / cfg.problem.r) invalid("S_sizes", "each size must lie in [1, m - 1]");
    }
    cfg.full_grid = get<bool>(root, "full_grid", "full_grid", false);
    if (const YAML::Node grid = root["gamma_grid"]) {
      check_keys(grid, "gamma_grid", {"count", "lo", "hi", "extra"});
      cfg.gamma_grid.count = get<int>(grid, "count", "gamma_grid.count", 10);
      cfg.gamma_grid.lo = get<double>(grid, "lo", "gamma_grid.lo", 0.0);
      cfg.gamma_grid.hi = get<double>(grid, "hi", "gamma_grid.hi", 0.5);
      cfg.gamma_grid.extra = get<std::vector<double>>(grid, "extra", "gamma_grid.extra", {});
      if (cfg.gamma_grid.count < 0) invalid("gamma_grid.count", "must be nonnegative");
      if (!(cfg.gamma_grid.hi > cfg.gamma_grid.lo)) invalid("gamma_grid.hi", "must exceed gamma_grid.lo");
    }
    if (cfg.full_grid) {
      cfg.gamma_grid.count = 100;
      cfg.gamma_grid.lo = 0.0;
      cfg.gamma_grid.hi = 0.5;
    }
    cfg.success_rel_tol = get<double>(root, "success_rel_tol", "success_rel_tol", 1e-4);
    if (!(cfg.success_rel_tol > 0.0)) invalid("success_rel_tol", "must be positive");
  }

  if (const YAML::Node b = root["budget"]) {
    check_keys(b, "budget", {"restarts", "iters", "rounds", "rho0"});
    cfg.budget.restarts = get<int>(b, "restarts", "budget.restarts", cfg.budget.restarts);
    cfg.budget.iters = get<int>(b, "iters", "budget.iters", cfg.budget.iters);
    cfg.budget.rounds = get<int>(b, "rounds", "budget.rounds", cfg.budget.rounds);
    cfg.budget.rho0 = get<double>(b, "rho0", "budget.rho0", cfg.budget.rho0);
    if (cfg.budget.restarts < 1) invalid("budget.restarts", "must be positive");
    if (cfg.budget.iters < 1) invalid("budget.iters", "must be positive");
    if (cfg.budget.rounds < 1) invalid("budget.rounds", "must be positive");
    if (!(cfg.budget.rho0 > 0.0)) invalid("budget.rho0", "must be positive");
  }
  cfg.separation = get<double>(root, "separation", "separation", 0.0);
  if (cfg.separation < 0.0) invalid("separation", "must be positive (0 = automatic)");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::optional<std::string>& command_override) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, path.string() + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), command_override);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
  }
}

std::string config_reference() {
  return R"(# mcland configuration reference

Configs are YAML key-value files (JSON is accepted too). Vertex and entry
labels are 1-based. Unknown keys are rejected.

## Top level

| key | default | meaning |
|-----|---------|---------|
| command | required unless given on the command line | gen, solve, descend, census, experiment, metric, check |
| seed | 0 | single source of all randomness |
| threads | 0 (all cores) | worker threads; outputs do not depend on it |
| out_dir | out | output directory; overridden by --out and MCLAND_OUT_DIR |
| problem | required | instance source, see below |
| loss | kind: l2 | `kind: l2` or `kind: l2_regularized` with `lambda`, `alpha` |
| init | dist: gaussian, scale: 1 | radial initialization: `gaussian` (sigma = scale) or `ball` (radius = scale) |
| init_file | none | descend: JSON factor used instead of a sampled start |
| gd.step | 0 (automatic) | constant step; 0 = 0.25 / (4 (norm(M*_Omega) + 3 rho^2)) |
| gd.max_iters | 200000 | iteration cap |
| gd.grad_tol | 0 (automatic) | 1e-9 (1 + norm(M*_Omega)); census uses 1e-6 (1 + ...) before Newton |
| gd.divergence_bound | 0 (automatic) | 10 (1 + norm(X*)) |
| n_starts | required for census | multistart count |
| dedup_radius | 1e-4 | census merge radius in canonical coordinates |
| S_sizes | required for experiment | sizes of S = {1..k} to sweep |
| gamma_grid | count 10, lo 0, hi 0.5 | count equally spaced values inside (lo, hi); `extra` adds values |
| full_grid | false | forces the 100-point grid on (0, 0.5) |
| trials | required for experiment | GD runs per gamma |
| success_rel_tol | 1e-4 | success iff norm(X X^T - M*) <= tol norm(M*) |
| budget | restarts 16, iters 200, rounds 5, rho0 100 | metric estimator budget |
| separation | 0 (automatic) | metric separation; 0 = 1e-3 norm(M*) |

## problem

Either `instance_file: path` (instance JSON), or a generated instance:

| key | default | meaning |
|-----|---------|---------|
| pattern | required | example1_path, example2_even_cross, star, single_missing, cross, augmented_cross, single_missing_rank_r, erdos_renyi |
| n | required | matrix side |
| r | 1 | rank / block size |
| size | n / r | pattern vertex count |
| k | 1 | hub vertex of cross patterns |
| p | 0.3 | edge probability for erdos_renyi |
| S | greedy maximal independent set | support of the canonical ground truth |
| gamma | 0 | perturbation size; direction seeded from `seed` |
| ground_truth | canonical | canonical (I_r blocks on S) or gaussian |

## Outputs

| command | files |
|---------|-------|
| gen | instance.json |
| solve | solve.json |
| descend | descend.json |
| census | census.json |
| experiment | success_rate.csv |
| metric | metric.json |
| check | check.json |

Exit codes: 0 success, 1 validation, 2 numerical failure, 3 I/O.
)";
}

}  // namespace mcland
