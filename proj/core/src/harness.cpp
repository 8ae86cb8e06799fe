#include "mcland/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mcland/completion.hpp"
#include "mcland/rng.hpp"
#include "mcland/serialize.hpp"

namespace mcland {
namespace {

constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kTruthStream = 2;
constexpr std::uint64_t kPerturbStream = 3;
constexpr std::uint64_t kInitStream = 4;

std::filesystem::path output_dir(const ExperimentConfig& cfg, const RunOverrides& overrides) {
  if (overrides.out_dir) return *overrides.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return cfg.out_dir;
}

std::optional<VertexSet> support_for_bound(const ExperimentConfig& cfg, const McInstance& inst) {
  if (cfg.problem.s) return cfg.problem.s;
  if (inst.graph()) return greedy_maximal_independent_set(*inst.graph());
  return std::nullopt;
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::ZeroMatrix:
    case ErrorCode::NoOddCycle:
    case ErrorCode::Disconnected:
    case ErrorCode::SingularBlock:
    case ErrorCode::NotPSD:
    case ErrorCode::SingularHessian:
    case ErrorCode::NotNearCritical:
    case ErrorCode::UnmatchedEndpoint:
      return 2;
    default:
      return 1;
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, path.parent_path().string() + ": " + ec.message());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, tmp.string() + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit_plot_data(SuccessRateTable table, const std::filesystem::path& path) {
  if (table.empty()) throw Error(ErrorCode::InvalidParams, "success-rate table is empty");
  std::stable_sort(table.begin(), table.end(), [](const SuccessRateRow& a, const SuccessRateRow& b) {
    return a.s_size != b.s_size ? a.s_size < b.s_size : a.gamma < b.gamma;
  });
  write_file_atomic(path, success_table_to_csv(table));
}

McInstance build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  if (spec.instance_file) return instance_from_json(read_file(*spec.instance_file));
  const int m = spec.n / spec.r;
  BlockSparsityGraph g = [&] {
    if (spec.erdos_renyi) {
      if (!spec.s) throw Error(ErrorCode::ValidationError, "problem.S: required for erdos_renyi");
      return build_erdos_renyi(m, spec.p, *spec.s, derive_seed(seed, kGraphStream));
    }
    return build_named_pattern(*spec.pattern, spec.pattern_params);
  }();
  if (g.m() != m) {
    throw Error(ErrorCode::ValidationError,
                "problem.size: pattern has " + std::to_string(g.m()) + " vertices but n / r = " + std::to_string(m));
  }
  FactorMatrix x_star;
  if (spec.ground_truth == "gaussian") {
    x_star = build_random_ground_truth(spec.n, spec.r, derive_seed(seed, kTruthStream));
  } else {
    const VertexSet s = spec.s ? *spec.s : greedy_maximal_independent_set(g);
    x_star = build_canonical_ground_truth(g, s, spec.n, spec.r);
  }
  x_star = perturb(x_star, spec.gamma, derive_seed(seed, kPerturbStream));
  const MeasurementSet omega = induce_measurement_set(g, spec.n, spec.r);
  return assemble_instance(x_star, omega, std::move(g));
}

RunOutcome run_experiment_config(ExperimentConfig cfg, const RunOverrides& overrides) {
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) cfg.threads = *overrides.threads;
  const std::filesystem::path dir = output_dir(cfg, overrides);
  RunOutcome outcome;
  auto emit = [&](const std::string& name, const std::string& contents) {
    const auto path = dir / name;
    write_file_atomic(path, contents);
    outcome.files.push_back(path);
  };

  if (cfg.command == "experiment") {
    SuccessRateTable table;
    const std::vector<double> gammas = cfg.gamma_grid.values();
    for (int size : cfg.s_sizes) {
      ExperimentSpec spec;
      if (cfg.problem.pattern) {
        spec.pattern = cfg.problem.pattern;
        spec.pattern_params = cfg.problem.pattern_params;
      }
      spec.p = cfg.problem.p;
      spec.n = cfg.problem.n;
      spec.r = cfg.problem.r;
      for (int v = 0; v < size; ++v) spec.s.push_back(v);
      spec.gammas = gammas;
      spec.trials = cfg.trials;
      spec.init = cfg.init;
      spec.gd = cfg.gd;
      spec.success_rel_tol = cfg.success_rel_tol;
      spec.seed = cfg.seed;
      spec.threads = cfg.threads;
      const SuccessRateTable part = success_rate_experiment(spec);
      table.insert(table.end(), part.begin(), part.end());
    }
    const auto path = dir / "success_rate.csv";
    emit_plot_data(table, path);
    outcome.files.push_back(path);
    outcome.summary = std::to_string(table.size()) + " rows written to " + path.string();
    return outcome;
  }

  const McInstance inst = build_problem(cfg.problem, cfg.seed);
  if (cfg.command == "gen") {
    emit("instance.json", instance_to_json(inst));
    outcome.summary = "instance n=" + std::to_string(inst.n()) + " r=" + std::to_string(inst.r()) +
                      " |Omega|=" + std::to_string(inst.omega().size());
  } else if (cfg.command == "solve") {
    const CompletionResult result = solve_by_propagation(inst);
    const double err = relative_completion_error(inst, result.recovered_factor);
    emit("solve.json", completion_to_json(result, err));
    outcome.summary = "relative_error=" + format_double(err);
  } else if (cfg.command == "descend") {
    const Landscape landscape(inst, cfg.loss);
    const FactorMatrix x0 = cfg.init_file
                                ? factor_from_json(read_file(*cfg.init_file))
                                : sample_radial_init(cfg.init, inst.n(), inst.r(), derive_seed(cfg.seed, kInitStream));
    const RunResult run = gradient_descent(landscape, x0.matrix(), cfg.gd);
    const Classification c =
        assess_point(landscape, run.final_point.matrix(), ClassifyTolerances::defaults(landscape)).classification;
    emit("descend.json", run_result_to_json(run, c));
    outcome.summary = std::string(to_string(run.status)) + " after " + std::to_string(run.iterations) +
                      " iterations, f=" + format_double(run.final_objective) + ", " + std::string(to_string(c));
  } else if (cfg.command == "census") {
    CensusConfig census;
    census.init = cfg.init;
    census.gd = cfg.gd;
    census.dedup_radius = cfg.dedup_radius;
    census.threads = cfg.threads;
    const CensusReport report = multistart_census(inst, cfg.loss, cfg.n_starts, cfg.seed, census);
    std::optional<LowerBoundCheck> bound;
    if (inst.graph()) bound = check_lower_bound(report, *inst.graph(), inst.r(), support_for_bound(cfg, inst));
    emit("census.json", census_to_json(report, bound));
    outcome.summary = std::to_string(report.classes.size()) + " classes, " +
                      std::to_string(report.count_classes(Classification::SpuriousLocalMin)) + " spurious";
    if (bound) {
      outcome.summary += "; bound " + std::to_string(bound->bound) + " " + bound->unit + ", found " +
                         std::to_string(bound->found) + (bound->satisfied ? " (satisfied)" : " (NOT satisfied)");
    }
  } else if (cfg.command == "metric") {
    const MetricEstimate est = estimate_complexity_metric(inst, cfg.budget, cfg.separation, cfg.seed);
    emit("metric.json", metric_to_json(est));
    outcome.summary = est.value ? "estimate=" + format_double(*est.value) : std::string("NoPairFound");
  } else if (cfg.command == "check") {
    const BlockSparsityGraph g = inst.graph() ? *inst.graph() : infer_graph(inst.omega());
    const McInstance with_graph = assemble_instance(inst.ground_truth(), inst.omega(), g);
    const MembershipReport report = check_class_membership(with_graph);
    const double mu = compute_incoherence(with_graph);
    emit("check.json", membership_to_json(report, analyze_graph(g), mu));
    outcome.summary = std::string("in_class=") + (report.in_class ? "true" : "false") + " mu=" + format_double(mu);
  }
  return outcome;
}

RunOutcome run_config(const std::filesystem::path& path, const std::optional<std::string>& command,
                      const RunOverrides& overrides) {
  return run_experiment_config(load_config(path, command), overrides);
}

}  // namespace mcland
