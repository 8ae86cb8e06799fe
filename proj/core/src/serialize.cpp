#include "mcland/serialize.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "mcland/error.hpp"

namespace mcland {
namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, std::string(what) + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ValidationError, std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string(what) + ": field '" + key + "': " + e.what());
  }
}

json edges_json(const std::set<Edge>& edges) {
  json out = json::array();
  for (const auto& [a, b] : edges) out.push_back({a + 1, b + 1});
  return out;
}

std::vector<Edge> edges_from(const json& j, const char* key) {
  std::vector<Edge> out;
  for (const auto& pair : field<std::vector<std::vector<int>>>(j, key, "graph")) {
    if (pair.size() != 2) throw Error(ErrorCode::ValidationError, std::string("graph: ") + key + " entries must be pairs");
    out.push_back(make_edge(pair[0] - 1, pair[1] - 1));
  }
  return out;
}

json graph_json(const BlockSparsityGraph& g) {
  return {{"m", g.m()}, {"e1", edges_json(g.e1())}, {"e2", edges_json(g.e2())}};
}

BlockSparsityGraph graph_from(const json& j) {
  return BlockSparsityGraph(field<int>(j, "m", "graph"), edges_from(j, "e1"), edges_from(j, "e2"));
}

json factor_json(const FactorMatrix& x) {
  json rows = json::array();
  for (int i = 0; i < x.n(); ++i) {
    json row = json::array();
    for (int a = 0; a < x.r(); ++a) row.push_back(x(i, a));
    rows.push_back(std::move(row));
  }
  return rows;
}

FactorMatrix factor_from(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  if (rows.empty() || rows.front().empty()) throw Error(ErrorCode::ValidationError, "factor: empty matrix");
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(ErrorCode::ValidationError, "factor: ragged rows");
    for (std::size_t a = 0; a < rows[i].size(); ++a) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) = rows[i][a];
    }
  }
  return FactorMatrix(std::move(x));
}

}  // namespace

std::string graph_to_json(const BlockSparsityGraph& g) { return graph_json(g).dump(2); }

BlockSparsityGraph graph_from_json(const std::string& text) { return graph_from(parse(text, "graph")); }

std::string factor_to_json(const FactorMatrix& x) { return factor_json(x).dump(2); }

FactorMatrix factor_from_json(const std::string& text) {
  const json j = parse(text, "factor");
  try {
    return factor_from(j.is_object() ? j.at("factor") : j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("factor: ") + e.what());
  }
}

std::string instance_to_json(const McInstance& inst) {
  json omega = json::array();
  for (const auto& [i, j] : inst.omega().entries()) omega.push_back({i + 1, j + 1});
  json out = {{"n", inst.n()}, {"r", inst.r()}, {"factor", factor_json(inst.ground_truth())}, {"omega", omega}};
  if (inst.graph()) out["graph"] = graph_json(*inst.graph());
  return out.dump(2);
}

McInstance instance_from_json(const std::string& text) {
  const json j = parse(text, "instance");
  const int n = field<int>(j, "n", "instance");
  const int r = field<int>(j, "r", "instance");
  FactorMatrix x;
  try {
    x = factor_from(j.at("factor"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ValidationError, std::string("instance: field 'factor': ") + e.what());
  }
  if (x.n() != n || x.r() != r) throw Error(ErrorCode::DimensionMismatch, "instance: factor shape differs from (n, r)");
  std::vector<MeasurementSet::Entry> entries;
  for (const auto& pair : field<std::vector<std::vector<int>>>(j, "omega", "instance")) {
    if (pair.size() != 2 || pair[0] < 1 || pair[1] < 1 || pair[0] > n || pair[1] > n) {
      throw Error(ErrorCode::ValidationError, "instance: field 'omega' has an entry outside [1, n]");
    }
    entries.emplace_back(pair[0] - 1, pair[1] - 1);
  }
  std::optional<BlockSparsityGraph> graph;
  if (j.contains("graph") && !j.at("graph").is_null()) graph = graph_from(j.at("graph"));
  return assemble_instance(x, MeasurementSet(n, r, entries), std::move(graph));
}

std::string membership_to_json(const MembershipReport& report, const GraphAnalysis& analysis, double incoherence) {
  json mis = json::array();
  for (Vertex v : analysis.max_independent_set) mis.push_back(v + 1);
  json cycle = nullptr;
  if (analysis.odd_cycle) {
    cycle = json::array();
    for (Vertex v : *analysis.odd_cycle) cycle.push_back(v + 1);
  }
  json out = {
      {"psd_rank_r", report.psd_rank_r},
      {"all_blocks_full_rank", report.all_blocks_full_rank},
      {"g1_connected_nonbipartite", report.g1_connected_nonbipartite},
      {"in_class", report.in_class},
      {"graph",
       {{"connected", analysis.connected},
        {"nonbipartite", analysis.nonbipartite},
        {"odd_cycle", cycle},
        {"max_independent_set", mis},
        {"all_mis_have_self_loops", analysis.all_mis_have_self_loops}}},
      {"incoherence", incoherence},
  };
  return out.dump(2);
}

std::string completion_to_json(const CompletionResult& result, double relative_error) {
  json out = {{"factor", factor_json(result.recovered_factor)},
              {"report", {{"relative_error", relative_error}, {"ops_estimate", result.operations_estimate}}}};
  return out.dump(2);
}

std::string run_result_to_json(const RunResult& run, Classification classification) {
  json out = {{"final_point", factor_json(run.final_point)},
              {"final_objective", run.final_objective},
              {"final_grad_norm", run.final_grad_norm},
              {"iterations", run.iterations},
              {"status", std::string(to_string(run.status))},
              {"step", run.step},
              {"classification", std::string(to_string(classification))}};
  return out.dump(2);
}

std::string census_to_json(const CensusReport& report, const std::optional<LowerBoundCheck>& bound) {
  json classes = json::array();
  for (const auto& rec : report.classes) {
    classes.push_back({{"canonical_rep", factor_json(rec.canonical_rep)},
                       {"objective", rec.objective},
                       {"grad_norm", rec.grad_norm},
                       {"lambda_min", rec.lambda_min},
                       {"classification", std::string(to_string(rec.classification))},
                       {"hit_count", rec.hit_count},
                       {"orbit_points", rec.orbit_points}});
  }
  json counts = json::object();
  for (Classification c : {Classification::GlobalMin, Classification::SpuriousLocalMin, Classification::StrictSaddle,
                           Classification::Degenerate}) {
    counts[std::string(to_string(c))] = {{"classes", report.count_classes(c)}, {"points", report.count_points(c)}};
  }
  json out = {{"n_starts", report.n_starts},
              {"dedup_radius", report.dedup_radius},
              {"unresolved", report.unresolved},
              {"counts", counts},
              {"classes", classes}};
  if (bound) {
    out["lower_bound"] = {{"bound", bound->bound},
                          {"found", bound->found},
                          {"satisfied", bound->satisfied},
                          {"unit", bound->unit}};
  }
  return out.dump(2);
}

std::string metric_to_json(const MetricEstimate& estimate) {
  json out = {{"separation", estimate.separation}, {"feasibility_tol", estimate.feasibility_tol}};
  if (estimate.value) {
    out["value"] = *estimate.value;
    out["witness"] = {factor_json(estimate.witness->first), factor_json(estimate.witness->second)};
    out["separation_achieved"] = estimate.separation_achieved;
    out["feasibility_residual"] = estimate.feasibility_residual;
  } else {
    out["value"] = "NoPairFound";
  }
  return out.dump(2);
}

std::string equal_probability_to_json(const EqualProbabilityResult& result) {
  json minima = json::array();
  for (const auto& x : result.minima) minima.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  json out = {{"minima", minima},
              {"histogram", result.histogram},
              {"matched", result.matched},
              {"unconverged", result.unconverged},
              {"chi_square", result.chi_square},
              {"chi_square_p", result.chi_square_p}};
  return out.dump(2);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string success_table_to_csv(const SuccessRateTable& table) {
  std::ostringstream out;
  out << "gamma,n,r,S_size,p,seed,trials,successes,rate,wilson_ci_low,wilson_ci_high\n";
  for (const auto& row : table) {
    out << format_double(row.gamma) << ',' << row.n << ',' << row.r << ',' << row.s_size << ','
        << format_double(row.p) << ',' << row.seed << ',' << row.trials << ',' << row.successes << ','
        << format_double(row.rate) << ',' << format_double(row.wilson_ci_low) << ','
        << format_double(row.wilson_ci_high) << '\n';
  }
  return out.str();
}

}  // namespace mcland
