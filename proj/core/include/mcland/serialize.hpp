#pragma once

#include <string>

#include "mcland/census.hpp"
#include "mcland/completion.hpp"
#include "mcland/experiment.hpp"
#include "mcland/metric.hpp"

namespace mcland {

// JSON documents use 1-based vertex and entry labels; factors are row-major
// lists of rows.

std::string graph_to_json(const BlockSparsityGraph& g);
BlockSparsityGraph graph_from_json(const std::string& text);

std::string factor_to_json(const FactorMatrix& x);
FactorMatrix factor_from_json(const std::string& text);

/// {n, r, factor, omega, graph?}
std::string instance_to_json(const McInstance& inst);
McInstance instance_from_json(const std::string& text);

std::string membership_to_json(const MembershipReport& report, const GraphAnalysis& analysis, double incoherence);
std::string completion_to_json(const CompletionResult& result, double relative_error);
std::string run_result_to_json(const RunResult& run, Classification classification);
std::string census_to_json(const CensusReport& report, const std::optional<LowerBoundCheck>& bound);
std::string metric_to_json(const MetricEstimate& estimate);
std::string equal_probability_to_json(const EqualProbabilityResult& result);

/// Header gamma,n,r,S_size,p,seed,trials,successes,rate,wilson_ci_low,wilson_ci_high
/// and one line per row, in table order. Doubles use the shortest round-trip form.
std::string success_table_to_csv(const SuccessRateTable& table);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace mcland
