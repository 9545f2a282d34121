#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "routelearn/learner.hpp"
#include "routelearn/model.hpp"
#include "routelearn/solver.hpp"

namespace routelearn {

/// The five weighing schemes plus the distance baseline (solving the plain
/// CVRP on the raw cost matrix instead of learned probabilities).
enum class EvalScheme { Unif, Time, Time2, Simi, Simi2, Dist };

std::string toString(EvalScheme scheme);
std::optional<EvalScheme> parseEvalScheme(std::string_view name);

enum class EvalMode { Batch, Incremental };

enum class RecordStatus { Optimal, FeasibleFallback, Infeasible, SkippedGroup };

std::string toString(RecordStatus status);

/// Outcome of predicting one held-out instance.
struct EvaluationRecord {
  DayLabel test_day;
  EvalScheme scheme = EvalScheme::Unif;
  double alpha = 1.0;
  double beta = 1.0;
  int rd = 0;
  int ad = 0;
  RecordStatus status = RecordStatus::Optimal;
  double solve_seconds = 0.0;
  long long nodes = 0;
};

struct SplitConfig {
  EvalMode mode = EvalMode::Batch;
  double train_fraction = 0.75;
  bool weekday_grouping = true;
};

/// Per-stop demand estimates plus the vehicle capacity, for Demand mode.
struct DemandData {
  std::unordered_map<std::string, double> demand_by_id;
  double capacity = 0.0;
};

struct EvaluationOptions {
  double alpha = 1.0;
  double beta = 1.0;
  CapacityMode capacity_mode = CapacityMode::Unit;
  FleetMode fleet = FleetMode::Exact;
  SmoothingDenominator denominator = SmoothingDenominator::CountAll;
  SolverLimits limits;
  const CostMatrix* costs = nullptr;    // required for Dist and for beta < 1
  const DemandData* demands = nullptr;  // required for Demand mode
};

/// Route Difference: stops assigned to a different route than in the actual
/// plan, under greedy route matching (smallest |actual \ predicted| first,
/// ties by smallest actual then predicted canonical form). The plan with
/// fewer routes is padded with empty routes.
int routeDifference(const RoutingPlan& predicted, const RoutingPlan& actual);

/// Arc Difference: |arcs(actual) \ arcs(predicted)|.
int arcDifference(const RoutingPlan& predicted, const RoutingPlan& actual);

/// Train once per weekday group on the chronological training prefix, then
/// score every held-out instance of the group. Groups too small to split
/// yield a single skipped-group record.
std::vector<EvaluationRecord> evaluateBatch(const InstanceStream& stream,
                                            const StopUniverse& universe,
                                            const SplitConfig& split, EvalScheme scheme,
                                            const EvaluationOptions& options);

/// Rolling protocol: for each held-out instance, retrain on everything before
/// it within its weekday group, predict, and score.
std::vector<EvaluationRecord> evaluateIncremental(const InstanceStream& stream,
                                                  const StopUniverse& universe,
                                                  const SplitConfig& split, EvalScheme scheme,
                                                  const EvaluationOptions& options);

/// Dispatches on split.mode.
std::vector<EvaluationRecord> evaluate(const InstanceStream& stream, const StopUniverse& universe,
                                       const SplitConfig& split, EvalScheme scheme,
                                       const EvaluationOptions& options);

struct MetricStats {
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct SchemeSummary {
  EvalScheme scheme = EvalScheme::Unif;
  std::optional<double> alpha;  // set when uniform across the scheme's records
  std::optional<double> beta;
  int count = 0;  // scored records (skipped groups excluded)
  MetricStats rd;
  MetricStats ad;
  double mean_solve_seconds = 0.0;
  int non_optimal = 0;  // records whose status is not optimal, skips included
  int skipped_groups = 0;
};

/// Per-scheme statistics over a record list. Throws on empty input.
std::vector<SchemeSummary> summarize(const std::vector<EvaluationRecord>& records);

}  // namespace routelearn
