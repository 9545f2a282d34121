#include "routelearn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace routelearn {

std::string toString(EvalScheme scheme) {
  switch (scheme) {
    case EvalScheme::Unif:
      return "UNIF";
    case EvalScheme::Time:
      return "TIME";
    case EvalScheme::Time2:
      return "TIME2";
    case EvalScheme::Simi:
      return "SIMI";
    case EvalScheme::Simi2:
      return "SIMI2";
    case EvalScheme::Dist:
      return "DIST";
  }
  return "?";
}

std::optional<EvalScheme> parseEvalScheme(std::string_view name) {
  if (name == "UNIF") return EvalScheme::Unif;
  if (name == "TIME") return EvalScheme::Time;
  if (name == "TIME2") return EvalScheme::Time2;
  if (name == "SIMI") return EvalScheme::Simi;
  if (name == "SIMI2") return EvalScheme::Simi2;
  if (name == "DIST") return EvalScheme::Dist;
  return std::nullopt;
}

std::string toString(RecordStatus status) {
  switch (status) {
    case RecordStatus::Optimal:
      return "optimal";
    case RecordStatus::FeasibleFallback:
      return "feasible-fallback";
    case RecordStatus::Infeasible:
      return "infeasible";
    case RecordStatus::SkippedGroup:
      return "skipped-group";
  }
  return "?";
}

namespace {

std::vector<std::vector<StopIndex>> routeStopSets(const RoutingPlan& plan) {
  std::vector<std::vector<StopIndex>> sets;
  sets.reserve(plan.routes().size());
  for (const Route& r : plan.routes()) {
    std::vector<StopIndex> s = r.stops;
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  return sets;
}

int countMissing(const std::vector<StopIndex>& actual, const std::vector<StopIndex>& predicted) {
  // |actual \ predicted| for sorted vectors.
  int missing = 0;
  std::size_t ip = 0;
  for (StopIndex s : actual) {
    while (ip < predicted.size() && predicted[ip] < s) ++ip;
    if (ip >= predicted.size() || predicted[ip] != s) ++missing;
  }
  return missing;
}

void requireSameCustomers(const RoutingPlan& predicted, const RoutingPlan& actual,
                          const char* op) {
  if (predicted.stopSet() != actual.stopSet()) {
    throw std::invalid_argument(std::string(op) + ": plans cover different customer sets");
  }
}

}  // namespace

int routeDifference(const RoutingPlan& predicted, const RoutingPlan& actual) {
  requireSameCustomers(predicted, actual, "routeDifference");
  auto actual_sets = routeStopSets(actual);
  auto predicted_sets = routeStopSets(predicted);
  while (actual_sets.size() < predicted_sets.size()) actual_sets.emplace_back();
  while (predicted_sets.size() < actual_sets.size()) predicted_sets.emplace_back();

  const std::size_t rounds = actual_sets.size();
  std::vector<char> used_a(rounds, false), used_p(rounds, false);
  int rd = 0;
  for (std::size_t round = 0; round < rounds; ++round) {
    int best_diff = 0;
    std::size_t best_a = 0, best_p = 0;
    bool have = false;
    for (std::size_t ai = 0; ai < rounds; ++ai) {
      if (used_a[ai]) continue;
      for (std::size_t pi = 0; pi < rounds; ++pi) {
        if (used_p[pi]) continue;
        const int diff = countMissing(actual_sets[ai], predicted_sets[pi]);
        if (!have || diff < best_diff ||
            (diff == best_diff &&
             (actual_sets[ai] < actual_sets[best_a] ||
              (actual_sets[ai] == actual_sets[best_a] &&
               predicted_sets[pi] < predicted_sets[best_p])))) {
          have = true;
          best_diff = diff;
          best_a = ai;
          best_p = pi;
        }
      }
    }
    used_a[best_a] = true;
    used_p[best_p] = true;
    rd += best_diff;
  }
  return rd;
}

int arcDifference(const RoutingPlan& predicted, const RoutingPlan& actual) {
  requireSameCustomers(predicted, actual, "arcDifference");
  const ArcSet actual_arcs = arcsOf(actual);
  const ArcSet predicted_arcs = arcsOf(predicted);
  int ad = 0;
  for (const Arc& arc : actual_arcs) {
    if (!predicted_arcs.contains(arc)) ++ad;
  }
  return ad;
}

namespace {

struct LocalView {
  StopUniverse universe{"depot"};
  std::vector<StopIndex> to_global;
  std::vector<StopIndex> to_local;  // -1 where absent
};

LocalView makeLocalView(const StopUniverse& global,
                        const std::vector<const RoutingPlan*>& train, const RoutingPlan* test) {
  std::vector<char> wanted(static_cast<std::size_t>(global.size()), false);
  auto mark = [&](const RoutingPlan& plan) {
    for (StopIndex s : plan.stopSet()) {
      if (s < 1 || s >= global.size()) {
        throw std::invalid_argument("evaluate: plan references index " + std::to_string(s) +
                                    " outside the universe");
      }
      wanted[static_cast<std::size_t>(s)] = true;
    }
  };
  for (const RoutingPlan* p : train) mark(*p);
  if (test != nullptr) mark(*test);

  LocalView view;
  view.universe = StopUniverse(global.idOf(StopUniverse::kDepot));
  view.to_global.push_back(StopUniverse::kDepot);
  view.to_local.assign(static_cast<std::size_t>(global.size()), -1);
  view.to_local[StopUniverse::kDepot] = StopUniverse::kDepot;
  for (StopIndex s = 1; s < global.size(); ++s) {
    if (!wanted[static_cast<std::size_t>(s)]) continue;
    StopIndex local = view.universe.add(global.idOf(s));
    view.to_global.push_back(s);
    view.to_local[static_cast<std::size_t>(s)] = local;
  }
  return view;
}

RoutingPlan remapPlan(const RoutingPlan& plan, const std::vector<StopIndex>& to_local) {
  std::vector<Route> routes;
  routes.reserve(plan.routes().size());
  for (const Route& r : plan.routes()) {
    Route mapped;
    mapped.stops.reserve(r.stops.size());
    for (StopIndex s : r.stops) mapped.stops.push_back(to_local[static_cast<std::size_t>(s)]);
    routes.push_back(std::move(mapped));
  }
  return RoutingPlan(plan.day(), std::move(routes));
}

// Re-addresses a cost matrix onto a target universe by stop id. The depot is
// matched positionally (index 0 in both universes).
CostMatrix costsForUniverse(const CostMatrix& costs, const StopUniverse& target) {
  const Eigen::Index k = target.size();
  std::vector<Eigen::Index> source(static_cast<std::size_t>(k));
  source[0] = StopUniverse::kDepot;
  for (Eigen::Index i = 1; i < k; ++i) {
    auto found = costs.universe.find(target.idOf(i));
    if (!found || *found == StopUniverse::kDepot) {
      throw std::runtime_error("cost matrix has no entry for stop '" + target.idOf(i) + "'");
    }
    source[static_cast<std::size_t>(i)] = *found;
  }
  Eigen::MatrixXd c(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      c(a, b) = costs.c(source[static_cast<std::size_t>(a)], source[static_cast<std::size_t>(b)]);
    }
  }
  return CostMatrix{std::move(c), target};
}

Eigen::VectorXd demandsForUniverse(const DemandData& data, const StopUniverse& universe) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(universe.size());
  for (Eigen::Index i = 1; i < universe.size(); ++i) {
    auto it = data.demand_by_id.find(universe.idOf(i));
    if (it == data.demand_by_id.end()) {
      throw std::runtime_error("no demand estimate for stop '" + universe.idOf(i) + "'");
    }
    q(i) = it->second;
  }
  return q;
}

WeighingScheme schemeFor(EvalScheme scheme, std::vector<StopIndex> test_stops_local) {
  switch (scheme) {
    case EvalScheme::Unif:
      return WeighingScheme::unif();
    case EvalScheme::Time:
      return WeighingScheme::time();
    case EvalScheme::Time2:
      return WeighingScheme::time2();
    case EvalScheme::Simi:
      return WeighingScheme::simi(std::move(test_stops_local));
    case EvalScheme::Simi2:
      return WeighingScheme::simi2(std::move(test_stops_local));
    case EvalScheme::Dist:
      break;
  }
  throw std::logic_error("schemeFor: not a weighing scheme");
}

EvaluationRecord scoreOne(const StopUniverse& universe,
                          const std::vector<const RoutingPlan*>& train, const RoutingPlan& test,
                          EvalScheme scheme, const EvaluationOptions& options) {
  EvaluationRecord record;
  record.test_day = test.day();
  record.scheme = scheme;
  record.alpha = options.alpha;
  record.beta = options.beta;

  const int fleet_size = static_cast<int>(test.routes().size());
  SolverResult solved;
  RoutingPlan predicted;

  if (options.capacity_mode == CapacityMode::Demand && options.demands == nullptr) {
    throw std::invalid_argument("Demand mode needs demand data");
  }
  if (scheme == EvalScheme::Dist) {
    if (options.costs == nullptr) {
      throw std::invalid_argument("DIST evaluation needs a cost matrix");
    }
    LocalView view = makeLocalView(universe, {}, &test);
    CostMatrix sub = costsForUniverse(*options.costs, view.universe);
    CvrpInstance instance =
        options.capacity_mode == CapacityMode::Unit
            ? CvrpInstance::unitDemand(std::move(sub), fleet_size, options.fleet)
            : CvrpInstance::withDemands(std::move(sub), fleet_size,
                                        demandsForUniverse(*options.demands, view.universe),
                                        options.demands->capacity, options.fleet);
    solved = solveExact(instance, options.limits);
    if (solved.status != SolveStatus::Infeasible && !solved.plan.routes().empty()) {
      predicted = mapPlanIndices(solved.plan, view.to_global);
    }
  } else {
    LocalView view = makeLocalView(universe, train, &test);
    std::vector<RoutingPlan> local_train;
    local_train.reserve(train.size());
    for (const RoutingPlan* p : train) local_train.push_back(remapPlan(*p, view.to_local));

    std::vector<StopIndex> test_local;
    test_local.reserve(test.stopSet().size());
    for (StopIndex s : test.stopSet()) {
      test_local.push_back(view.to_local[static_cast<std::size_t>(s)]);
    }

    FrequencyMatrix freq = buildFrequency(std::span<const RoutingPlan>(local_train),
                                          schemeFor(scheme, test_local), view.universe);
    TransitionMatrix t = smoothNormalize(freq, options.alpha, options.denominator);
    if (options.beta < 1.0) {
      if (options.costs == nullptr) {
        throw std::invalid_argument("beta < 1 needs a cost matrix to blend with");
      }
      DistanceProbabilityMatrix d =
          distanceProbabilities(costsForUniverse(*options.costs, view.universe));
      t = blend(t, d, options.beta);
    }

    MostLikelyOptions most_likely;
    most_likely.fleet_size = fleet_size;
    most_likely.mode = options.capacity_mode;
    most_likely.fleet = options.fleet;
    most_likely.limits = options.limits;
    if (options.capacity_mode == CapacityMode::Demand) {
      StopUniverse test_universe(view.universe.idOf(StopUniverse::kDepot));
      for (StopIndex s : test.stopSet()) test_universe.add(universe.idOf(s));
      most_likely.demands = demandsForUniverse(*options.demands, test_universe);
      most_likely.capacity = options.demands->capacity;
    }
    solved = solveMostLikely(t, test_local, most_likely);
    if (solved.status != SolveStatus::Infeasible && !solved.plan.routes().empty()) {
      RoutingPlan local_plan = solved.plan;  // indexed in view.universe
      predicted = mapPlanIndices(local_plan, view.to_global);
    }
  }

  record.solve_seconds = solved.stats.wall_seconds;
  record.nodes = solved.stats.nodes;
  switch (solved.status) {
    case SolveStatus::Optimal:
      record.status = RecordStatus::Optimal;
      break;
    case SolveStatus::FeasibleFallback:
      record.status = RecordStatus::FeasibleFallback;
      break;
    case SolveStatus::Infeasible:
      record.status = RecordStatus::Infeasible;
      break;
  }

  if (!predicted.routes().empty()) {
    record.rd = routeDifference(predicted, test);
    record.ad = arcDifference(predicted, test);
  } else {
    // No prediction produced: score as fully wrong.
    record.rd = static_cast<int>(test.stopSet().size());
    record.ad = static_cast<int>(test.stopSet().size() + test.routes().size());
  }
  return record;
}

std::map<int, std::vector<const RoutingPlan*>> groupPlans(const InstanceStream& stream,
                                                          bool weekday_grouping) {
  std::map<int, std::vector<const RoutingPlan*>> groups;
  for (const RoutingPlan& plan : stream.instances()) {
    groups[weekday_grouping ? plan.day().weekday : 0].push_back(&plan);
  }
  return groups;
}

std::vector<EvaluationRecord> evaluateImpl(const InstanceStream& stream,
                                           const StopUniverse& universe, const SplitConfig& split,
                                           EvalScheme scheme, const EvaluationOptions& options,
                                           EvalMode mode) {
  if (!(split.train_fraction > 0.0) || !(split.train_fraction < 1.0)) {
    throw std::invalid_argument("evaluate: train_fraction must lie in (0, 1)");
  }
  std::vector<EvaluationRecord> records;
  for (const auto& [weekday, plans] : groupPlans(stream, split.weekday_grouping)) {
    const std::size_t n = plans.size();
    const std::size_t train_size =
        static_cast<std::size_t>(std::floor(split.train_fraction * static_cast<double>(n)));
    if (train_size < 1 || train_size >= n) {
      EvaluationRecord skip;
      skip.test_day = plans.front()->day();
      skip.scheme = scheme;
      skip.alpha = options.alpha;
      skip.beta = options.beta;
      skip.status = RecordStatus::SkippedGroup;
      records.push_back(skip);
      continue;
    }
    for (std::size_t ti = train_size; ti < n; ++ti) {
      const std::size_t prefix = mode == EvalMode::Batch ? train_size : ti;
      std::vector<const RoutingPlan*> train(plans.begin(),
                                            plans.begin() + static_cast<std::ptrdiff_t>(prefix));
      records.push_back(scoreOne(universe, train, *plans[ti], scheme, options));
    }
  }
  return records;
}

}  // namespace

std::vector<EvaluationRecord> evaluateBatch(const InstanceStream& stream,
                                            const StopUniverse& universe,
                                            const SplitConfig& split, EvalScheme scheme,
                                            const EvaluationOptions& options) {
  return evaluateImpl(stream, universe, split, scheme, options, EvalMode::Batch);
}

std::vector<EvaluationRecord> evaluateIncremental(const InstanceStream& stream,
                                                  const StopUniverse& universe,
                                                  const SplitConfig& split, EvalScheme scheme,
                                                  const EvaluationOptions& options) {
  return evaluateImpl(stream, universe, split, scheme, options, EvalMode::Incremental);
}

std::vector<EvaluationRecord> evaluate(const InstanceStream& stream, const StopUniverse& universe,
                                       const SplitConfig& split, EvalScheme scheme,
                                       const EvaluationOptions& options) {
  return evaluateImpl(stream, universe, split, scheme, options, split.mode);
}

namespace {

double quantileSorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

MetricStats statsOf(std::vector<double> values) {
  MetricStats stats;
  if (values.empty()) return stats;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / static_cast<double>(values.size());
  stats.median = quantileSorted(values, 0.5);
  stats.min = values.front();
  stats.max = values.back();
  stats.q1 = quantileSorted(values, 0.25);
  stats.q3 = quantileSorted(values, 0.75);
  return stats;
}

}  // namespace

std::vector<SchemeSummary> summarize(const std::vector<EvaluationRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("summarize: no records");
  }
  std::vector<SchemeSummary> rows;
  for (EvalScheme scheme : {EvalScheme::Unif, EvalScheme::Time, EvalScheme::Time2,
                            EvalScheme::Simi, EvalScheme::Simi2, EvalScheme::Dist}) {
    std::vector<double> rd_values, ad_values;
    SchemeSummary row;
    row.scheme = scheme;
    bool present = false, uniform_alpha = true, uniform_beta = true;
    double time_sum = 0.0;
    for (const EvaluationRecord& record : records) {
      if (record.scheme != scheme) continue;
      if (!present) {
        row.alpha = record.alpha;
        row.beta = record.beta;
      } else {
        if (row.alpha && *row.alpha != record.alpha) uniform_alpha = false;
        if (row.beta && *row.beta != record.beta) uniform_beta = false;
      }
      present = true;
      if (record.status == RecordStatus::SkippedGroup) {
        ++row.skipped_groups;
        ++row.non_optimal;
        continue;
      }
      ++row.count;
      rd_values.push_back(record.rd);
      ad_values.push_back(record.ad);
      time_sum += record.solve_seconds;
      if (record.status != RecordStatus::Optimal) ++row.non_optimal;
    }
    if (!present) continue;
    if (!uniform_alpha) row.alpha.reset();
    if (!uniform_beta) row.beta.reset();
    row.rd = statsOf(std::move(rd_values));
    row.ad = statsOf(std::move(ad_values));
    row.mean_solve_seconds = row.count > 0 ? time_sum / row.count : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace routelearn
