#pragma once

#include <Eigen/Core>

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "routelearn/learner.hpp"
#include "routelearn/model.hpp"

namespace routelearn {

enum class CapacityMode { Unit, Demand };

/// Exact requires every one of the m vehicles to drive a non-empty route;
/// AtMost allows leaving vehicles unused.
enum class FleetMode { Exact, AtMost };

enum class SolveStatus { Optimal, FeasibleFallback, Infeasible };

std::string toString(SolveStatus status);

struct SolverLimits {
  long long max_nodes = 50'000'000;
  double max_seconds = 600.0;
};

struct SearchStats {
  long long nodes = 0;
  double wall_seconds = 0.0;
  bool penalty_applied = false;
  bool budget_exceeded = false;
};

/// One CVRP instance over {depot} ∪ customers. `demands` is aligned with the
/// cost matrix rows (demands(0) == 0).
struct CvrpInstance {
  CostMatrix costs;
  int fleet_size = 1;
  CapacityMode mode = CapacityMode::Unit;
  FleetMode fleet = FleetMode::Exact;
  Eigen::VectorXd demands;
  double capacity = 0.0;

  Eigen::Index customerCount() const { return costs.c.rows() - 1; }

  /// Unit demands with capacity equal to the customer count: keeps the
  /// subtour structure while disabling capacity pressure.
  static CvrpInstance unitDemand(CostMatrix costs, int fleet_size,
                                 FleetMode fleet = FleetMode::Exact);
  static CvrpInstance withDemands(CostMatrix costs, int fleet_size, Eigen::VectorXd demands,
                                  double capacity, FleetMode fleet = FleetMode::Exact);
};

struct SolverResult {
  RoutingPlan plan;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  SearchStats stats;
};

/// Depth-first branch and bound over partial routes. Returns the provably
/// minimum-cost plan (deterministic tie-break: lexicographically smallest
/// canonical plan). Arcs with kForbiddenCost are never traveled; if they make
/// the instance unsolvable, every forbidden arc is replaced by the penalty
/// (1 + max finite cost) * (customers + fleet size) and the search reruns.
SolverResult solveExact(const CvrpInstance& instance, const SolverLimits& limits = {});

struct MostLikelyOptions {
  int fleet_size = 1;
  CapacityMode mode = CapacityMode::Unit;
  FleetMode fleet = FleetMode::Exact;
  Eigen::VectorXd demands;  // local alignment ({depot} ∪ stop_set), Demand mode only
  double capacity = 0.0;
  SolverLimits limits;
};

/// Most likely routing under a transition matrix: restricts -log(t) to
/// {depot} ∪ stop_set and solves exactly. The returned plan is indexed in
/// t's universe.
SolverResult solveMostLikely(const TransitionMatrix& t, std::span<const StopIndex> stop_set,
                             const MostLikelyOptions& options);

/// Exhaustive enumeration of every assignment of customers into non-empty
/// ordered routes. Verification oracle; refuses more than 8 customers or a
/// fleet larger than 3.
SolverResult bruteForceOracle(const CvrpInstance& instance);

/// Enumerates all plans over customers 1..n with the given fleet, invoking
/// `fn` for each (plans that differ only in route order appear once per
/// ordering). Used by the oracle and by verification tests.
void forEachPlan(Eigen::Index customers, int fleet_size, FleetMode fleet,
                 const std::function<void(const std::vector<Route>&)>& fn);

/// Cost sub-matrix over {depot} ∪ stop_set (ascending), with the local-index
/// to original-index map.
struct RestrictedCosts {
  CostMatrix costs;
  std::vector<StopIndex> to_global;
};
RestrictedCosts restrictCosts(const CostMatrix& full, std::span<const StopIndex> stop_set);

/// Re-indexes a plan through a local-to-global map.
RoutingPlan mapPlanIndices(const RoutingPlan& plan, std::span<const StopIndex> to_global);

}  // namespace routelearn
