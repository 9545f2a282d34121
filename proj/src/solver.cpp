#include "routelearn/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace routelearn {

namespace {

constexpr double kEps = 1e-9;

using Clock = std::chrono::steady_clock;

double elapsedSeconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Depth-first search over partial routes: extend the open route, or close it
// and open the next one. Route-permutation symmetry is broken by requiring
// first customers of successive routes to increase.
class BranchAndBound {
 public:
  BranchAndBound(const Eigen::MatrixXd& cost, const Eigen::VectorXd& demands, double capacity,
                 int fleet_size, FleetMode fleet_mode, const SolverLimits& limits)
      : cost_(cost),
        demands_(demands),
        capacity_(capacity),
        m_(fleet_size),
        fleet_mode_(fleet_mode),
        limits_(limits),
        n_(cost.rows() - 1),
        visited_(static_cast<std::size_t>(cost.rows()), false) {}

  // Returns true when the search space was fully explored (budget not hit).
  bool run() {
    start_ = Clock::now();
    if (!precompute()) return true;  // some customer unreachable: exhausted, nothing found
    sum_col_min_ = 0.0;
    for (StopIndex j = 1; j <= n_; ++j) sum_col_min_ += col_min_in_[static_cast<std::size_t>(j)];
    unvisited_ = n_;
    openPhase(-1);
    return !budget_exceeded_;
  }

  bool found() const { return found_; }
  double bestCost() const { return best_cost_; }
  std::vector<Route> bestRoutes() const {
    std::vector<Route> routes;
    routes.reserve(best_key_.size());
    for (const auto& stops : best_key_) routes.push_back(Route{stops});
    return routes;
  }
  long long nodes() const { return nodes_; }
  bool budgetExceeded() const { return budget_exceeded_; }

 private:
  bool precompute() {
    col_min_in_.assign(static_cast<std::size_t>(n_) + 1, kForbiddenCost);
    succ_.assign(static_cast<std::size_t>(n_) + 1, {});
    for (StopIndex i = 0; i <= n_; ++i) {
      auto& list = succ_[static_cast<std::size_t>(i)];
      for (StopIndex j = 1; j <= n_; ++j) {
        if (j == i) continue;
        const double c = cost_(i, j);
        if (isForbidden(c)) continue;
        list.push_back(j);
        col_min_in_[static_cast<std::size_t>(j)] =
            std::min(col_min_in_[static_cast<std::size_t>(j)], c);
      }
      std::sort(list.begin(), list.end(), [&](StopIndex a, StopIndex b) {
        if (cost_(i, a) != cost_(i, b)) return cost_(i, a) < cost_(i, b);
        return a < b;
      });
    }
    for (StopIndex j = 1; j <= n_; ++j) {
      if (isForbidden(col_min_in_[static_cast<std::size_t>(j)])) return false;
    }
    return true;
  }

  bool budgetHit() {
    ++nodes_;
    if (nodes_ > limits_.max_nodes) budget_exceeded_ = true;
    if ((nodes_ & 0xFFF) == 0 && elapsedSeconds(start_) > limits_.max_seconds) {
      budget_exceeded_ = true;
    }
    return budget_exceeded_;
  }

  int closesRemaining() const {
    if (fleet_mode_ == FleetMode::Exact) return m_ - closed_;
    return 1;  // at least the open/next route returns to the depot
  }

  // Admissible bound: cost so far, plus the cheapest allowed incoming arc of
  // every unvisited customer, plus the cheapest possible depot returns.
  double lowerBound(bool route_open, StopIndex cur) const {
    double min_into_depot = kForbiddenCost;
    for (StopIndex j = 1; j <= n_; ++j) {
      if (!visited_[static_cast<std::size_t>(j)]) {
        min_into_depot = std::min(min_into_depot, cost_(j, 0));
      }
    }
    if (route_open) min_into_depot = std::min(min_into_depot, cost_(cur, 0));
    return g_ + sum_col_min_ + closesRemaining() * min_into_depot;
  }

  bool prunable(double lb) const {
    if (isForbidden(lb)) return true;
    return found_ && lb > best_cost_ + kEps;
  }

  void record() {
    RoutingPlan plan(DayLabel{}, routes_as_value());
    auto key = canonicalKey(plan);
    if (!found_ || g_ < best_cost_ - kEps) {
      found_ = true;
      best_cost_ = g_;
      best_key_ = std::move(key);
    } else if (g_ <= best_cost_ + kEps && key < best_key_) {
      best_cost_ = std::min(best_cost_, g_);
      best_key_ = std::move(key);
    }
  }

  std::vector<Route> routes_as_value() const {
    std::vector<Route> r;
    r.reserve(routes_.size());
    for (const auto& stops : routes_) r.push_back(Route{stops});
    return r;
  }

  void openPhase(StopIndex last_first) {
    if (budgetHit()) return;
    if (unvisited_ == 0) return;  // complete plans are recorded when closing
    if (closed_ >= m_) return;
    const int remaining = m_ - closed_;
    if (fleet_mode_ == FleetMode::Exact && unvisited_ < remaining) return;
    if (prunable(lowerBound(false, -1))) return;

    for (StopIndex j : succ_[0]) {
      if (budget_exceeded_) return;
      if (visited_[static_cast<std::size_t>(j)] || j <= last_first) continue;
      if (demands_(j) > capacity_ + kEps) continue;
      visited_[static_cast<std::size_t>(j)] = true;
      --unvisited_;
      sum_col_min_ -= col_min_in_[static_cast<std::size_t>(j)];
      g_ += cost_(0, j);
      routes_.push_back({j});
      extend(j, demands_(j));
      routes_.pop_back();
      g_ -= cost_(0, j);
      sum_col_min_ += col_min_in_[static_cast<std::size_t>(j)];
      ++unvisited_;
      visited_[static_cast<std::size_t>(j)] = false;
    }
  }

  void extend(StopIndex cur, double load) {
    if (budgetHit()) return;
    if (prunable(lowerBound(true, cur))) return;

    // Grow the open route. A step is allowed only if enough customers stay
    // available to fill the remaining routes.
    const int still_to_open = m_ - closed_ - 1;
    const bool can_extend =
        fleet_mode_ == FleetMode::AtMost || unvisited_ - 1 >= still_to_open;
    if (can_extend) {
      for (StopIndex j : succ_[static_cast<std::size_t>(cur)]) {
        if (budget_exceeded_) return;
        if (visited_[static_cast<std::size_t>(j)]) continue;
        if (load + demands_(j) > capacity_ + kEps) continue;
        visited_[static_cast<std::size_t>(j)] = true;
        --unvisited_;
        sum_col_min_ -= col_min_in_[static_cast<std::size_t>(j)];
        g_ += cost_(cur, j);
        routes_.back().push_back(j);
        extend(j, load + demands_(j));
        routes_.back().pop_back();
        g_ -= cost_(cur, j);
        sum_col_min_ += col_min_in_[static_cast<std::size_t>(j)];
        ++unvisited_;
        visited_[static_cast<std::size_t>(j)] = false;
      }
    }

    // Close the route and return to the depot.
    if (isForbidden(cost_(cur, 0))) return;
    const bool complete = unvisited_ == 0;
    if (complete) {
      if (fleet_mode_ == FleetMode::Exact && closed_ + 1 != m_) return;
      g_ += cost_(cur, 0);
      ++closed_;
      record();
      --closed_;
      g_ -= cost_(cur, 0);
      return;
    }
    if (closed_ + 1 >= m_) return;  // customers remain but no vehicle would be left
    g_ += cost_(cur, 0);
    ++closed_;
    openPhase(routes_.back().front());
    --closed_;
    g_ -= cost_(cur, 0);
  }

  const Eigen::MatrixXd& cost_;
  const Eigen::VectorXd& demands_;
  double capacity_;
  int m_;
  FleetMode fleet_mode_;
  SolverLimits limits_;
  Eigen::Index n_;

  std::vector<char> visited_;
  std::vector<std::vector<StopIndex>> routes_;
  std::vector<std::vector<StopIndex>> succ_;
  std::vector<double> col_min_in_;
  Eigen::Index unvisited_ = 0;
  double sum_col_min_ = 0.0;
  double g_ = 0.0;
  int closed_ = 0;

  bool found_ = false;
  double best_cost_ = kForbiddenCost;
  std::vector<std::vector<StopIndex>> best_key_;

  long long nodes_ = 0;
  bool budget_exceeded_ = false;
  Clock::time_point start_;
};

struct StructuralCheck {
  bool feasible = true;
  bool throws = false;
  std::string message;
};

StructuralCheck checkInstance(const CvrpInstance& instance) {
  StructuralCheck check;
  const Eigen::Index n = instance.customerCount();
  if (n < 1) {
    check.throws = true;
    check.message = "CvrpInstance needs at least one customer";
    return check;
  }
  if (instance.costs.c.rows() != instance.costs.c.cols()) {
    check.throws = true;
    check.message = "cost matrix must be square";
    return check;
  }
  if (instance.fleet_size < 1) {
    check.throws = true;
    check.message = "fleet size must be positive";
    return check;
  }
  if (instance.demands.size() != instance.costs.c.rows()) {
    check.throws = true;
    check.message = "demand vector must align with the cost matrix";
    return check;
  }
  if (!(instance.capacity > 0.0)) {
    check.throws = true;
    check.message = "vehicle capacity must be positive";
    return check;
  }
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (instance.demands(i) < 0.0) {
      check.throws = true;
      check.message = "demands must be nonnegative";
      return check;
    }
  }

  const int usable = static_cast<int>(std::min<Eigen::Index>(instance.fleet_size, n));
  if (instance.fleet == FleetMode::Exact && instance.fleet_size > n) {
    check.feasible = false;
    return check;
  }
  double total = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    total += instance.demands(i);
    if (instance.demands(i) > instance.capacity + kEps) {
      check.feasible = false;
      return check;
    }
  }
  const int vehicles = instance.fleet == FleetMode::Exact ? instance.fleet_size : usable;
  if (total > vehicles * instance.capacity + kEps) {
    check.feasible = false;
  }
  return check;
}

bool hasForbiddenOffDiagonal(const Eigen::MatrixXd& c) {
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (i != j && isForbidden(c(i, j))) return true;
    }
  }
  return false;
}

double penaltyCost(const Eigen::MatrixXd& c, int fleet_size) {
  double max_finite = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (i != j && !isForbidden(c(i, j))) max_finite = std::max(max_finite, c(i, j));
    }
  }
  return (1.0 + max_finite) * static_cast<double>(c.rows() - 1 + fleet_size);
}

Eigen::MatrixXd withPenalty(const Eigen::MatrixXd& c, double penalty) {
  Eigen::MatrixXd out = c;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (i != j && isForbidden(out(i, j))) out(i, j) = penalty;
    }
  }
  return out;
}

}  // namespace

std::string toString(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::FeasibleFallback:
      return "feasible-fallback";
    case SolveStatus::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

CvrpInstance CvrpInstance::unitDemand(CostMatrix costs, int fleet_size, FleetMode fleet) {
  CvrpInstance instance;
  const Eigen::Index d = costs.c.rows();
  instance.costs = std::move(costs);
  instance.fleet_size = fleet_size;
  instance.mode = CapacityMode::Unit;
  instance.fleet = fleet;
  instance.demands = Eigen::VectorXd::Ones(d);
  instance.demands(0) = 0.0;
  instance.capacity = static_cast<double>(d - 1);
  return instance;
}

CvrpInstance CvrpInstance::withDemands(CostMatrix costs, int fleet_size, Eigen::VectorXd demands,
                                       double capacity, FleetMode fleet) {
  CvrpInstance instance;
  instance.costs = std::move(costs);
  instance.fleet_size = fleet_size;
  instance.mode = CapacityMode::Demand;
  instance.fleet = fleet;
  instance.demands = std::move(demands);
  if (instance.demands.size() > 0) instance.demands(0) = 0.0;
  instance.capacity = capacity;
  return instance;
}

SolverResult solveExact(const CvrpInstance& instance, const SolverLimits& limits) {
  const auto start = Clock::now();
  SolverResult result;

  StructuralCheck check = checkInstance(instance);
  if (check.throws) throw std::invalid_argument("solveExact: " + check.message);
  if (!check.feasible) {
    result.status = SolveStatus::Infeasible;
    result.stats.wall_seconds = elapsedSeconds(start);
    return result;
  }

  const int fleet = instance.fleet == FleetMode::AtMost
                        ? static_cast<int>(std::min<Eigen::Index>(instance.fleet_size,
                                                                  instance.customerCount()))
                        : instance.fleet_size;

  BranchAndBound search(instance.costs.c, instance.demands, instance.capacity, fleet,
                        instance.fleet, limits);
  const bool exhausted = search.run();
  result.stats.nodes = search.nodes();
  result.stats.budget_exceeded = search.budgetExceeded();

  if (!search.found() && exhausted && hasForbiddenOffDiagonal(instance.costs.c)) {
    // No routing exists over the allowed arcs alone: restore feasibility with
    // a deterministic large finite penalty on every forbidden arc.
    const double penalty = penaltyCost(instance.costs.c, instance.fleet_size);
    const Eigen::MatrixXd penalized = withPenalty(instance.costs.c, penalty);
    BranchAndBound retry(penalized, instance.demands, instance.capacity, fleet, instance.fleet,
                         limits);
    const bool retry_exhausted = retry.run();
    result.stats.nodes += retry.nodes();
    result.stats.budget_exceeded = retry.budgetExceeded();
    result.stats.penalty_applied = true;
    if (retry.found()) {
      result.plan = RoutingPlan(DayLabel{}, retry.bestRoutes());
      result.objective = retry.bestCost();
      result.status = retry_exhausted ? SolveStatus::Optimal : SolveStatus::FeasibleFallback;
    } else {
      result.status = SolveStatus::Infeasible;
    }
    result.stats.wall_seconds = elapsedSeconds(start);
    return result;
  }

  if (search.found()) {
    result.plan = RoutingPlan(DayLabel{}, search.bestRoutes());
    result.objective = search.bestCost();
    result.status = exhausted ? SolveStatus::Optimal : SolveStatus::FeasibleFallback;
  } else {
    // Either a proven infeasibility or a budget hit before any incumbent.
    result.status = exhausted ? SolveStatus::Infeasible : SolveStatus::FeasibleFallback;
    result.objective = kForbiddenCost;
  }
  result.stats.wall_seconds = elapsedSeconds(start);
  return result;
}

RestrictedCosts restrictCosts(const CostMatrix& full, std::span<const StopIndex> stop_set) {
  std::vector<StopIndex> stops(stop_set.begin(), stop_set.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  if (stops.empty()) {
    throw std::invalid_argument("restrictCosts: empty stop set");
  }
  for (StopIndex s : stops) {
    if (s < 1 || s >= full.universe.size()) {
      throw std::invalid_argument("restrictCosts: stop index " + std::to_string(s) +
                                  " is not a customer of the universe");
    }
  }

  RestrictedCosts out;
  out.to_global.push_back(StopUniverse::kDepot);
  out.to_global.insert(out.to_global.end(), stops.begin(), stops.end());

  StopUniverse local(full.universe.idOf(StopUniverse::kDepot));
  for (StopIndex s : stops) local.add(full.universe.idOf(s));

  const Eigen::Index k = static_cast<Eigen::Index>(out.to_global.size());
  Eigen::MatrixXd c(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      c(a, b) = full.c(out.to_global[static_cast<std::size_t>(a)],
                       out.to_global[static_cast<std::size_t>(b)]);
    }
  }
  out.costs = CostMatrix{std::move(c), std::move(local)};
  return out;
}

RoutingPlan mapPlanIndices(const RoutingPlan& plan, std::span<const StopIndex> to_global) {
  std::vector<Route> routes;
  routes.reserve(plan.routes().size());
  for (const Route& r : plan.routes()) {
    Route mapped;
    mapped.stops.reserve(r.stops.size());
    for (StopIndex s : r.stops) {
      if (s < 0 || static_cast<std::size_t>(s) >= to_global.size()) {
        throw std::out_of_range("mapPlanIndices: index outside the local universe");
      }
      mapped.stops.push_back(to_global[static_cast<std::size_t>(s)]);
    }
    routes.push_back(std::move(mapped));
  }
  return RoutingPlan(plan.day(), std::move(routes));
}

SolverResult solveMostLikely(const TransitionMatrix& t, std::span<const StopIndex> stop_set,
                             const MostLikelyOptions& options) {
  const CostMatrix full = toCostMatrix(t);
  RestrictedCosts restricted = restrictCosts(full, stop_set);

  CvrpInstance instance =
      options.mode == CapacityMode::Unit
          ? CvrpInstance::unitDemand(std::move(restricted.costs), options.fleet_size,
                                     options.fleet)
          : CvrpInstance::withDemands(std::move(restricted.costs), options.fleet_size,
                                      options.demands, options.capacity, options.fleet);

  SolverResult result = solveExact(instance, options.limits);
  if (result.status != SolveStatus::Infeasible && !result.plan.routes().empty()) {
    result.plan = mapPlanIndices(result.plan, restricted.to_global);
  }
  return result;
}

namespace {

void emitCompositions(const std::vector<StopIndex>& perm, std::size_t start, int routes_left,
                      std::vector<Route>& routes,
                      const std::function<void(const std::vector<Route>&)>& fn) {
  const std::size_t n = perm.size();
  if (routes_left == 1) {
    routes.push_back(Route{std::vector<StopIndex>(perm.begin() + start, perm.end())});
    fn(routes);
    routes.pop_back();
    return;
  }
  // Leave at least one customer for each remaining route.
  for (std::size_t len = 1; start + len <= n - static_cast<std::size_t>(routes_left - 1); ++len) {
    routes.push_back(
        Route{std::vector<StopIndex>(perm.begin() + start, perm.begin() + start + len)});
    emitCompositions(perm, start + len, routes_left - 1, routes, fn);
    routes.pop_back();
  }
}

}  // namespace

void forEachPlan(Eigen::Index customers, int fleet_size, FleetMode fleet,
                 const std::function<void(const std::vector<Route>&)>& fn) {
  if (customers < 1) return;
  std::vector<StopIndex> perm(static_cast<std::size_t>(customers));
  std::iota(perm.begin(), perm.end(), StopIndex{1});
  const int max_routes = static_cast<int>(std::min<Eigen::Index>(fleet_size, customers));
  std::vector<Route> routes;
  do {
    if (fleet == FleetMode::Exact) {
      if (fleet_size <= customers) emitCompositions(perm, 0, fleet_size, routes, fn);
    } else {
      for (int m = 1; m <= max_routes; ++m) emitCompositions(perm, 0, m, routes, fn);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
}

namespace {

struct OracleScan {
  bool saw_capacity_feasible = false;
  bool found = false;
  double best_cost = kForbiddenCost;
  std::vector<std::vector<StopIndex>> best_key;
};

OracleScan scanAllPlans(const Eigen::MatrixXd& cost, const CvrpInstance& instance) {
  OracleScan scan;
  forEachPlan(instance.customerCount(), instance.fleet_size, instance.fleet,
              [&](const std::vector<Route>& routes) {
                double total = 0.0;
                bool allowed = true;
                for (const Route& r : routes) {
                  double load = 0.0;
                  for (StopIndex s : r.stops) load += instance.demands(s);
                  if (load > instance.capacity + kEps) return;
                }
                scan.saw_capacity_feasible = true;
                for (const Route& r : routes) {
                  StopIndex prev = StopUniverse::kDepot;
                  for (StopIndex s : r.stops) {
                    if (isForbidden(cost(prev, s))) {
                      allowed = false;
                      break;
                    }
                    total += cost(prev, s);
                    prev = s;
                  }
                  if (!allowed || isForbidden(cost(prev, 0))) {
                    allowed = false;
                    break;
                  }
                  total += cost(prev, 0);
                }
                if (!allowed) return;
                RoutingPlan plan(DayLabel{}, routes);
                auto key = canonicalKey(plan);
                if (!scan.found || total < scan.best_cost - kEps) {
                  scan.found = true;
                  scan.best_cost = total;
                  scan.best_key = std::move(key);
                } else if (total <= scan.best_cost + kEps && key < scan.best_key) {
                  scan.best_cost = std::min(scan.best_cost, total);
                  scan.best_key = std::move(key);
                }
              });
  return scan;
}

SolverResult resultFromScan(const OracleScan& scan, bool penalty_applied, Clock::time_point start) {
  SolverResult result;
  result.stats.penalty_applied = penalty_applied;
  if (scan.found) {
    std::vector<Route> routes;
    for (const auto& stops : scan.best_key) routes.push_back(Route{stops});
    result.plan = RoutingPlan(DayLabel{}, std::move(routes));
    result.objective = scan.best_cost;
    result.status = SolveStatus::Optimal;
  } else {
    result.status = SolveStatus::Infeasible;
    result.objective = kForbiddenCost;
  }
  result.stats.wall_seconds = elapsedSeconds(start);
  return result;
}

}  // namespace

SolverResult bruteForceOracle(const CvrpInstance& instance) {
  const auto start = Clock::now();
  if (instance.customerCount() > 8 || instance.fleet_size > 3) {
    throw std::invalid_argument("bruteForceOracle: guard exceeded (max 8 customers, fleet 3)");
  }
  StructuralCheck check = checkInstance(instance);
  if (check.throws) throw std::invalid_argument("bruteForceOracle: " + check.message);
  if (!check.feasible) {
    SolverResult result;
    result.status = SolveStatus::Infeasible;
    result.stats.wall_seconds = elapsedSeconds(start);
    return result;
  }

  OracleScan scan = scanAllPlans(instance.costs.c, instance);
  if (scan.found || !scan.saw_capacity_feasible ||
      !hasForbiddenOffDiagonal(instance.costs.c)) {
    return resultFromScan(scan, false, start);
  }
  const double penalty = penaltyCost(instance.costs.c, instance.fleet_size);
  OracleScan retry = scanAllPlans(withPenalty(instance.costs.c, penalty), instance);
  return resultFromScan(retry, true, start);
}

}  // namespace routelearn
