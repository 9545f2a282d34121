#pragma once

#include <Eigen/Core>

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace routelearn {

using StopIndex = Eigen::Index;

/// Registry of stop identities. Index 0 is always the depot; customers get
/// dense indices in registration order. Re-registering an id is a no-op that
/// returns the existing index.
class StopUniverse {
 public:
  static constexpr StopIndex kDepot = 0;

  explicit StopUniverse(std::string depot_id = "depot");

  StopIndex add(std::string_view id);
  std::optional<StopIndex> find(std::string_view id) const;
  const std::string& idOf(StopIndex index) const;

  StopIndex size() const { return static_cast<StopIndex>(ids_.size()); }
  StopIndex customerCount() const { return size() - 1; }
  const std::vector<std::string>& ids() const { return ids_; }

  bool operator==(const StopUniverse& other) const { return ids_ == other.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, StopIndex> index_;
};

/// Calendar tag of one service day. `date` is any sortable label (ISO dates,
/// or synthetic tags like "W004-D2"); the weekday (1..7) is kept explicit so
/// abstract labels work too.
struct DayLabel {
  std::string date;
  int weekday = 1;

  auto operator<=>(const DayLabel&) const = default;
};

/// One vehicle route: the customer indices in visit order. The depot is
/// implicit at both ends and never appears in `stops`.
struct Route {
  std::vector<StopIndex> stops;

  auto operator<=>(const Route&) const = default;
};

using Arc = std::pair<StopIndex, StopIndex>;
using ArcSet = std::set<Arc>;

/// A routing solution for one day: a set of depot-anchored routes covering
/// each customer exactly once. Routes are stored in canonical order (sorted
/// by their smallest customer index) so serialization is deterministic.
class RoutingPlan {
 public:
  RoutingPlan() = default;
  RoutingPlan(DayLabel day, std::vector<Route> routes);

  const DayLabel& day() const { return day_; }
  const std::vector<Route>& routes() const { return routes_; }

  /// Sorted, de-duplicated customer indices over all routes.
  const std::vector<StopIndex>& stopSet() const { return stop_set_; }

  /// Total stop visits, counting duplicates (equals stopSet().size() only
  /// for valid plans).
  Eigen::Index visitCount() const;

  bool operator==(const RoutingPlan&) const = default;

 private:
  DayLabel day_;
  std::vector<Route> routes_;
  std::vector<StopIndex> stop_set_;
};

/// Canonical comparison key for tie-breaking between plans: the routes in
/// canonical order as plain index sequences.
std::vector<std::vector<StopIndex>> canonicalKey(const RoutingPlan& plan);

/// Chronologically ordered sequence of plans, oldest first.
class InstanceStream {
 public:
  InstanceStream() = default;

  /// Throws std::invalid_argument if day labels decrease anywhere.
  explicit InstanceStream(std::vector<RoutingPlan> plans);

  /// Stable-sorts by day label instead of rejecting out-of-order input.
  static InstanceStream sorted(std::vector<RoutingPlan> plans);

  void append(RoutingPlan plan);

  const std::vector<RoutingPlan>& instances() const { return plans_; }
  std::size_t size() const { return plans_.size(); }
  bool empty() const { return plans_.empty(); }
  const RoutingPlan& operator[](std::size_t i) const { return plans_[i]; }

 private:
  std::vector<RoutingPlan> plans_;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Structural validation of a plan against a universe. Violations are data,
/// not failures: duplicate stops, unknown indices, empty routes, the depot
/// appearing inside a route.
ValidationReport validatePlan(const RoutingPlan& plan, const StopUniverse& universe);

/// The directed arcs traveled by a plan, including the implicit depot
/// departure and return of every route. Throws std::invalid_argument on
/// structurally invalid plans.
ArcSet arcsOf(const RoutingPlan& plan);

}  // namespace routelearn
