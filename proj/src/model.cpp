#include "routelearn/model.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace routelearn {

StopUniverse::StopUniverse(std::string depot_id) {
  index_.emplace(depot_id, kDepot);
  ids_.push_back(std::move(depot_id));
}

StopIndex StopUniverse::add(std::string_view id) {
  if (auto it = index_.find(std::string(id)); it != index_.end()) {
    return it->second;
  }
  StopIndex index = size();
  ids_.emplace_back(id);
  index_.emplace(ids_.back(), index);
  return index;
}

std::optional<StopIndex> StopUniverse::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& StopUniverse::idOf(StopIndex index) const {
  if (index < 0 || index >= size()) {
    throw std::out_of_range("StopUniverse::idOf: index " + std::to_string(index) +
                            " outside universe of size " + std::to_string(size()));
  }
  return ids_[static_cast<std::size_t>(index)];
}

namespace {

StopIndex smallestStop(const Route& route) {
  if (route.stops.empty()) return std::numeric_limits<StopIndex>::max();
  return *std::min_element(route.stops.begin(), route.stops.end());
}

}  // namespace

RoutingPlan::RoutingPlan(DayLabel day, std::vector<Route> routes)
    : day_(std::move(day)), routes_(std::move(routes)) {
  std::sort(routes_.begin(), routes_.end(), [](const Route& a, const Route& b) {
    StopIndex ma = smallestStop(a), mb = smallestStop(b);
    if (ma != mb) return ma < mb;
    return a.stops < b.stops;
  });
  for (const Route& r : routes_) {
    stop_set_.insert(stop_set_.end(), r.stops.begin(), r.stops.end());
  }
  std::sort(stop_set_.begin(), stop_set_.end());
  stop_set_.erase(std::unique(stop_set_.begin(), stop_set_.end()), stop_set_.end());
}

Eigen::Index RoutingPlan::visitCount() const {
  Eigen::Index total = 0;
  for (const Route& r : routes_) total += static_cast<Eigen::Index>(r.stops.size());
  return total;
}

std::vector<std::vector<StopIndex>> canonicalKey(const RoutingPlan& plan) {
  std::vector<std::vector<StopIndex>> key;
  key.reserve(plan.routes().size());
  for (const Route& r : plan.routes()) key.push_back(r.stops);
  return key;
}

InstanceStream::InstanceStream(std::vector<RoutingPlan> plans) : plans_(std::move(plans)) {
  for (std::size_t i = 1; i < plans_.size(); ++i) {
    if (plans_[i].day() < plans_[i - 1].day()) {
      throw std::invalid_argument("InstanceStream: day labels must be non-decreasing (instance " +
                                  std::to_string(i) + " is older than its predecessor)");
    }
  }
}

InstanceStream InstanceStream::sorted(std::vector<RoutingPlan> plans) {
  std::stable_sort(plans.begin(), plans.end(),
                   [](const RoutingPlan& a, const RoutingPlan& b) { return a.day() < b.day(); });
  return InstanceStream(std::move(plans));
}

void InstanceStream::append(RoutingPlan plan) {
  if (!plans_.empty() && plan.day() < plans_.back().day()) {
    throw std::invalid_argument("InstanceStream::append: new instance is older than the stream tail");
  }
  plans_.push_back(std::move(plan));
}

ValidationReport validatePlan(const RoutingPlan& plan, const StopUniverse& universe) {
  ValidationReport report;
  if (plan.routes().empty()) {
    report.violations.push_back("plan has no routes");
  }
  std::unordered_map<StopIndex, int> seen;
  for (std::size_t ri = 0; ri < plan.routes().size(); ++ri) {
    const Route& route = plan.routes()[ri];
    if (route.stops.empty()) {
      report.violations.push_back("route " + std::to_string(ri) + " is empty");
    }
    for (StopIndex s : route.stops) {
      if (s == StopUniverse::kDepot) {
        report.violations.push_back("depot inside route " + std::to_string(ri));
        continue;
      }
      if (s < 0 || s >= universe.size()) {
        report.violations.push_back("unknown index " + std::to_string(s) + " in route " +
                                    std::to_string(ri));
        continue;
      }
      ++seen[s];
    }
  }
  for (StopIndex s : plan.stopSet()) {
    auto it = seen.find(s);
    if (it != seen.end() && it->second > 1) {
      report.violations.push_back("stop " + std::to_string(s) + " (" + universe.idOf(s) +
                                  ") appears " + std::to_string(it->second) + " times");
    }
  }
  return report;
}

ArcSet arcsOf(const RoutingPlan& plan) {
  if (plan.routes().empty()) {
    throw std::invalid_argument("arcsOf: plan has no routes");
  }
  std::set<StopIndex> seen;
  ArcSet arcs;
  for (const Route& route : plan.routes()) {
    if (route.stops.empty()) {
      throw std::invalid_argument("arcsOf: plan contains an empty route");
    }
    StopIndex prev = StopUniverse::kDepot;
    for (StopIndex s : route.stops) {
      if (s == StopUniverse::kDepot) {
        throw std::invalid_argument("arcsOf: depot appears inside a route");
      }
      if (s < 0) {
        throw std::invalid_argument("arcsOf: negative stop index");
      }
      if (!seen.insert(s).second) {
        throw std::invalid_argument("arcsOf: stop " + std::to_string(s) +
                                    " visited more than once");
      }
      arcs.emplace(prev, s);
      prev = s;
    }
    arcs.emplace(prev, StopUniverse::kDepot);
  }
  return arcs;
}

}  // namespace routelearn
