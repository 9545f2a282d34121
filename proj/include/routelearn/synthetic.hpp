#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "routelearn/learner.hpp"
#include "routelearn/model.hpp"

namespace routelearn {

struct DriftConfig {
  int week = 0;         // weeks strictly after this one use the new profiles
  double shrink = 0.7;  // post-drift base stop sets shrink to this fraction
};

/// Configuration of a simulated planning operation: latent per-weekday
/// successor preferences, day-to-day stop-set variation, optional concept
/// drift, and a noise rate for off-preference choices.
struct SyntheticWorldConfig {
  std::uint64_t seed = 1;
  int num_stops = 30;
  int num_weeks = 28;
  int days_per_week = 7;
  int stops_per_day_min = 10;
  int stops_per_day_max = 14;
  int routes_per_day_min = 2;
  int routes_per_day_max = 3;
  double noise = 0.1;
  std::optional<DriftConfig> drift;
};

/// Latent ground truth for one weekday: the base stop set and, per stop, the
/// planner's ranked successor preference.
struct WeekdayProfile {
  std::vector<StopIndex> base_stops;
  std::vector<std::vector<StopIndex>> preference;  // [stop] -> ranked customers
};

struct SyntheticWorld {
  StopUniverse universe{"depot"};
  InstanceStream stream;
  CostMatrix costs;  // Euclidean distances over random planar coordinates
  std::vector<WeekdayProfile> profiles;             // [weekday - 1]
  std::vector<WeekdayProfile> post_drift_profiles;  // empty without drift
};

/// Fully reproducible: the same config always yields the same world.
SyntheticWorld generateSynthetic(const SyntheticWorldConfig& config);

/// Persists the latent profiles so experiments can check what the learner
/// recovered.
void saveTruthJson(const std::string& path, const SyntheticWorld& world);

}  // namespace routelearn
