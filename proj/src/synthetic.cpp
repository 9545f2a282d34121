#include "routelearn/synthetic.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace routelearn {

namespace {

// mt19937_64 output is standardized, but the standard distributions are not;
// these draws keep generated worlds identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double real01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int intIn(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % range);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      std::swap(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(intIn(0, i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

void validate(const SyntheticWorldConfig& config) {
  auto reject = [](const std::string& what) {
    throw std::invalid_argument("generateSynthetic: " + what);
  };
  if (config.num_stops < 1) reject("num_stops must be >= 1");
  if (config.num_weeks < 1) reject("num_weeks must be >= 1");
  if (config.days_per_week < 1 || config.days_per_week > 7) reject("days_per_week must be 1..7");
  if (config.stops_per_day_min < 1 || config.stops_per_day_min > config.stops_per_day_max) {
    reject("stops_per_day range is invalid");
  }
  if (config.stops_per_day_max > config.num_stops) {
    reject("stops_per_day exceeds the number of stops");
  }
  if (config.routes_per_day_min < 1 || config.routes_per_day_min > config.routes_per_day_max) {
    reject("routes_per_day range is invalid");
  }
  if (config.noise < 0.0 || config.noise > 1.0) reject("noise must lie in [0, 1]");
  if (config.drift) {
    if (config.drift->week < 1 || config.drift->week > config.num_weeks) {
      reject("drift week outside the horizon");
    }
    if (!(config.drift->shrink > 0.0) || config.drift->shrink > 1.0) {
      reject("drift shrink must lie in (0, 1]");
    }
  }
}

std::vector<std::vector<StopIndex>> drawPreference(Rng& rng, int num_stops) {
  std::vector<std::vector<StopIndex>> preference(static_cast<std::size_t>(num_stops) + 1);
  std::vector<StopIndex> customers(static_cast<std::size_t>(num_stops));
  for (int i = 0; i < num_stops; ++i) customers[static_cast<std::size_t>(i)] = i + 1;
  for (int stop = 0; stop <= num_stops; ++stop) {
    std::vector<StopIndex> ranking = customers;
    rng.shuffle(ranking);
    preference[static_cast<std::size_t>(stop)] = std::move(ranking);
  }
  return preference;
}

std::vector<StopIndex> drawSubset(Rng& rng, const std::vector<StopIndex>& pool,
                                  std::size_t count) {
  std::vector<StopIndex> copy = pool;
  rng.shuffle(copy);
  copy.resize(count);
  std::sort(copy.begin(), copy.end());
  return copy;
}

}  // namespace

SyntheticWorld generateSynthetic(const SyntheticWorldConfig& config) {
  validate(config);
  Rng rng(config.seed);

  SyntheticWorld world;
  const int width = static_cast<int>(std::to_string(config.num_stops).size());
  for (int i = 1; i <= config.num_stops; ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "S%0*d", width, i);
    world.universe.add(id);
  }

  // Planar coordinates drive the distance baseline; preferences are drawn
  // independently of them.
  std::vector<std::pair<double, double>> points;
  points.reserve(static_cast<std::size_t>(config.num_stops) + 1);
  for (int i = 0; i <= config.num_stops; ++i) {
    double x = rng.real01() * 100.0;
    double y = rng.real01() * 100.0;
    points.emplace_back(x, y);
  }

  std::vector<StopIndex> all_customers(static_cast<std::size_t>(config.num_stops));
  for (int i = 0; i < config.num_stops; ++i) all_customers[static_cast<std::size_t>(i)] = i + 1;

  for (int wd = 1; wd <= config.days_per_week; ++wd) {
    WeekdayProfile profile;
    profile.base_stops =
        drawSubset(rng, all_customers, static_cast<std::size_t>(config.stops_per_day_max));
    profile.preference = drawPreference(rng, config.num_stops);
    world.profiles.push_back(std::move(profile));
  }
  if (config.drift) {
    for (int wd = 1; wd <= config.days_per_week; ++wd) {
      const auto& base = world.profiles[static_cast<std::size_t>(wd - 1)].base_stops;
      const std::size_t shrunk = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::lround(config.drift->shrink * static_cast<double>(base.size()))));
      WeekdayProfile profile;
      profile.base_stops = drawSubset(rng, base, shrunk);
      profile.preference = drawPreference(rng, config.num_stops);
      world.post_drift_profiles.push_back(std::move(profile));
    }
  }

  std::vector<char> visited(static_cast<std::size_t>(config.num_stops) + 1, false);
  for (int week = 1; week <= config.num_weeks; ++week) {
    for (int wd = 1; wd <= config.days_per_week; ++wd) {
      const bool post = config.drift && week > config.drift->week;
      const WeekdayProfile& profile = post
                                          ? world.post_drift_profiles[static_cast<std::size_t>(wd - 1)]
                                          : world.profiles[static_cast<std::size_t>(wd - 1)];
      const auto& base = profile.base_stops;

      int s = rng.intIn(config.stops_per_day_min, config.stops_per_day_max);
      s = std::min<int>(s, static_cast<int>(base.size()));
      std::vector<StopIndex> day_stops = static_cast<std::size_t>(s) == base.size()
                                             ? base
                                             : drawSubset(rng, base, static_cast<std::size_t>(s));
      int r = rng.intIn(config.routes_per_day_min, config.routes_per_day_max);
      r = std::min(r, s);

      for (StopIndex stop : day_stops) visited[static_cast<std::size_t>(stop)] = false;
      std::vector<Route> routes;
      int remaining = s;
      for (int route_idx = 0; route_idx < r; ++route_idx) {
        const int size = s / r + (route_idx < s % r ? 1 : 0);
        Route route;
        StopIndex current = StopUniverse::kDepot;
        for (int step = 0; step < size; ++step) {
          std::vector<StopIndex> candidates;
          candidates.reserve(static_cast<std::size_t>(remaining));
          for (StopIndex stop : day_stops) {
            if (!visited[static_cast<std::size_t>(stop)]) candidates.push_back(stop);
          }
          StopIndex preferred = candidates.front();
          for (StopIndex ranked : profile.preference[static_cast<std::size_t>(current)]) {
            if (std::binary_search(candidates.begin(), candidates.end(), ranked)) {
              preferred = ranked;
              break;
            }
          }
          StopIndex chosen = preferred;
          if (config.noise > 0.0) {
            const double draw = rng.real01();
            if (draw < config.noise && candidates.size() > 1) {
              int pick = rng.intIn(0, static_cast<int>(candidates.size()) - 2);
              std::vector<StopIndex> others;
              others.reserve(candidates.size() - 1);
              for (StopIndex c : candidates) {
                if (c != preferred) others.push_back(c);
              }
              chosen = others[static_cast<std::size_t>(pick)];
            }
          }
          visited[static_cast<std::size_t>(chosen)] = true;
          --remaining;
          route.stops.push_back(chosen);
          current = chosen;
        }
        routes.push_back(std::move(route));
      }

      char label[32];
      std::snprintf(label, sizeof(label), "W%03d-D%d", week, wd);
      world.stream.append(RoutingPlan(DayLabel{label, wd}, std::move(routes)));
    }
  }

  const Eigen::Index d = world.universe.size();
  Eigen::MatrixXd c(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double dx = points[static_cast<std::size_t>(i)].first -
                        points[static_cast<std::size_t>(j)].first;
      const double dy = points[static_cast<std::size_t>(i)].second -
                        points[static_cast<std::size_t>(j)].second;
      c(i, j) = i == j ? 0.0 : std::sqrt(dx * dx + dy * dy);
    }
  }
  world.costs = CostMatrix{std::move(c), world.universe};
  return world;
}

void saveTruthJson(const std::string& path, const SyntheticWorld& world) {
  using nlohmann::json;
  auto profileJson = [&](const WeekdayProfile& profile, int weekday) {
    json j;
    j["weekday"] = weekday;
    json base = json::array();
    for (StopIndex s : profile.base_stops) base.push_back(world.universe.idOf(s));
    j["base_stops"] = std::move(base);
    json pref = json::object();
    for (std::size_t stop = 0; stop < profile.preference.size(); ++stop) {
      json ranking = json::array();
      for (StopIndex s : profile.preference[stop]) ranking.push_back(world.universe.idOf(s));
      pref[world.universe.idOf(static_cast<StopIndex>(stop))] = std::move(ranking);
    }
    j["preference"] = std::move(pref);
    return j;
  };

  json doc;
  doc["format"] = "routelearn.truth";
  doc["version"] = 1;
  json weekdays = json::array();
  for (std::size_t wd = 0; wd < world.profiles.size(); ++wd) {
    weekdays.push_back(profileJson(world.profiles[wd], static_cast<int>(wd) + 1));
  }
  doc["weekdays"] = std::move(weekdays);
  if (!world.post_drift_profiles.empty()) {
    json post = json::array();
    for (std::size_t wd = 0; wd < world.post_drift_profiles.size(); ++wd) {
      post.push_back(profileJson(world.post_drift_profiles[wd], static_cast<int>(wd) + 1));
    }
    doc["post_drift"] = std::move(post);
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

}  // namespace routelearn
