#include "routelearn/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace routelearn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::ifstream openForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream openForWrite(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void requirePlainId(const std::string& id) {
  if (id.empty() || id.find_first_of(" \t\n\r,") != std::string::npos) {
    throw std::runtime_error("stop id '" + id + "' must be non-empty and free of whitespace/commas");
  }
}

}  // namespace

std::string formatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

PlanData parsePlans(std::istream& in, const std::string& origin) {
  PlanData data;
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw std::runtime_error(origin + ": empty plan log");
  ++line_no;
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    fail(origin, line_no, std::string("bad header: ") + e.what());
  }
  if (header.value("format", "") != "routelearn.plans" || header.value("version", 0) != 1) {
    fail(origin, line_no, "expected header {\"format\":\"routelearn.plans\",\"version\":1}");
  }

  std::vector<RoutingPlan> plans;
  bool out_of_order = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(origin, line_no, std::string("bad plan record: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (key != "date" && key != "weekday" && key != "routes") {
        data.warnings.push_back(origin + ":" + std::to_string(line_no) +
                                ": ignoring unknown field '" + key + "'");
      }
    }
    if (!j.contains("date") || !j["date"].is_string() || j["date"].get<std::string>().empty()) {
      fail(origin, line_no, "missing or empty 'date'");
    }
    if (j["date"].get<std::string>().find_first_of(",\n\r") != std::string::npos) {
      fail(origin, line_no, "'date' must not contain commas or line breaks");
    }
    if (!j.contains("weekday") || !j["weekday"].is_number_integer()) {
      fail(origin, line_no, "missing integer 'weekday'");
    }
    const int weekday = j["weekday"].get<int>();
    if (weekday < 1 || weekday > 7) fail(origin, line_no, "weekday must be 1..7");
    if (!j.contains("routes") || !j["routes"].is_array() || j["routes"].empty()) {
      fail(origin, line_no, "missing non-empty 'routes' array");
    }

    std::set<std::string> seen;
    std::vector<Route> routes;
    for (const auto& route_json : j["routes"]) {
      if (!route_json.is_array() || route_json.empty()) {
        fail(origin, line_no, "each route must be a non-empty array of stop ids");
      }
      Route route;
      for (const auto& stop_json : route_json) {
        if (!stop_json.is_string()) fail(origin, line_no, "stop ids must be strings");
        const std::string id = stop_json.get<std::string>();
        if (id.empty()) fail(origin, line_no, "empty stop id");
        if (!seen.insert(id).second) {
          fail(origin, line_no, "stop '" + id + "' appears more than once in the plan");
        }
        route.stops.push_back(data.universe.add(id));
      }
      routes.push_back(std::move(route));
    }
    RoutingPlan plan(DayLabel{j["date"].get<std::string>(), weekday}, std::move(routes));
    if (!plans.empty() && plan.day() < plans.back().day()) out_of_order = true;
    plans.push_back(std::move(plan));
  }
  if (plans.empty()) throw std::runtime_error(origin + ": plan log has a header but no plans");

  if (out_of_order) {
    data.warnings.push_back(origin + ": instances were out of chronological order; re-sorted");
    data.stream = InstanceStream::sorted(std::move(plans));
  } else {
    data.stream = InstanceStream(std::move(plans));
  }
  return data;
}

PlanData loadPlans(const std::string& path) {
  auto in = openForRead(path);
  return parsePlans(in, path);
}

void writePlans(std::ostream& out, const InstanceStream& stream, const StopUniverse& universe) {
  out << R"({"format":"routelearn.plans","version":1})" << '\n';
  for (const RoutingPlan& plan : stream.instances()) {
    json routes = json::array();
    for (const Route& route : plan.routes()) {
      json ids = json::array();
      for (StopIndex s : route.stops) ids.push_back(universe.idOf(s));
      routes.push_back(std::move(ids));
    }
    json j;
    j["date"] = plan.day().date;
    j["weekday"] = plan.day().weekday;
    j["routes"] = std::move(routes);
    out << j.dump() << '\n';
  }
}

void savePlans(const std::string& path, const InstanceStream& stream,
               const StopUniverse& universe) {
  auto out = openForWrite(path);
  writePlans(out, stream, universe);
}

namespace {

std::vector<std::string> splitTokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string token;
  while (ss >> token) tokens.push_back(token);
  return tokens;
}

double parseValue(const std::string& token, const std::string& origin, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') fail(origin, line_no, "bad number '" + token + "'");
  return v;
}

std::string nextContentLine(std::istream& in, std::size_t& line_no, const std::string& origin) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty()) return line;
  }
  fail(origin, line_no, "unexpected end of file");
}

StopUniverse universeFromHeader(const std::vector<std::string>& ids) {
  StopUniverse universe(ids.front());
  for (std::size_t i = 1; i < ids.size(); ++i) universe.add(ids[i]);
  return universe;
}

}  // namespace

CostMatrix parseCosts(std::istream& in, const std::string& origin) {
  std::size_t line_no = 0;
  if (splitTokens(nextContentLine(in, line_no, origin)) !=
      std::vector<std::string>{"routelearn.costs", "v1"}) {
    fail(origin, line_no, "expected 'routelearn.costs v1'");
  }
  auto size_tokens = splitTokens(nextContentLine(in, line_no, origin));
  if (size_tokens.size() != 2 || size_tokens[0] != "stops") {
    fail(origin, line_no, "expected 'stops <count>'");
  }
  const long d = std::strtol(size_tokens[1].c_str(), nullptr, 10);
  if (d < 1) fail(origin, line_no, "stop count must be >= 1");

  auto ids = splitTokens(nextContentLine(in, line_no, origin));
  if (static_cast<long>(ids.size()) != d) fail(origin, line_no, "header row size mismatch");

  CostMatrix costs{Eigen::MatrixXd(d, d), universeFromHeader(ids)};
  if (costs.universe.size() != d) fail(origin, line_no, "duplicate stop id in header");
  for (long i = 0; i < d; ++i) {
    auto tokens = splitTokens(nextContentLine(in, line_no, origin));
    if (static_cast<long>(tokens.size()) != d + 1) fail(origin, line_no, "row size mismatch");
    if (tokens[0] != ids[static_cast<std::size_t>(i)]) {
      fail(origin, line_no, "row label '" + tokens[0] + "' does not match header order");
    }
    for (long jcol = 0; jcol < d; ++jcol) {
      const double v = parseValue(tokens[static_cast<std::size_t>(jcol) + 1], origin, line_no);
      if (!std::isfinite(v) || v < 0.0) fail(origin, line_no, "costs must be finite and >= 0");
      if (i == jcol && v != 0.0) fail(origin, line_no, "diagonal must be zero");
      costs.c(i, jcol) = v;
    }
  }
  return costs;
}

CostMatrix loadCosts(const std::string& path) {
  auto in = openForRead(path);
  return parseCosts(in, path);
}

void writeCosts(std::ostream& out, const CostMatrix& costs) {
  const Eigen::Index d = costs.c.rows();
  out << "routelearn.costs v1\n";
  out << "stops " << d << '\n';
  for (Eigen::Index i = 0; i < d; ++i) {
    requirePlainId(costs.universe.idOf(i));
    out << costs.universe.idOf(i) << (i + 1 < d ? ' ' : '\n');
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    out << costs.universe.idOf(i);
    for (Eigen::Index j = 0; j < d; ++j) out << ' ' << formatDouble(costs.c(i, j));
    out << '\n';
  }
}

void saveCosts(const std::string& path, const CostMatrix& costs) {
  auto out = openForWrite(path);
  writeCosts(out, costs);
}

TransitionMatrix parseTransitionMatrix(std::istream& in, const std::string& origin) {
  std::size_t line_no = 0;
  if (splitTokens(nextContentLine(in, line_no, origin)) !=
      std::vector<std::string>{"routelearn.matrix", "v1"}) {
    fail(origin, line_no, "expected 'routelearn.matrix v1'");
  }
  auto kind = splitTokens(nextContentLine(in, line_no, origin));
  if (kind.size() != 2 || kind[0] != "kind" || kind[1] != "transition") {
    fail(origin, line_no, "expected 'kind transition'");
  }
  auto alpha_tokens = splitTokens(nextContentLine(in, line_no, origin));
  if (alpha_tokens.size() != 2 || alpha_tokens[0] != "alpha") {
    fail(origin, line_no, "expected 'alpha <value>'");
  }
  const double alpha = parseValue(alpha_tokens[1], origin, line_no);
  auto size_tokens = splitTokens(nextContentLine(in, line_no, origin));
  if (size_tokens.size() != 2 || size_tokens[0] != "stops") {
    fail(origin, line_no, "expected 'stops <count>'");
  }
  const long d = std::strtol(size_tokens[1].c_str(), nullptr, 10);
  if (d < 1) fail(origin, line_no, "stop count must be >= 1");

  auto ids = splitTokens(nextContentLine(in, line_no, origin));
  if (static_cast<long>(ids.size()) != d) fail(origin, line_no, "header row size mismatch");

  TransitionMatrix matrix{Eigen::MatrixXd(d, d), universeFromHeader(ids), alpha};
  if (matrix.universe.size() != d) fail(origin, line_no, "duplicate stop id in header");
  for (long i = 0; i < d; ++i) {
    auto tokens = splitTokens(nextContentLine(in, line_no, origin));
    if (static_cast<long>(tokens.size()) != d) fail(origin, line_no, "row size mismatch");
    for (long jcol = 0; jcol < d; ++jcol) {
      const double v = parseValue(tokens[static_cast<std::size_t>(jcol)], origin, line_no);
      // Blended rows can round one ulp past 1.
      if (!(v >= 0.0) || !(v <= 1.0 + 1e-12)) {
        fail(origin, line_no, "probabilities must lie in [0, 1]");
      }
      matrix.t(i, jcol) = v;
    }
  }
  return matrix;
}

TransitionMatrix loadTransitionMatrix(const std::string& path) {
  auto in = openForRead(path);
  return parseTransitionMatrix(in, path);
}

void writeTransitionMatrix(std::ostream& out, const TransitionMatrix& matrix) {
  const Eigen::Index d = matrix.t.rows();
  out << "routelearn.matrix v1\n";
  out << "kind transition\n";
  out << "alpha " << formatDouble(matrix.alpha) << '\n';
  out << "stops " << d << '\n';
  for (Eigen::Index i = 0; i < d; ++i) {
    requirePlainId(matrix.universe.idOf(i));
    out << matrix.universe.idOf(i) << (i + 1 < d ? ' ' : '\n');
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j > 0) out << ' ';
      out << formatDouble(matrix.t(i, j));
    }
    out << '\n';
  }
}

void saveTransitionMatrix(const std::string& path, const TransitionMatrix& matrix) {
  auto out = openForWrite(path);
  writeTransitionMatrix(out, matrix);
}

DemandData loadDemands(const std::string& path) {
  auto in = openForRead(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (j.value("format", "") != "routelearn.demands" || j.value("version", 0) != 1) {
    throw std::runtime_error(path + ": expected format routelearn.demands v1");
  }
  DemandData data;
  data.capacity = j.at("capacity").get<double>();
  if (!(data.capacity > 0.0)) throw std::runtime_error(path + ": capacity must be positive");
  for (const auto& [id, value] : j.at("demands").items()) {
    const double q = value.get<double>();
    if (q < 0.0) throw std::runtime_error(path + ": demand for '" + id + "' is negative");
    data.demand_by_id[id] = q;
  }
  return data;
}

void saveDemands(const std::string& path, const DemandData& demands) {
  auto out = openForWrite(path);
  json j;
  j["format"] = "routelearn.demands";
  j["version"] = 1;
  j["capacity"] = demands.capacity;
  json map = json::object();
  for (const auto& [id, q] : demands.demand_by_id) map[id] = q;
  j["demands"] = std::move(map);
  out << j.dump(2) << '\n';
}

void writeRecordsCsv(std::ostream& out, const std::vector<EvaluationRecord>& records) {
  out << "test_day,weekday,scheme,alpha,beta,rd,ad,status,solve_time_s\n";
  for (const EvaluationRecord& record : records) {
    out << record.test_day.date << ',' << record.test_day.weekday << ','
        << toString(record.scheme) << ',' << formatDouble(record.alpha) << ','
        << formatDouble(record.beta) << ',' << record.rd << ',' << record.ad << ','
        << toString(record.status) << ','
        << static_cast<long long>(std::floor(record.solve_seconds)) << '\n';
  }
}

void saveRecordsCsv(const std::string& path, const std::vector<EvaluationRecord>& records) {
  auto out = openForWrite(path);
  writeRecordsCsv(out, records);
}

namespace {

json toJson(const MetricStats& stats) {
  return json{{"mean", stats.mean}, {"median", stats.median}, {"min", stats.min},
              {"max", stats.max},   {"q1", stats.q1},         {"q3", stats.q3}};
}

}  // namespace

void writeSummaryJson(std::ostream& out, const std::vector<SchemeSummary>& rows) {
  json doc;
  doc["format"] = "routelearn.summary";
  doc["version"] = 1;
  json schemes = json::array();
  for (const SchemeSummary& row : rows) {
    json r;
    r["scheme"] = toString(row.scheme);
    r["alpha"] = row.alpha ? json(*row.alpha) : json(nullptr);
    r["beta"] = row.beta ? json(*row.beta) : json(nullptr);
    r["count"] = row.count;
    r["rd"] = toJson(row.rd);
    r["ad"] = toJson(row.ad);
    r["mean_solve_seconds"] = row.mean_solve_seconds;
    r["non_optimal"] = row.non_optimal;
    r["skipped_groups"] = row.skipped_groups;
    schemes.push_back(std::move(r));
  }
  doc["schemes"] = std::move(schemes);
  out << doc.dump(2) << '\n';
}

void saveSummaryJson(const std::string& path, const std::vector<SchemeSummary>& rows) {
  auto out = openForWrite(path);
  writeSummaryJson(out, rows);
}

}  // namespace routelearn
