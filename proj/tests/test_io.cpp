#include <doctest.h>

#include <random>
#include <sstream>

#include "routelearn/io.hpp"

using namespace routelearn;

namespace {

const char* kPlanLog =
    "{\"format\":\"routelearn.plans\",\"version\":1}\n"
    "{\"date\":\"2025-01-06\",\"weekday\":1,\"routes\":[[\"A\",\"B\"],[\"C\"]]}\n"
    "{\"date\":\"2025-01-07\",\"weekday\":2,\"routes\":[[\"B\",\"C\"]]}\n";

}  // namespace

TEST_CASE("plan logs parse into a stream and universe") {
  std::istringstream in(kPlanLog);
  auto data = parsePlans(in, "test");
  CHECK(data.warnings.empty());
  REQUIRE(data.stream.size() == 2);
  CHECK(data.universe.size() == 4);
  CHECK(data.universe.find("A") == 1);
  CHECK(data.stream[0].routes().size() == 2);
  CHECK(data.stream[1].day().weekday == 2);
}

TEST_CASE("plan log round trip preserves the stream") {
  std::istringstream in(kPlanLog);
  auto data = parsePlans(in, "test");
  std::ostringstream out;
  writePlans(out, data.stream, data.universe);
  std::istringstream back(out.str());
  auto reloaded = parsePlans(back, "round-trip");
  REQUIRE(reloaded.stream.size() == data.stream.size());
  for (std::size_t i = 0; i < data.stream.size(); ++i) {
    CHECK(reloaded.stream[i].day() == data.stream[i].day());
    REQUIRE(reloaded.stream[i].routes().size() == data.stream[i].routes().size());
    for (std::size_t r = 0; r < data.stream[i].routes().size(); ++r) {
      const Route& original = data.stream[i].routes()[r];
      const Route& copy = reloaded.stream[i].routes()[r];
      REQUIRE(original.stops.size() == copy.stops.size());
      for (std::size_t s = 0; s < original.stops.size(); ++s) {
        CHECK(data.universe.idOf(original.stops[s]) == reloaded.universe.idOf(copy.stops[s]));
      }
    }
  }
  // A second save is byte-identical.
  std::ostringstream out2;
  writePlans(out2, reloaded.stream, reloaded.universe);
  CHECK(out.str() == out2.str());
}

TEST_CASE("plan log errors carry line numbers") {
  std::istringstream dup(
      "{\"format\":\"routelearn.plans\",\"version\":1}\n"
      "{\"date\":\"d\",\"weekday\":1,\"routes\":[[\"A\"],[\"A\"]]}\n");
  try {
    parsePlans(dup, "log");
    FAIL("expected duplicate-stop error");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("log:2") != std::string::npos);
    CHECK(what.find("'A'") != std::string::npos);
  }

  std::istringstream bad_header("{\"format\":\"other\"}\n");
  CHECK_THROWS_AS(parsePlans(bad_header, "log"), std::runtime_error);

  std::istringstream empty("");
  CHECK_THROWS_AS(parsePlans(empty, "log"), std::runtime_error);

  std::istringstream bad_weekday(
      "{\"format\":\"routelearn.plans\",\"version\":1}\n"
      "{\"date\":\"d\",\"weekday\":9,\"routes\":[[\"A\"]]}\n");
  CHECK_THROWS_AS(parsePlans(bad_weekday, "log"), std::runtime_error);
}

TEST_CASE("out-of-order plan logs are re-sorted with a warning") {
  std::istringstream in(
      "{\"format\":\"routelearn.plans\",\"version\":1}\n"
      "{\"date\":\"2025-01-07\",\"weekday\":2,\"routes\":[[\"A\"]]}\n"
      "{\"date\":\"2025-01-06\",\"weekday\":1,\"routes\":[[\"A\"]]}\n");
  auto data = parsePlans(in, "test");
  REQUIRE(data.warnings.size() == 1);
  CHECK(data.warnings[0].find("re-sorted") != std::string::npos);
  CHECK(data.stream[0].day().date == "2025-01-06");
}

TEST_CASE("unknown plan fields warn but do not fail") {
  std::istringstream in(
      "{\"format\":\"routelearn.plans\",\"version\":1}\n"
      "{\"date\":\"d\",\"weekday\":1,\"routes\":[[\"A\"]],\"driver\":\"bob\"}\n");
  auto data = parsePlans(in, "test");
  REQUIRE(data.warnings.size() == 1);
  CHECK(data.warnings[0].find("driver") != std::string::npos);
  CHECK(data.stream.size() == 1);
}

TEST_CASE("cost matrices round trip and validate") {
  StopUniverse u;
  u.add("A");
  u.add("B");
  Eigen::MatrixXd c(3, 3);
  c << 0, 1.25, 2.5, 1.25, 0, 0.75, 2.5, 0.75, 0;
  CostMatrix costs{c, u};

  std::ostringstream out;
  writeCosts(out, costs);
  std::istringstream in(out.str());
  auto reloaded = parseCosts(in, "test");
  CHECK(reloaded.universe == costs.universe);
  CHECK(reloaded.c == costs.c);

  std::istringstream bad_diag(
      "routelearn.costs v1\nstops 2\ndepot A\ndepot 0 1\nA 1 0.5\n");
  CHECK_THROWS_AS(parseCosts(bad_diag, "test"), std::runtime_error);

  std::istringstream negative(
      "routelearn.costs v1\nstops 2\ndepot A\ndepot 0 -1\nA 1 0\n");
  CHECK_THROWS_AS(parseCosts(negative, "test"), std::runtime_error);

  std::istringstream mislabeled(
      "routelearn.costs v1\nstops 2\ndepot A\nA 0 1\ndepot 1 0\n");
  CHECK_THROWS_AS(parseCosts(mislabeled, "test"), std::runtime_error);
}

TEST_CASE("transition matrices round trip bit-exactly") {
  std::mt19937_64 rng(17);
  StopUniverse u;
  u.add("A");
  u.add("B");
  u.add("C");
  Eigen::MatrixXd t(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    double sum = 0;
    for (Eigen::Index j = 0; j < 4; ++j) {
      t(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 100000) / 100000.0 + 1e-6;
      sum += t(i, j);
    }
    t.row(i) /= sum;
  }
  TransitionMatrix matrix{t, u, 1.0 / 3.0};

  std::ostringstream out;
  writeTransitionMatrix(out, matrix);
  std::istringstream in(out.str());
  auto reloaded = parseTransitionMatrix(in, "test");
  CHECK(reloaded.alpha == matrix.alpha);
  CHECK(reloaded.universe == matrix.universe);
  CHECK(reloaded.t == matrix.t);  // exact: 17 significant digits
}

TEST_CASE("records CSV has the documented header and floors times") {
  EvaluationRecord record;
  record.test_day = DayLabel{"2025-01-06", 1};
  record.scheme = EvalScheme::Time2;
  record.alpha = 1.0;
  record.beta = 0.5;
  record.rd = 2;
  record.ad = 3;
  record.solve_seconds = 0.73;
  std::ostringstream out;
  writeRecordsCsv(out, {record});
  CHECK(out.str() ==
        "test_day,weekday,scheme,alpha,beta,rd,ad,status,solve_time_s\n"
        "2025-01-06,1,TIME2,1,0.5,2,3,optimal,0\n");
}

TEST_CASE("summary JSON is well formed") {
  EvaluationRecord record;
  record.scheme = EvalScheme::Unif;
  record.rd = 1;
  record.ad = 2;
  auto rows = summarize({record});
  std::ostringstream out;
  writeSummaryJson(out, rows);
  const std::string text = out.str();
  CHECK(text.find("\"format\": \"routelearn.summary\"") != std::string::npos);
  CHECK(text.find("\"scheme\": \"UNIF\"") != std::string::npos);
  CHECK(text.find("\"mean\": 1.0") != std::string::npos);
}

TEST_CASE("formatDouble survives a round trip for awkward values") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    double v = static_cast<double>(rng()) / static_cast<double>(rng() | 1);
    std::string text = formatDouble(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(formatDouble(1.0) == "1");
  CHECK(formatDouble(0.5) == "0.5");
}
