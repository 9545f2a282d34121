#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "routelearn/evaluation.hpp"
#include "routelearn/io.hpp"
#include "routelearn/learner.hpp"
#include "routelearn/model.hpp"
#include "routelearn/solver.hpp"
#include "routelearn/synthetic.hpp"

#include <json.hpp>

namespace {

using namespace routelearn;

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      if (!current.empty()) parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

std::pair<int, int> parseRange(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

std::vector<EvalScheme> parseSchemes(const std::string& text) {
  std::vector<EvalScheme> schemes;
  if (text == "ALL") {
    return {EvalScheme::Unif, EvalScheme::Time, EvalScheme::Time2,
            EvalScheme::Simi, EvalScheme::Simi2, EvalScheme::Dist};
  }
  for (const std::string& name : splitList(text)) {
    auto scheme = parseEvalScheme(name);
    if (!scheme) throw CLI::ValidationError("--scheme", "unknown scheme '" + name + "'");
    schemes.push_back(*scheme);
  }
  if (schemes.empty()) throw CLI::ValidationError("--scheme", "no schemes given");
  return schemes;
}

CapacityMode parseCapacity(const std::string& text) {
  if (text == "unit") return CapacityMode::Unit;
  if (text == "demand") return CapacityMode::Demand;
  throw CLI::ValidationError("--capacity", "expected unit|demand");
}

FleetMode parseFleet(const std::string& text) {
  if (text == "equal") return FleetMode::Exact;
  if (text == "atmost") return FleetMode::AtMost;
  throw CLI::ValidationError("--fleet", "expected equal|atmost");
}

EvalMode parseMode(const std::string& text) {
  if (text == "batch") return EvalMode::Batch;
  if (text == "incremental") return EvalMode::Incremental;
  throw CLI::ValidationError("--mode", "expected batch|incremental");
}

SmoothingDenominator parseDenominator(const std::string& text) {
  if (text == "all") return SmoothingDenominator::CountAll;
  if (text == "offdiag") return SmoothingDenominator::ExcludeDiagonal;
  throw CLI::ValidationError("--denominator", "expected all|offdiag");
}

void printWarnings(const PlanData& data) {
  for (const std::string& warning : data.warnings) std::cerr << "warning: " << warning << '\n';
}

struct GenerateArgs {
  std::uint64_t seed = 1;
  std::string out;
  int stops = 30;
  int weeks = 28;
  int days_per_week = 7;
  std::string stops_per_day = "10:14";
  std::string routes_per_day = "2:3";
  double noise = 0.1;
  int drift_week = 0;
  double drift_shrink = 0.7;
};

int runGenerate(const GenerateArgs& args) {
  SyntheticWorldConfig config;
  config.seed = args.seed;
  config.num_stops = args.stops;
  config.num_weeks = args.weeks;
  config.days_per_week = args.days_per_week;
  std::tie(config.stops_per_day_min, config.stops_per_day_max) = parseRange(args.stops_per_day);
  std::tie(config.routes_per_day_min, config.routes_per_day_max) =
      parseRange(args.routes_per_day);
  config.noise = args.noise;
  if (args.drift_week > 0) config.drift = DriftConfig{args.drift_week, args.drift_shrink};

  auto world = generateSynthetic(config);
  savePlans(args.out + ".plans.jsonl", world.stream, world.universe);
  saveCosts(args.out + ".costs.txt", world.costs);
  saveTruthJson(args.out + ".truth.json", world);
  std::cerr << "wrote " << world.stream.size() << " plans over "
            << world.universe.customerCount() << " stops to " << args.out << ".plans.jsonl\n";
  return 0;
}

struct BuildMatrixArgs {
  std::string plans;
  std::string scheme = "UNIF";
  double alpha = 1.0;
  double beta = 1.0;
  std::string costs;
  std::string reference_stops;
  std::string denominator = "all";
  std::string out;
};

int runBuildMatrix(const BuildMatrixArgs& args) {
  PlanData data = loadPlans(args.plans);
  printWarnings(data);

  auto scheme = parseEvalScheme(args.scheme);
  if (!scheme || *scheme == EvalScheme::Dist) {
    throw CLI::ValidationError("--scheme", "expected UNIF|TIME|TIME2|SIMI|SIMI2");
  }

  WeighingScheme weighing = WeighingScheme::unif();
  if (*scheme == EvalScheme::Time) weighing = WeighingScheme::time();
  if (*scheme == EvalScheme::Time2) weighing = WeighingScheme::time2();
  if (*scheme == EvalScheme::Simi || *scheme == EvalScheme::Simi2) {
    std::vector<StopIndex> reference;
    for (const std::string& id : splitList(args.reference_stops)) {
      auto index = data.universe.find(id);
      if (!index) throw std::runtime_error("reference stop '" + id + "' not in the plan log");
      reference.push_back(*index);
    }
    std::sort(reference.begin(), reference.end());
    if (reference.empty()) {
      throw CLI::ValidationError("--reference-stops", "SIMI schemes need reference stops");
    }
    weighing = *scheme == EvalScheme::Simi ? WeighingScheme::simi(std::move(reference))
                                           : WeighingScheme::simi2(std::move(reference));
  }

  auto freq = buildFrequency(data.stream, weighing, data.universe);
  auto matrix = smoothNormalize(freq, args.alpha, parseDenominator(args.denominator));
  if (args.beta < 1.0) {
    if (args.costs.empty()) {
      throw CLI::ValidationError("--beta", "beta < 1 needs --costs to blend with");
    }
    auto costs = loadCosts(args.costs);
    // Re-address the cost matrix onto the plan universe before blending.
    const Eigen::Index d = data.universe.size();
    Eigen::MatrixXd c(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::Index ci = i == 0 ? 0 : costs.universe.find(data.universe.idOf(i)).value_or(-1);
        Eigen::Index cj = j == 0 ? 0 : costs.universe.find(data.universe.idOf(j)).value_or(-1);
        if (ci < 0 || cj < 0) {
          throw std::runtime_error("cost matrix misses a stop of the plan log");
        }
        c(i, j) = costs.c(ci, cj);
      }
    }
    auto d_matrix = distanceProbabilities(CostMatrix{std::move(c), data.universe});
    matrix = blend(matrix, d_matrix, args.beta);
  }
  saveTransitionMatrix(args.out, matrix);
  std::cerr << "wrote " << matrix.t.rows() << "x" << matrix.t.cols() << " matrix to " << args.out
            << '\n';
  return 0;
}

struct SolveArgs {
  std::string matrix;
  std::string costs;
  std::string stops;
  int vehicles = 1;
  std::string fleet = "equal";
  std::string capacity = "unit";
  std::string demands;
  std::string out;
  long long max_nodes = 50'000'000;
  double max_seconds = 600.0;
};

int runSolve(const SolveArgs& args) {
  if (args.matrix.empty() == args.costs.empty()) {
    throw CLI::ValidationError("solve", "give exactly one of --matrix or --costs");
  }
  SolverLimits limits{args.max_nodes, args.max_seconds};
  const FleetMode fleet = parseFleet(args.fleet);
  const CapacityMode capacity_mode = parseCapacity(args.capacity);

  std::optional<DemandData> demand_data;
  if (capacity_mode == CapacityMode::Demand) {
    if (args.demands.empty()) {
      throw CLI::ValidationError("--capacity", "demand mode needs --demands");
    }
    demand_data = loadDemands(args.demands);
  }

  SolverResult result;
  StopUniverse universe;
  if (!args.matrix.empty()) {
    auto matrix = loadTransitionMatrix(args.matrix);
    universe = matrix.universe;
    std::vector<StopIndex> stop_set;
    for (const std::string& id : splitList(args.stops)) {
      auto index = matrix.universe.find(id);
      if (!index) throw std::runtime_error("stop '" + id + "' not in the matrix universe");
      stop_set.push_back(*index);
    }
    std::sort(stop_set.begin(), stop_set.end());
    MostLikelyOptions options;
    options.fleet_size = args.vehicles;
    options.fleet = fleet;
    options.mode = capacity_mode;
    options.limits = limits;
    if (demand_data) {
      StopUniverse local(matrix.universe.idOf(0));
      for (StopIndex s : stop_set) local.add(matrix.universe.idOf(s));
      Eigen::VectorXd q = Eigen::VectorXd::Zero(local.size());
      for (Eigen::Index i = 1; i < local.size(); ++i) {
        auto it = demand_data->demand_by_id.find(local.idOf(i));
        if (it == demand_data->demand_by_id.end()) {
          throw std::runtime_error("no demand for stop '" + local.idOf(i) + "'");
        }
        q(i) = it->second;
      }
      options.demands = std::move(q);
      options.capacity = demand_data->capacity;
    }
    result = solveMostLikely(matrix, stop_set, options);
  } else {
    auto costs = loadCosts(args.costs);
    universe = costs.universe;
    std::vector<StopIndex> stop_set;
    for (const std::string& id : splitList(args.stops)) {
      auto index = costs.universe.find(id);
      if (!index) throw std::runtime_error("stop '" + id + "' not in the cost matrix");
      stop_set.push_back(*index);
    }
    auto restricted = restrictCosts(costs, stop_set);
    CvrpInstance instance =
        capacity_mode == CapacityMode::Unit
            ? CvrpInstance::unitDemand(restricted.costs, args.vehicles, fleet)
            : [&] {
                Eigen::VectorXd q = Eigen::VectorXd::Zero(restricted.costs.universe.size());
                for (Eigen::Index i = 1; i < restricted.costs.universe.size(); ++i) {
                  auto it = demand_data->demand_by_id.find(restricted.costs.universe.idOf(i));
                  if (it == demand_data->demand_by_id.end()) {
                    throw std::runtime_error("no demand for stop '" +
                                             restricted.costs.universe.idOf(i) + "'");
                  }
                  q(i) = it->second;
                }
                return CvrpInstance::withDemands(restricted.costs, args.vehicles, q,
                                                 demand_data->capacity, fleet);
              }();
    result = solveExact(instance, limits);
    if (result.status != SolveStatus::Infeasible && !result.plan.routes().empty()) {
      result.plan = mapPlanIndices(result.plan, restricted.to_global);
    }
  }

  nlohmann::json doc;
  doc["format"] = "routelearn.solution";
  doc["version"] = 1;
  doc["status"] = toString(result.status);
  doc["objective"] = result.status == SolveStatus::Infeasible ? nlohmann::json(nullptr)
                                                              : nlohmann::json(result.objective);
  nlohmann::json routes = nlohmann::json::array();
  for (const Route& r : result.plan.routes()) {
    nlohmann::json ids = nlohmann::json::array();
    for (StopIndex s : r.stops) ids.push_back(universe.idOf(s));
    routes.push_back(std::move(ids));
  }
  doc["routes"] = std::move(routes);
  doc["nodes"] = result.stats.nodes;
  doc["penalty_applied"] = result.stats.penalty_applied;

  if (args.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot open '" + args.out + "' for writing");
    out << doc.dump(2) << '\n';
  }
  std::cerr << "status " << toString(result.status) << ", " << result.stats.nodes << " nodes, "
            << result.stats.wall_seconds << " s\n";
  return result.status == SolveStatus::Infeasible ? 2 : 0;
}

struct EvaluateArgs {
  std::string plans;
  std::string mode = "incremental";
  std::string scheme = "UNIF";
  double alpha = 1.0;
  double beta = 1.0;
  double split = 0.75;
  std::string capacity = "unit";
  std::string fleet = "equal";
  std::string denominator = "all";
  std::string costs;
  std::string demands;
  std::string out;
  std::string summary;
  bool no_weekday_grouping = false;
  long long max_nodes = 50'000'000;
  double max_seconds = 600.0;
};

std::vector<EvaluationRecord> runEvaluation(const EvaluateArgs& args, const PlanData& data) {
  SplitConfig split;
  split.mode = parseMode(args.mode);
  split.train_fraction = args.split;
  split.weekday_grouping = !args.no_weekday_grouping;

  EvaluationOptions options;
  options.alpha = args.alpha;
  options.beta = args.beta;
  options.capacity_mode = parseCapacity(args.capacity);
  options.fleet = parseFleet(args.fleet);
  options.denominator = parseDenominator(args.denominator);
  options.limits = SolverLimits{args.max_nodes, args.max_seconds};

  std::optional<CostMatrix> costs;
  if (!args.costs.empty()) {
    costs = loadCosts(args.costs);
    options.costs = &*costs;
  }
  std::optional<DemandData> demand_data;
  if (!args.demands.empty()) {
    demand_data = loadDemands(args.demands);
    options.demands = &*demand_data;
  }

  std::vector<EvaluationRecord> records;
  for (EvalScheme scheme : parseSchemes(args.scheme)) {
    auto batch = evaluate(data.stream, data.universe, split, scheme, options);
    records.insert(records.end(), batch.begin(), batch.end());
  }
  return records;
}

int runEvaluate(const EvaluateArgs& args) {
  PlanData data = loadPlans(args.plans);
  printWarnings(data);
  auto records = runEvaluation(args, data);
  if (args.out.empty()) {
    writeRecordsCsv(std::cout, records);
  } else {
    saveRecordsCsv(args.out, records);
    std::cerr << "wrote " << records.size() << " records to " << args.out << '\n';
  }
  if (!args.summary.empty()) {
    saveSummaryJson(args.summary, summarize(records));
    std::cerr << "wrote summary to " << args.summary << '\n';
  }
  return 0;
}

struct ReportArgs {
  EvaluateArgs eval;
  std::string alpha_sweep;
  std::string beta_sweep;
  std::string out = "report";
};

int runReport(const ReportArgs& args) {
  if (args.alpha_sweep.empty() == args.beta_sweep.empty()) {
    throw CLI::ValidationError("report", "give exactly one of --alpha-sweep or --beta-sweep");
  }
  PlanData data = loadPlans(args.eval.plans);
  printWarnings(data);

  const bool alpha_sweep = !args.alpha_sweep.empty();
  std::vector<double> values;
  for (const std::string& token : splitList(alpha_sweep ? args.alpha_sweep : args.beta_sweep)) {
    values.push_back(std::stod(token));
  }
  if (values.empty()) throw CLI::ValidationError("report", "empty sweep");

  std::ofstream sweep(args.out + ".sweep.csv");
  if (!sweep) throw std::runtime_error("cannot open '" + args.out + ".sweep.csv' for writing");
  sweep << "param,value,scheme,count,rd_mean,rd_median,ad_mean,ad_median,"
           "solve_time_mean_s,non_optimal\n";

  for (double value : values) {
    EvaluateArgs step = args.eval;
    if (alpha_sweep) {
      step.alpha = value;
    } else {
      step.beta = value;
    }
    auto records = runEvaluation(step, data);
    auto rows = summarize(records);
    const std::string tag = (alpha_sweep ? "alpha" : "beta") + std::string("_") +
                            formatDouble(value);
    saveSummaryJson(args.out + "." + tag + ".summary.json", rows);
    for (const SchemeSummary& row : rows) {
      sweep << (alpha_sweep ? "alpha" : "beta") << ',' << formatDouble(value) << ','
            << toString(row.scheme) << ',' << row.count << ',' << formatDouble(row.rd.mean) << ','
            << formatDouble(row.rd.median) << ',' << formatDouble(row.ad.mean) << ','
            << formatDouble(row.ad.median) << ',' << formatDouble(row.mean_solve_seconds) << ','
            << row.non_optimal << '\n';
    }
    std::cerr << "swept " << (alpha_sweep ? "alpha" : "beta") << " = " << formatDouble(value)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learns routing preferences from historical plans and solves the CVRP with them"};
  app.require_subcommand(1);

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "Generate a synthetic plan history");
  generate->add_option("--seed", generate_args.seed, "RNG seed");
  generate->add_option("--out", generate_args.out, "Output prefix")->required();
  generate->add_option("--stops", generate_args.stops, "Universe size");
  generate->add_option("--weeks", generate_args.weeks, "Number of weeks");
  generate->add_option("--days-per-week", generate_args.days_per_week, "Weekdays per week (1-7)");
  generate->add_option("--stops-per-day", generate_args.stops_per_day, "Range MIN:MAX");
  generate->add_option("--routes-per-day", generate_args.routes_per_day, "Range MIN:MAX");
  generate->add_option("--noise", generate_args.noise, "Off-preference choice probability");
  generate->add_option("--drift-week", generate_args.drift_week,
                       "Concept drift after this week (0 = none)");
  generate->add_option("--drift-shrink", generate_args.drift_shrink,
                       "Post-drift stop set shrink factor");

  BuildMatrixArgs build_args;
  auto* build = app.add_subcommand("build-matrix", "Learn a transition matrix from a plan log");
  build->add_option("--plans", build_args.plans, "Plan log")->required();
  build->add_option("--scheme", build_args.scheme, "UNIF|TIME|TIME2|SIMI|SIMI2");
  build->add_option("--alpha", build_args.alpha, "Laplace smoothing parameter");
  build->add_option("--beta", build_args.beta, "Blend with distance probabilities when < 1");
  build->add_option("--costs", build_args.costs, "Cost matrix (needed when beta < 1)");
  build->add_option("--reference-stops", build_args.reference_stops,
                    "Comma-separated stop ids for SIMI weighting");
  build->add_option("--denominator", build_args.denominator,
                    "Laplace row length: all|offdiag");
  build->add_option("--out", build_args.out, "Output matrix file")->required();

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Solve one CVRP instance");
  solve->add_option("--matrix", solve_args.matrix, "Transition matrix file");
  solve->add_option("--costs", solve_args.costs, "Cost matrix file");
  solve->add_option("--stops", solve_args.stops, "Comma-separated stop ids")->required();
  solve->add_option("--vehicles", solve_args.vehicles, "Fleet size")->required();
  solve->add_option("--fleet", solve_args.fleet, "equal|atmost");
  solve->add_option("--capacity", solve_args.capacity, "unit|demand");
  solve->add_option("--demands", solve_args.demands, "Demand file for demand mode");
  solve->add_option("--out", solve_args.out, "Solution JSON (stdout when omitted)");
  solve->add_option("--max-nodes", solve_args.max_nodes, "Search node budget");
  solve->add_option("--max-seconds", solve_args.max_seconds, "Wall-clock budget");

  EvaluateArgs eval_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predictions against held-out plans");
  auto addEvalOptions = [](CLI::App* cmd, EvaluateArgs& args) {
    cmd->add_option("--plans", args.plans, "Plan log")->required();
    cmd->add_option("--mode", args.mode, "batch|incremental");
    cmd->add_option("--scheme", args.scheme, "Comma list of UNIF|TIME|TIME2|SIMI|SIMI2|DIST, or ALL");
    cmd->add_option("--split", args.split, "Training fraction");
    cmd->add_option("--capacity", args.capacity, "unit|demand");
    cmd->add_option("--fleet", args.fleet, "equal|atmost");
    cmd->add_option("--denominator", args.denominator, "Laplace row length: all|offdiag");
    cmd->add_option("--costs", args.costs, "Cost matrix (DIST or beta < 1)");
    cmd->add_option("--demands", args.demands, "Demand file for demand mode");
    cmd->add_flag("--no-weekday-grouping", args.no_weekday_grouping,
                  "Treat the stream as one group");
    cmd->add_option("--max-nodes", args.max_nodes, "Search node budget");
    cmd->add_option("--max-seconds", args.max_seconds, "Wall-clock budget per solve");
  };
  addEvalOptions(evaluate_cmd, eval_args);
  evaluate_cmd->add_option("--alpha", eval_args.alpha, "Laplace smoothing parameter");
  evaluate_cmd->add_option("--beta", eval_args.beta, "History/distance blend");
  evaluate_cmd->add_option("--out", eval_args.out, "Records CSV (stdout when omitted)");
  evaluate_cmd->add_option("--summary", eval_args.summary, "Summary JSON path");

  ReportArgs report_args;
  auto* report = app.add_subcommand("report", "Sweep a parameter and emit summaries");
  addEvalOptions(report, report_args.eval);
  report->add_option("--alpha", report_args.eval.alpha, "Fixed alpha during a beta sweep");
  report->add_option("--beta", report_args.eval.beta, "Fixed beta during an alpha sweep");
  report->add_option("--alpha-sweep", report_args.alpha_sweep, "Comma list of alpha values");
  report->add_option("--beta-sweep", report_args.beta_sweep, "Comma list of beta values");
  report->add_option("--out", report_args.out, "Output prefix");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return runGenerate(generate_args);
    if (build->parsed()) return runBuildMatrix(build_args);
    if (solve->parsed()) return runSolve(solve_args);
    if (evaluate_cmd->parsed()) return runEvaluate(eval_args);
    if (report->parsed()) return runReport(report_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
