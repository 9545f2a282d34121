#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "routelearn/evaluation.hpp"
#include "routelearn/learner.hpp"
#include "routelearn/model.hpp"

namespace routelearn {

/// A parsed plan log: the chronological stream plus the universe its indices
/// refer to. Non-fatal oddities (out-of-order dates, unknown fields) land in
/// `warnings`.
struct PlanData {
  InstanceStream stream;
  StopUniverse universe{"depot"};
  std::vector<std::string> warnings;
};

/// Plan logs are line-delimited JSON: a header object on the first line, then
/// one plan object per line ({"date", "weekday", "routes"}). See README for
/// the full schema.
PlanData loadPlans(const std::string& path);
PlanData parsePlans(std::istream& in, const std::string& origin);
void savePlans(const std::string& path, const InstanceStream& stream,
               const StopUniverse& universe);
void writePlans(std::ostream& out, const InstanceStream& stream, const StopUniverse& universe);

/// Square cost matrix with a stop-id header row and labeled rows.
CostMatrix loadCosts(const std::string& path);
CostMatrix parseCosts(std::istream& in, const std::string& origin);
void saveCosts(const std::string& path, const CostMatrix& costs);
void writeCosts(std::ostream& out, const CostMatrix& costs);

/// Transition matrices serialize as a header, a row of stop ids, and one row
/// of decimal values per stop at 17 significant digits (lossless round trip).
TransitionMatrix loadTransitionMatrix(const std::string& path);
TransitionMatrix parseTransitionMatrix(std::istream& in, const std::string& origin);
void saveTransitionMatrix(const std::string& path, const TransitionMatrix& matrix);
void writeTransitionMatrix(std::ostream& out, const TransitionMatrix& matrix);

DemandData loadDemands(const std::string& path);
void saveDemands(const std::string& path, const DemandData& demands);

/// Records CSV with header test_day,weekday,scheme,alpha,beta,rd,ad,status,
/// solve_time_s. Wall times are floored to whole seconds so that re-runs with
/// the same seed produce byte-identical files; exact timings live in the
/// summary JSON.
void writeRecordsCsv(std::ostream& out, const std::vector<EvaluationRecord>& records);
void saveRecordsCsv(const std::string& path, const std::vector<EvaluationRecord>& records);

void writeSummaryJson(std::ostream& out, const std::vector<SchemeSummary>& rows);
void saveSummaryJson(const std::string& path, const std::vector<SchemeSummary>& rows);

/// Shortest text form that still round-trips a double exactly (%.17g).
std::string formatDouble(double value);

}  // namespace routelearn
