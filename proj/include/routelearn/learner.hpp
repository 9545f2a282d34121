#pragma once

#include <Eigen/Core>

#include <limits>
#include <span>
#include <vector>

#include "routelearn/model.hpp"

namespace routelearn {

/// Cost of an arc that must never be traveled (zero learned probability, or
/// a self-arc). Solvers skip these during search.
inline constexpr double kForbiddenCost = std::numeric_limits<double>::infinity();

inline bool isForbidden(double cost) { return !(cost < kForbiddenCost); }

/// Nonnegative arc costs over a universe: true distances, or -log transition
/// probabilities. Entries may be kForbiddenCost.
struct CostMatrix {
  Eigen::MatrixXd c;
  StopUniverse universe;
};

/// Weighted arc transition counts accumulated from a stream of plans.
struct FrequencyMatrix {
  Eigen::MatrixXd f;
  StopUniverse universe;
};

/// Row-stochastic matrix of P(next stop = j | current stop = i).
struct TransitionMatrix {
  Eigen::MatrixXd t;
  StopUniverse universe;
  double alpha = 0.0;
};

/// Row-stochastic probabilities derived from a cost matrix: likelihood of the
/// next stop inversely proportional to its cost. Diagonal is zero.
struct DistanceProbabilityMatrix {
  Eigen::MatrixXd d;
  StopUniverse universe;
  CostMatrix source_costs;
};

enum class WeighKind { Unif, Time, Time2, Simi, Simi2 };

/// Per-instance weighing of the training stream. Simi kinds compare each
/// instance's stop set against reference_stop_set (the stop set of the
/// instance being predicted).
struct WeighingScheme {
  WeighKind kind = WeighKind::Unif;
  std::vector<StopIndex> reference_stop_set;  // sorted; used by Simi/Simi2 only

  static WeighingScheme unif() { return {WeighKind::Unif, {}}; }
  static WeighingScheme time() { return {WeighKind::Time, {}}; }
  static WeighingScheme time2() { return {WeighKind::Time2, {}}; }
  static WeighingScheme simi(std::vector<StopIndex> reference) {
    return {WeighKind::Simi, std::move(reference)};
  }
  static WeighingScheme simi2(std::vector<StopIndex> reference) {
    return {WeighKind::Simi2, std::move(reference)};
  }
};

/// Which row length `d` the Laplace denominator uses. CountAll is the row
/// length including the diagonal (d = t+1); ExcludeDiagonal smooths only the
/// off-diagonal entries with d = t and keeps the diagonal at zero.
enum class SmoothingDenominator { CountAll, ExcludeDiagonal };

/// |a ∩ b| / |a ∪ b| for sorted unique index sets. Throws
/// std::invalid_argument when both sets are empty.
double jaccard(std::span<const StopIndex> a, std::span<const StopIndex> b);

/// Weight of the k-th instance (1-based) in a stream of length n.
/// Unif -> 1, Time -> k/n, Time2 -> (k/n)^2, Simi -> J(instance, reference),
/// Simi2 -> J^2.
double instanceWeight(const WeighingScheme& scheme, int k, int n,
                      std::span<const StopIndex> instance_stop_set);

/// F = sum_k w_k * A^k over the weighted 0/1 arc adjacency matrices of the
/// stream. Every stop must be registered in `universe`.
FrequencyMatrix buildFrequency(std::span<const RoutingPlan> stream, const WeighingScheme& scheme,
                               const StopUniverse& universe);
FrequencyMatrix buildFrequency(const InstanceStream& stream, const WeighingScheme& scheme,
                               const StopUniverse& universe);

/// Laplace smoothing and row normalization: t_ij = (f_ij + alpha) / (N_i + alpha*d).
/// With alpha = 0, rows with no observations become uniform over the
/// off-diagonal entries.
TransitionMatrix smoothNormalize(const FrequencyMatrix& freq, double alpha,
                                 SmoothingDenominator denom = SmoothingDenominator::CountAll);

/// Row-stochastic probabilities inversely proportional to cost, relative to
/// all candidate next stops. All off-diagonal costs must be positive and finite.
DistanceProbabilityMatrix distanceProbabilities(const CostMatrix& costs);

/// Convex combination t' = beta*t + (1-beta)*d over matching universes.
TransitionMatrix blend(const TransitionMatrix& t, const DistanceProbabilityMatrix& d, double beta);

/// c_ij = -log(t_ij); zero probabilities and the diagonal map to kForbiddenCost.
CostMatrix toCostMatrix(const TransitionMatrix& t);

}  // namespace routelearn
