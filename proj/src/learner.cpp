#include "routelearn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace routelearn {

double jaccard(std::span<const StopIndex> a, std::span<const StopIndex> b) {
  if (a.empty() && b.empty()) {
    throw std::invalid_argument("jaccard: undefined for two empty sets");
  }
  std::size_t ia = 0, ib = 0, inter = 0, uni = 0;
  while (ia < a.size() && ib < b.size()) {
    ++uni;
    if (a[ia] == b[ib]) {
      ++inter;
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
    } else {
      ++ib;
    }
  }
  uni += (a.size() - ia) + (b.size() - ib);
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double instanceWeight(const WeighingScheme& scheme, int k, int n,
                      std::span<const StopIndex> instance_stop_set) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("instanceWeight: k=" + std::to_string(k) +
                                " outside [1, n=" + std::to_string(n) + "]");
  }
  switch (scheme.kind) {
    case WeighKind::Unif:
      return 1.0;
    case WeighKind::Time:
      return static_cast<double>(k) / static_cast<double>(n);
    case WeighKind::Time2: {
      double w = static_cast<double>(k) / static_cast<double>(n);
      return w * w;
    }
    case WeighKind::Simi:
    case WeighKind::Simi2: {
      if (scheme.reference_stop_set.empty()) {
        throw std::invalid_argument("instanceWeight: similarity weighing needs a non-empty reference stop set");
      }
      double j = jaccard(instance_stop_set, scheme.reference_stop_set);
      return scheme.kind == WeighKind::Simi ? j : j * j;
    }
  }
  throw std::logic_error("instanceWeight: unknown scheme kind");
}

FrequencyMatrix buildFrequency(std::span<const RoutingPlan> stream, const WeighingScheme& scheme,
                               const StopUniverse& universe) {
  const Eigen::Index d = universe.size();
  FrequencyMatrix out{Eigen::MatrixXd::Zero(d, d), universe};
  const int n = static_cast<int>(stream.size());
  for (int k = 1; k <= n; ++k) {
    const RoutingPlan& plan = stream[static_cast<std::size_t>(k - 1)];
    for (StopIndex s : plan.stopSet()) {
      if (s >= d) {
        throw std::invalid_argument("buildFrequency: stop index " + std::to_string(s) +
                                    " of instance " + std::to_string(k) +
                                    " is not registered in the universe");
      }
    }
    double w = instanceWeight(scheme, k, n, plan.stopSet());
    for (const Arc& arc : arcsOf(plan)) {
      out.f(arc.first, arc.second) += w;
    }
  }
  return out;
}

FrequencyMatrix buildFrequency(const InstanceStream& stream, const WeighingScheme& scheme,
                               const StopUniverse& universe) {
  return buildFrequency(std::span<const RoutingPlan>(stream.instances()), scheme, universe);
}

TransitionMatrix smoothNormalize(const FrequencyMatrix& freq, double alpha,
                                 SmoothingDenominator denom) {
  if (alpha < 0.0) {
    throw std::invalid_argument("smoothNormalize: alpha must be >= 0");
  }
  const Eigen::Index d = freq.f.rows();
  TransitionMatrix out{Eigen::MatrixXd::Zero(d, d), freq.universe, alpha};
  for (Eigen::Index i = 0; i < d; ++i) {
    const double row_sum = freq.f.row(i).sum();
    if (alpha == 0.0) {
      if (row_sum > 0.0) {
        out.t.row(i) = freq.f.row(i) / row_sum;
      } else if (d > 1) {
        // No observations and no smoothing: uniform over the d-1 candidates.
        out.t.row(i).setConstant(1.0 / static_cast<double>(d - 1));
        out.t(i, i) = 0.0;
      }
      continue;
    }
    if (denom == SmoothingDenominator::CountAll) {
      out.t.row(i) = (freq.f.row(i).array() + alpha) / (row_sum + alpha * static_cast<double>(d));
    } else {
      out.t.row(i) =
          (freq.f.row(i).array() + alpha) / (row_sum + alpha * static_cast<double>(d - 1));
      out.t(i, i) = 0.0;
    }
  }
  return out;
}

DistanceProbabilityMatrix distanceProbabilities(const CostMatrix& costs) {
  const Eigen::Index d = costs.c.rows();
  if (d < 2) {
    throw std::invalid_argument("distanceProbabilities: need at least one customer");
  }
  DistanceProbabilityMatrix out{Eigen::MatrixXd::Zero(d, d), costs.universe, costs};
  Eigen::VectorXd inv_relative(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    double cost_sum = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == i) continue;
      const double c = costs.c(i, j);
      if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("distanceProbabilities: cost (" + costs.universe.idOf(i) +
                                    " -> " + costs.universe.idOf(j) +
                                    ") must be positive and finite");
      }
      cost_sum += c;
    }
    inv_relative.setZero();
    double norm = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == i) continue;
      inv_relative(j) = cost_sum / costs.c(i, j);
      norm += inv_relative(j);
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j == i) continue;
      out.d(i, j) = inv_relative(j) / norm;
    }
  }
  return out;
}

TransitionMatrix blend(const TransitionMatrix& t, const DistanceProbabilityMatrix& d, double beta) {
  if (beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("blend: beta must lie in [0, 1]");
  }
  if (t.t.rows() != d.d.rows() || t.t.cols() != d.d.cols() || !(t.universe == d.universe)) {
    throw std::invalid_argument("blend: matrices are over different universes");
  }
  TransitionMatrix out{beta * t.t + (1.0 - beta) * d.d, t.universe, t.alpha};
  return out;
}

CostMatrix toCostMatrix(const TransitionMatrix& t) {
  const Eigen::Index d = t.t.rows();
  CostMatrix out{Eigen::MatrixXd(d, d), t.universe};
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i == j || t.t(i, j) <= 0.0) {
        out.c(i, j) = kForbiddenCost;
      } else {
        out.c(i, j) = -std::log(t.t(i, j)) + 0.0;  // +0.0 folds -log(1) into +0
      }
    }
  }
  return out;
}

}  // namespace routelearn
