#pragma once

#include "maxstable/model.hpp"
#include "maxstable/types.hpp"

namespace maxstable {

// Limit dependence coefficients of the count of simultaneously extreme
// components. multi_failure[k-1] is the spectral integral of the k-th
// largest profile coordinate; its first entry is the extremal coefficient
// ell(1,...,1) and its last the all-components tail copula R(1,...,1).
struct CoefficientReport {
  int dimension = 0;
  double extremal_coefficient = 0.0;
  double all_fail = 0.0;
  Vec multi_failure;     // k = 1..d
  Vec multi_failure_se;  // zeros on exact paths
  Vec excess_mean;       // k = 1..d-1; 0 where multi_failure[k] vanishes
  bool monte_carlo = false;
};

// Exact for discrete spectral measures, Monte Carlo order statistics for
// generator-backed models, and an alternating subset sum of tail copulas for
// closed forms (capped at dimension 15).
CoefficientReport coefficient_report(const DependenceModel& model);

CoefficientReport coefficient_report(const Generator& gen,
                                     const McConfig& cfg);

}  // namespace maxstable
