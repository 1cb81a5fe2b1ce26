#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxstable/types.hpp"

namespace maxstable {

// Standard normal CDF through erfc; absolute error is that of the libm
// erfc, below 1e-15 over the whole real line.
inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

// Gumbel-Hougaard / logistic family, theta in [1, inf]. Evaluated in scaled
// form max(x) * (sum (x_j/max)^theta)^(1/theta) so large theta neither
// overflows nor underflows.
inline double logistic_ell(double theta, const Vec& x) {
  if (!(theta >= 1.0)) throw DomainError("logistic: theta must be >= 1");
  const double m = x.maxCoeff();
  if (m == 0.0) return 0.0;
  if (std::isinf(theta)) return m;
  if (theta == 1.0) return x.sum();
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j)
    s += std::pow(x[j] / m, theta);
  return m * std::exp(std::log(s) / theta);
}

inline double marshall_olkin_ell(double alpha, double beta, double x,
                                 double y) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw DomainError("marshall_olkin: alpha, beta must lie in (0,1]");
  return x + y - std::min(alpha * x, beta * y);
}

inline double schlather_ell(double rho, double x, double y) {
  if (!(rho > -1.0 && rho < 1.0))
    throw DomainError("schlather: rho must lie in (-1,1)");
  const double s = x + y;
  if (s == 0.0) return 0.0;
  double arg = 1.0 - 2.0 * (rho + 1.0) * (x / s) * (y / s);
  if (arg < 0.0) arg = 0.0;  // rounding at rho -> 1, x = y
  return 0.5 * s * (1.0 + std::sqrt(arg));
}

inline double husler_reiss_ell(double a, double x, double y) {
  if (!(a > 0.0)) throw DomainError("husler_reiss: a must be > 0");
  if (x == 0.0 && y == 0.0) return 0.0;
  if (y == 0.0) return x;
  if (x == 0.0) return y;
  const double half = 0.5 * a;
  const double lr = std::log(x / y) / a;
  return x * norm_cdf(half + lr) + y * norm_cdf(half - lr);
}

// Pickands function of the Tawn mixture model, theta in [0,1]. theta = 0 is
// independence, theta = 1 the bivariate Dirichlet(1,1) model.
inline double tawn_mixture_D(double theta, double t) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("tawn: theta must lie in [0,1]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("tawn: t must lie in [0,1]");
  return 1.0 - theta * t * (1.0 - t);
}

// Pickands function of the rational model, alpha, beta in (0,1].
inline double rational_D(double alpha, double beta, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw DomainError("rational: alpha, beta must lie in (0,1]");
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError("rational: t must lie in [0,1]");
  return 1.0 - alpha * beta * t * (1.0 - t) / (alpha * (1.0 - t) + beta * t);
}

inline double dirichlet11_ell(double x, double y) {
  const double s = x + y;
  if (s == 0.0) return 0.0;
  return s - x * y / s;
}

inline double tawn_mixture_ell(double theta, double x, double y) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("tawn: theta must lie in [0,1]");
  const double s = x + y;
  if (s == 0.0) return 0.0;
  return s - theta * x * y / s;
}

inline double rational_ell(double alpha, double beta, double x, double y) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0))
    throw DomainError("rational: alpha, beta must lie in (0,1]");
  const double denom = alpha * x + beta * y;
  if (denom == 0.0) return x + y;
  return x + y - alpha * beta * x * y / denom;
}

// Probability distribution over non-empty subsets of {0,...,d-1} driving the
// multivariate Marshall-Olkin model. Coordinate probabilities p_j are the
// marginal switch-on rates and must all be positive.
struct MultivariateMOSpec {
  int dimension = 0;
  std::vector<std::pair<std::vector<int>, double>> subset_probs;

  void validate() const;
  Vec coordinate_prob() const;
};

double mv_marshall_olkin_ell(const MultivariateMOSpec& spec, const Vec& x);

// Parametric family identifiers. Dimension is free for the logistic,
// independence, perfect-dependence and multivariate Marshall-Olkin families
// and fixed to 2 elsewhere.
struct LogisticSpec {
  double theta = 1.0;
  int dimension = 2;
};
struct MarshallOlkinSpec {
  double alpha = 1.0, beta = 1.0;
};
struct TawnMixtureSpec {
  double theta = 0.0;
};
struct RationalSpec {
  double alpha = 1.0, beta = 1.0;
};
struct SchlatherSpec {
  double rho = 0.0;
};
struct HuslerReissSpec {
  double a = 1.0;
};
struct Dirichlet11Spec {};
struct IndependenceSpec {
  int dimension = 2;
};
struct PerfectDependenceSpec {
  int dimension = 2;
};

using FamilySpec =
    std::variant<LogisticSpec, MarshallOlkinSpec, MultivariateMOSpec,
                 TawnMixtureSpec, RationalSpec, SchlatherSpec, HuslerReissSpec,
                 Dirichlet11Spec, IndependenceSpec, PerfectDependenceSpec>;

int family_dimension(const FamilySpec& spec);
std::string family_name(const FamilySpec& spec);
void validate_family(const FamilySpec& spec);
double family_ell(const FamilySpec& spec, const Vec& x);

}  // namespace maxstable
