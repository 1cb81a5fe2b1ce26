#include "maxstable/families.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace maxstable {

void MultivariateMOSpec::validate() const {
  if (dimension < 1) throw SpecError("mv_marshall_olkin: dimension must be >= 1");
  if (subset_probs.empty())
    throw SpecError("mv_marshall_olkin: subset map is empty");
  double total = 0.0;
  std::set<std::vector<int>> seen;
  for (const auto& [subset, p] : subset_probs) {
    if (subset.empty())
      throw SpecError("mv_marshall_olkin: empty subset not allowed");
    std::vector<int> sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SpecError("mv_marshall_olkin: duplicate index within a subset");
    if (sorted.front() < 0 || sorted.back() >= dimension)
      throw SpecError("mv_marshall_olkin: subset index out of range");
    if (!seen.insert(sorted).second)
      throw SpecError("mv_marshall_olkin: subset listed twice");
    if (!(p >= 0.0)) throw SpecError("mv_marshall_olkin: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw SpecError("mv_marshall_olkin: subset probabilities sum to " +
                    std::to_string(total) + ", expected 1");
  const Vec pj = coordinate_prob();
  for (int j = 0; j < dimension; ++j)
    if (!(pj[j] > 0.0))
      throw SpecError("mv_marshall_olkin: coordinate " + std::to_string(j) +
                      " has zero switch-on probability");
}

Vec MultivariateMOSpec::coordinate_prob() const {
  Vec pj = Vec::Zero(dimension);
  for (const auto& [subset, p] : subset_probs)
    for (int j : subset) pj[j] += p;
  return pj;
}

double mv_marshall_olkin_ell(const MultivariateMOSpec& spec, const Vec& x) {
  const Vec pj = spec.coordinate_prob();
  double total = 0.0;
  for (const auto& [subset, p] : spec.subset_probs) {
    double m = 0.0;
    for (int j : subset) m = std::max(m, x[j] / pj[j]);
    total += p * m;
  }
  return total;
}

namespace {

struct DimensionVisitor {
  int operator()(const LogisticSpec& s) const { return s.dimension; }
  int operator()(const MarshallOlkinSpec&) const { return 2; }
  int operator()(const MultivariateMOSpec& s) const { return s.dimension; }
  int operator()(const TawnMixtureSpec&) const { return 2; }
  int operator()(const RationalSpec&) const { return 2; }
  int operator()(const SchlatherSpec&) const { return 2; }
  int operator()(const HuslerReissSpec&) const { return 2; }
  int operator()(const Dirichlet11Spec&) const { return 2; }
  int operator()(const IndependenceSpec& s) const { return s.dimension; }
  int operator()(const PerfectDependenceSpec& s) const { return s.dimension; }
};

struct NameVisitor {
  std::string operator()(const LogisticSpec&) const { return "logistic"; }
  std::string operator()(const MarshallOlkinSpec&) const {
    return "marshall_olkin";
  }
  std::string operator()(const MultivariateMOSpec&) const {
    return "mv_marshall_olkin";
  }
  std::string operator()(const TawnMixtureSpec&) const { return "tawn"; }
  std::string operator()(const RationalSpec&) const { return "rational"; }
  std::string operator()(const SchlatherSpec&) const { return "schlather"; }
  std::string operator()(const HuslerReissSpec&) const {
    return "husler_reiss";
  }
  std::string operator()(const Dirichlet11Spec&) const { return "dirichlet11"; }
  std::string operator()(const IndependenceSpec&) const {
    return "independence";
  }
  std::string operator()(const PerfectDependenceSpec&) const {
    return "perfect_dependence";
  }
};

struct ValidateVisitor {
  void operator()(const LogisticSpec& s) const {
    if (!(s.theta >= 1.0)) throw SpecError("logistic: theta must be >= 1");
    if (s.dimension < 1) throw SpecError("logistic: dimension must be >= 1");
  }
  void operator()(const MarshallOlkinSpec& s) const {
    if (!(s.alpha > 0.0 && s.alpha <= 1.0) ||
        !(s.beta > 0.0 && s.beta <= 1.0))
      throw SpecError("marshall_olkin: alpha, beta must lie in (0,1]");
  }
  void operator()(const MultivariateMOSpec& s) const { s.validate(); }
  void operator()(const TawnMixtureSpec& s) const {
    if (!(s.theta >= 0.0 && s.theta <= 1.0))
      throw SpecError("tawn: theta must lie in [0,1]");
  }
  void operator()(const RationalSpec& s) const {
    if (!(s.alpha > 0.0 && s.alpha <= 1.0) ||
        !(s.beta > 0.0 && s.beta <= 1.0))
      throw SpecError("rational: alpha, beta must lie in (0,1]");
  }
  void operator()(const SchlatherSpec& s) const {
    if (!(s.rho > -1.0 && s.rho < 1.0))
      throw SpecError("schlather: rho must lie in (-1,1)");
  }
  void operator()(const HuslerReissSpec& s) const {
    if (!(s.a > 0.0)) throw SpecError("husler_reiss: a must be > 0");
  }
  void operator()(const Dirichlet11Spec&) const {}
  void operator()(const IndependenceSpec& s) const {
    if (s.dimension < 1)
      throw SpecError("independence: dimension must be >= 1");
  }
  void operator()(const PerfectDependenceSpec& s) const {
    if (s.dimension < 1)
      throw SpecError("perfect_dependence: dimension must be >= 1");
  }
};

struct EllVisitor {
  const Vec& x;

  double operator()(const LogisticSpec& s) const {
    return logistic_ell(s.theta, x);
  }
  double operator()(const MarshallOlkinSpec& s) const {
    return marshall_olkin_ell(s.alpha, s.beta, x[0], x[1]);
  }
  double operator()(const MultivariateMOSpec& s) const {
    return mv_marshall_olkin_ell(s, x);
  }
  double operator()(const TawnMixtureSpec& s) const {
    return tawn_mixture_ell(s.theta, x[0], x[1]);
  }
  double operator()(const RationalSpec& s) const {
    return rational_ell(s.alpha, s.beta, x[0], x[1]);
  }
  double operator()(const SchlatherSpec& s) const {
    return schlather_ell(s.rho, x[0], x[1]);
  }
  double operator()(const HuslerReissSpec& s) const {
    return husler_reiss_ell(s.a, x[0], x[1]);
  }
  double operator()(const Dirichlet11Spec&) const {
    return dirichlet11_ell(x[0], x[1]);
  }
  double operator()(const IndependenceSpec&) const { return x.sum(); }
  double operator()(const PerfectDependenceSpec&) const {
    return x.maxCoeff();
  }
};

}  // namespace

int family_dimension(const FamilySpec& spec) {
  return std::visit(DimensionVisitor{}, spec);
}

std::string family_name(const FamilySpec& spec) {
  return std::visit(NameVisitor{}, spec);
}

void validate_family(const FamilySpec& spec) {
  std::visit(ValidateVisitor{}, spec);
}

double family_ell(const FamilySpec& spec, const Vec& x) {
  if (x.size() != family_dimension(spec))
    throw DomainError("family_ell: point dimension " +
                      std::to_string(x.size()) + " does not match family");
  return std::visit(EllVisitor{x}, spec);
}

}  // namespace maxstable
