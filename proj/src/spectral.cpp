#include "maxstable/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxstable {

SpectralAtoms::SpectralAtoms(int dimension, std::vector<Atom> atoms)
    : dimension_(dimension), atoms_(std::move(atoms)) {
  if (dimension_ < 1) throw SpecError("SpectralAtoms: dimension must be >= 1");
  if (atoms_.empty()) throw SpecError("SpectralAtoms: empty atom list");
  for (const auto& a : atoms_) {
    if (a.weight.size() != dimension_)
      throw SpecError("SpectralAtoms: atom dimension mismatch");
    if (!(a.mass > 0.0)) throw SpecError("SpectralAtoms: atom mass must be > 0");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.weight.size(); ++j) {
      if (!(a.weight[j] >= 0.0 && a.weight[j] <= 1.0))
        throw SpecError("SpectralAtoms: atom weight outside [0,1]");
      sum += a.weight[j];
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw SpecError("SpectralAtoms: atom off the simplex, weight sum " +
                      std::to_string(sum));
  }
  double total = 0.0;
  Vec first_moment = Vec::Zero(dimension_);
  for (const auto& a : atoms_) {
    total += a.mass;
    first_moment += a.mass * a.weight;
  }
  const double d = static_cast<double>(dimension_);
  if (std::abs(total - d) > kConstraintTolerance * d)
    throw SpecError("SpectralAtoms: total mass " + std::to_string(total) +
                    ", expected " + std::to_string(dimension_));
  for (int j = 0; j < dimension_; ++j)
    if (std::abs(first_moment[j] - 1.0) > kConstraintTolerance)
      throw SpecError("SpectralAtoms: first moment of coordinate " +
                      std::to_string(j) + " is " +
                      std::to_string(first_moment[j]) + ", expected 1");
}

double SpectralAtoms::ell(const Vec& x) const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      m = std::max(m, a.weight[j] * x[j]);
    total += a.mass * m;
  }
  return total;
}

double SpectralAtoms::tail(const Vec& x) const {
  double total = 0.0;
  for (const auto& a : atoms_) {
    double m = a.weight[0] * x[0];
    for (Eigen::Index j = 1; j < x.size(); ++j)
      m = std::min(m, a.weight[j] * x[j]);
    total += a.mass * m;
  }
  return total;
}

SpectralAtoms SpectralAtoms::restrict_to(const std::vector<int>& subset) const {
  if (subset.empty()) throw DomainError("restrict_to: empty subset");
  for (int j : subset)
    if (j < 0 || j >= dimension_)
      throw DomainError("restrict_to: index out of range");
  std::vector<Atom> restricted;
  restricted.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    Vec w(subset.size());
    double r = 0.0;
    for (std::size_t i = 0; i < subset.size(); ++i) r += a.weight[subset[i]];
    if (r <= 0.0) continue;  // no mass on the retained coordinates
    for (std::size_t i = 0; i < subset.size(); ++i)
      w[static_cast<Eigen::Index>(i)] = a.weight[subset[i]] / r;
    restricted.push_back({std::move(w), a.mass * r});
  }
  return SpectralAtoms(static_cast<int>(subset.size()),
                       merge_equal_profiles(std::move(restricted)));
}

std::vector<SpectralAtoms::Atom> merge_equal_profiles(
    std::vector<SpectralAtoms::Atom> atoms, double tol) {
  std::vector<SpectralAtoms::Atom> merged;
  for (auto& a : atoms) {
    bool found = false;
    for (auto& m : merged) {
      if ((m.weight - a.weight).abs().maxCoeff() <= tol) {
        m.mass += a.mass;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(a));
  }
  return merged;
}

}  // namespace maxstable
