#pragma once

#include <vector>

#include "maxstable/types.hpp"

namespace maxstable {

// Discrete spectral measure on the unit simplex: atoms (w_k, m_k) with total
// mass d and unit coordinate first moments. Construction rejects atom sets
// violating either constraint.
class SpectralAtoms {
 public:
  struct Atom {
    Vec weight;   // point on the simplex
    double mass;  // > 0
  };

  // Relative tolerance for the total-mass and first-moment constraints.
  static constexpr double kConstraintTolerance = 1e-9;

  SpectralAtoms(int dimension, std::vector<Atom> atoms);

  int dimension() const { return dimension_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // sum_k m_k max_j(w_kj x_j); exact up to floating point.
  double ell(const Vec& x) const;

  // Exact tail copula: sum_k m_k min_j(w_kj x_j).
  double tail(const Vec& x) const;

  // Restriction to coordinates `subset`: drop the other coordinates,
  // renormalize surviving profiles, merge equal ones. The result is a valid
  // spectral measure in dimension |subset| with total mass |subset|.
  SpectralAtoms restrict_to(const std::vector<int>& subset) const;

 private:
  int dimension_;
  std::vector<Atom> atoms_;
};

// Merges atoms whose profiles agree coordinatewise within `tol`, summing
// masses. Atom order follows first appearance.
std::vector<SpectralAtoms::Atom> merge_equal_profiles(
    std::vector<SpectralAtoms::Atom> atoms, double tol = 1e-12);

}  // namespace maxstable
