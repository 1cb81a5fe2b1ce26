#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace maxstable {

// Dense scalar containers. Array semantics (coefficient-wise) everywhere;
// rows of Mat are observations.
using Vec = Eigen::ArrayXd;
using Mat = Eigen::ArrayXXd;

// Malformed model documents, bad family names, broken invariants at
// construction. CLI maps this to exit code 2.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric arguments outside an operation's domain. CLI maps this to exit
// code 3.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A value with an attached Monte Carlo standard error. Exact evaluations
// carry se = 0.
struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

// Argument of the stable tail dependence function: d >= 1 nonnegative
// coordinates.
class Point {
 public:
  explicit Point(Vec coords) : coords_(std::move(coords)) {
    if (coords_.size() < 1) throw DomainError("Point: dimension must be >= 1");
    for (Eigen::Index j = 0; j < coords_.size(); ++j) {
      if (!(coords_[j] >= 0.0))
        throw DomainError("Point: coordinate " + std::to_string(j) +
                          " is negative or NaN");
    }
  }

  int dimension() const { return static_cast<int>(coords_.size()); }
  const Vec& coords() const { return coords_; }
  double operator[](Eigen::Index j) const { return coords_[j]; }

 private:
  Vec coords_;
};

// A point on the unit simplex; coordinates must sum to one within 1e-12.
class SimplexWeight {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit SimplexWeight(Vec weights) : weights_(std::move(weights)) {
    if (weights_.size() < 1)
      throw DomainError("SimplexWeight: dimension must be >= 1");
    double sum = 0.0;
    for (Eigen::Index j = 0; j < weights_.size(); ++j) {
      if (!(weights_[j] >= 0.0 && weights_[j] <= 1.0))
        throw DomainError("SimplexWeight: coordinate " + std::to_string(j) +
                          " outside [0,1]");
      sum += weights_[j];
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw DomainError("SimplexWeight: coordinates sum to " +
                        std::to_string(sum) + ", expected 1");
  }

  int dimension() const { return static_cast<int>(weights_.size()); }
  const Vec& coords() const { return weights_; }
  double operator[](Eigen::Index j) const { return weights_[j]; }

 private:
  Vec weights_;
};

// Marginal standardization of a max-stable distribution function.
enum class MarginForm { Uniform01, UnitFrechet, Gumbel, ReverseExponential };

inline const char* margin_form_name(MarginForm m) {
  switch (m) {
    case MarginForm::Uniform01: return "uniform";
    case MarginForm::UnitFrechet: return "frechet";
    case MarginForm::Gumbel: return "gumbel";
    case MarginForm::ReverseExponential: return "revexp";
  }
  return "?";
}

}  // namespace maxstable
