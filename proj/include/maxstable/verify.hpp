#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxstable/model.hpp"

namespace maxstable {

// One invariant check over a batch of instances. `slack` is the worst margin
// left before violation: nonnegative passes, and the magnitude tells how
// close the run came.
struct CheckResult {
  std::string name;
  bool pass = false;
  double slack = 0.0;
  std::string note;
};

struct VerifyOptions {
  int points = 100;
  std::uint64_t seed = 0xACCE55ED;
};

// Runs the structural invariant battery against one model: unit margins,
// ell(0) = 0, elementary bounds, homogeneity (bit-exact at dyadic scales),
// convexity, subadditivity, positive quadrant dependence, max-stability,
// d = 2 tail-copula consistency, spectral constraints, the coefficient sum
// identity, and generator-specific checks (profile constraint, face masses,
// exact spectral extraction, closed-form oracle agreement where the kind has
// a canonical partner).
std::vector<CheckResult> verify_model(const DependenceModel& model,
                                      const VerifyOptions& options = {});

bool all_pass(const std::vector<CheckResult>& checks);

// One fixed-format line per check; output is byte-identical across reruns
// with the same inputs.
void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace maxstable
