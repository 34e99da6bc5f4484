#pragma once

// Dense two-phase simplex over exact rationals. Bland's rule guarantees
// termination; intended for problems with tens of variables.

#include <vector>

#include "massart/exactmath.hpp"

namespace massart::lp {

enum class Relation { less_equal, equal, greater_equal };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::equal;
  Rational rhs;
};

struct Problem {
  /// Objective coefficients; one per variable.
  std::vector<Rational> objective;
  bool maximize = false;
  /// Variables flagged free range over all rationals; the rest are >= 0.
  std::vector<bool> free;
  std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  Rational value;
  std::vector<Rational> x;
};

Solution solve(const Problem& problem);

}  // namespace massart::lp
