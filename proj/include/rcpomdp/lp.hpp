#pragma once

#include <stdexcept>
#include <vector>

namespace rcpomdp {

class LpInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LpUnbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sense { le, ge, eq };

struct LinearConstraint {
  std::vector<double> coeffs;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

/// maximize objective·x  s.t. constraints, x >= 0.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
};

struct LpSolution {
  double optimum = 0.0;
  std::vector<double> x;
  /// One shadow price per constraint: d(optimum)/d(rhs).
  std::vector<double> duals;
  int pivots = 0;
};

/// Dense two-phase tableau simplex with Bland's anti-cycling rule. Intended
/// for the small LPs in this project (a few hundred rows and columns).
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace rcpomdp
