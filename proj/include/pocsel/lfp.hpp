#pragma once

#include <cstddef>
#include <vector>

namespace pocsel::lfp {

enum class Status { Optimal, Infeasible, Unbounded };

/// maximize c.x  subject to  A x = b,  x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> a;  // one row per equality constraint
  std::vector<double> b;
  std::vector<double> c;

  void add_row(std::vector<double> row, double rhs);
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

/// Dense two-phase primal simplex with Bland's rule.
Solution solve(const LinearProgram& lp, double tol = 1e-11);

/// optimize (num.x) / (den.x)  subject to  A x = b,  x >= 0, assuming
/// den.x > 0 on the feasible set. Solved through the Charnes-Cooper change
/// of variables z = t x, t = 1 / den.x, which turns it into one LP in (z, t).
struct LinearFractionalProgram {
  std::size_t num_vars = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> numerator;
  std::vector<double> denominator;

  void add_row(std::vector<double> row, double rhs);
};

enum class Sense { Minimize, Maximize };

/// On success `x` holds the recovered point z / t in the original variables.
Solution solve(const LinearFractionalProgram& lfp, Sense sense, double tol = 1e-11);

}  // namespace pocsel::lfp
