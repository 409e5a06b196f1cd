#include "pocsel/lfp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pocsel::lfp {

namespace {

class Tableau {
public:
  // Rows are copied with their sign flipped where needed so that every
  // right-hand side is nonnegative; one artificial column per row.
  Tableau(const LinearProgram& lp) : rows_(lp.a.size()), vars_(lp.num_vars) {
    cols_ = vars_ + rows_;
    t_.assign(rows_, std::vector<double>(cols_ + 1, 0.0));
    basis_.resize(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < vars_; ++j) t_[i][j] = sign * lp.a[i][j];
      t_[i][vars_ + i] = 1.0;
      t_[i][cols_] = sign * lp.b[i];
      basis_[i] = vars_ + i;
    }
    active_.assign(cols_, true);
  }

  void set_objective(const std::vector<double>& c) {
    obj_.assign(cols_ + 1, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = -c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] += cb * t_[i][j];
    }
  }

  Status maximize(double tol) {
    const std::size_t max_iter = 50 * (rows_ + cols_) + 1000;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (active_[j] && obj_[j] < -tol) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Status::Optimal;

      std::size_t leave = rows_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double coef = t_[i][enter];
        if (coef <= tol) continue;
        const double ratio = t_[i][cols_] / coef;
        if (ratio < best - tol || (ratio <= best + tol && leave < rows_ && basis_[i] < basis_[leave])) {
          if (ratio < best) best = ratio;
          leave = i;
        }
      }
      if (leave == rows_) return Status::Unbounded;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex: iteration limit reached");
  }

  // After phase one: pivot artificials out of the basis, dropping rows that
  // turn out to be linearly dependent, then retire the artificial columns.
  void retire_artificials(double tol) {
    for (std::size_t i = 0; i < rows_;) {
      if (basis_[i] < vars_) {
        ++i;
        continue;
      }
      std::size_t col = vars_;
      for (std::size_t j = 0; j < vars_; ++j) {
        if (std::abs(t_[i][j]) > tol) {
          col = j;
          break;
        }
      }
      if (col < vars_) {
        pivot(i, col);
        ++i;
      } else {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --rows_;
      }
    }
    for (std::size_t j = vars_; j < cols_; ++j) active_[j] = false;
  }

  double value() const { return obj_[cols_]; }

  std::vector<double> point() const {
    std::vector<double> x(vars_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (basis_[i] < vars_) x[basis_[i]] = t_[i][cols_];
    }
    return x;
  }

  std::size_t columns() const { return cols_; }
  std::size_t vars() const { return vars_; }

private:
  void pivot(std::size_t r, std::size_t col) {
    const double p = t_[r][col];
    for (double& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= f * t_[r][j];
      t_[i][col] = 0.0;
    }
    const double f = obj_[col];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= f * t_[r][j];
      obj_[col] = 0.0;
    }
    basis_[r] = col;
  }

  std::size_t rows_;
  std::size_t vars_;
  std::size_t cols_ = 0;
  std::vector<std::vector<double>> t_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
};

void check_row(std::size_t num_vars, const std::vector<double>& row) {
  if (row.size() != num_vars) throw std::invalid_argument("constraint row has wrong length");
}

}  // namespace

void LinearProgram::add_row(std::vector<double> row, double rhs) {
  check_row(num_vars, row);
  a.push_back(std::move(row));
  b.push_back(rhs);
}

void LinearFractionalProgram::add_row(std::vector<double> row, double rhs) {
  check_row(num_vars, row);
  a.push_back(std::move(row));
  b.push_back(rhs);
}

Solution solve(const LinearProgram& lp, double tol) {
  if (lp.c.size() != lp.num_vars) throw std::invalid_argument("objective has wrong length");
  Tableau tab(lp);

  std::vector<double> phase1(tab.columns(), 0.0);
  for (std::size_t j = tab.vars(); j < tab.columns(); ++j) phase1[j] = -1.0;
  tab.set_objective(phase1);
  tab.maximize(tol);
  Solution out;
  if (tab.value() < -1e-9) {
    out.status = Status::Infeasible;
    return out;
  }
  tab.retire_artificials(1e-9);

  std::vector<double> c(tab.columns(), 0.0);
  std::copy(lp.c.begin(), lp.c.end(), c.begin());
  tab.set_objective(c);
  out.status = tab.maximize(tol);
  if (out.status == Status::Optimal) {
    out.objective = tab.value();
    out.x = tab.point();
  }
  return out;
}

Solution solve(const LinearFractionalProgram& lfp, Sense sense, double tol) {
  if (lfp.numerator.size() != lfp.num_vars || lfp.denominator.size() != lfp.num_vars) {
    throw std::invalid_argument("objective has wrong length");
  }
  const std::size_t n = lfp.num_vars;
  LinearProgram lp;
  lp.num_vars = n + 1;  // z and t
  for (std::size_t i = 0; i < lfp.a.size(); ++i) {
    std::vector<double> row(lfp.a[i]);
    row.push_back(-lfp.b[i]);
    lp.add_row(std::move(row), 0.0);
  }
  std::vector<double> den(lfp.denominator);
  den.push_back(0.0);
  lp.add_row(std::move(den), 1.0);

  const double sign = sense == Sense::Maximize ? 1.0 : -1.0;
  lp.c.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) lp.c[j] = sign * lfp.numerator[j];

  Solution sol = solve(lp, tol);
  if (sol.status != Status::Optimal) return sol;
  const double t = sol.x[n];
  if (!(t > 0.0)) {
    // Optimum at a recession direction of the original problem.
    sol.status = Status::Unbounded;
    return sol;
  }
  Solution out;
  out.status = Status::Optimal;
  out.objective = sign * sol.objective;
  out.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.x[j] = sol.x[j] / t;
  return out;
}

}  // namespace pocsel::lfp
