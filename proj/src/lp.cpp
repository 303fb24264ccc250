#include "rcpomdp/lp.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace rcpomdp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), a_(rows * cols, 0.0), rhs_(rows, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& rhs(std::size_t i) { return rhs_[i]; }
  double rhs(std::size_t i) const { return rhs_[i]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t c) {
    double p = at(r, c);
    for (std::size_t j = 0; j < n_; ++j) at(r, j) /= p;
    rhs_[r] /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
      rhs_[i] -= f * rhs_[r];
      if (std::abs(rhs_[i]) < 1e-14) rhs_[i] = 0.0;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> rhs_;
};

/// Maximizes cost·x over the current tableau with Bland's rule. Columns with
/// allowed[j] == false never enter.
void run_simplex(Tableau& t, std::vector<std::size_t>& basis, const std::vector<double>& cost,
                 const std::vector<char>& allowed, int& pivots) {
  const std::size_t max_pivots = 50000;
  while (true) {
    std::size_t enter = t.cols();
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (!allowed[j]) continue;
      double z = 0.0;
      for (std::size_t i = 0; i < t.rows(); ++i) z += cost[basis[i]] * t.at(i, j);
      if (cost[j] - z > kCostTol) {
        enter = j;
        break;
      }
    }
    if (enter == t.cols()) return;

    std::size_t leave = t.rows();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.rows(); ++i) {
      double a = t.at(i, enter);
      if (a <= kPivotTol) continue;
      double ratio = t.rhs(i) / a;
      if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave == t.rows()) throw LpUnbounded("objective is unbounded");
    t.pivot(leave, enter);
    basis[leave] = enter;
    if (++pivots > static_cast<int>(max_pivots)) throw std::runtime_error("simplex pivot limit reached");
  }
}

/// Solves M^T y = rhs by Gaussian elimination with partial pivoting.
std::vector<double> solve_transposed(std::vector<double> m, std::size_t n, std::vector<double> rhs) {
  // m is row-major n x n; build A = M^T.
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m[j * n + i];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-14) continue;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      std::swap(rhs[piv], rhs[col]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(a[i * n + i]) >= 1e-14) y[i] = rhs[i] / a[i * n + i];
  return y;
}

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.constraints.size();
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != n) throw std::invalid_argument("constraint width does not match objective");

  // Flip rows so every rhs is nonnegative.
  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(m);
  for (std::size_t i = 0; i < m; ++i) {
    sense[i] = lp.constraints[i].sense;
    if (lp.constraints[i].rhs < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::le) sense[i] = Sense::ge;
      else if (sense[i] == Sense::ge) sense[i] = Sense::le;
    }
  }

  // Column layout: [structural | slack/surplus per inequality | artificial].
  std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
  std::size_t next = n;
  for (std::size_t i = 0; i < m; ++i)
    if (sense[i] != Sense::eq) slack_col[i] = next++;
  const std::size_t first_art = next;
  for (std::size_t i = 0; i < m; ++i)
    if (sense[i] != Sense::le) art_col[i] = next++;
  const std::size_t total = next;

  Tableau t(m, total);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign[i] * lp.constraints[i].coeffs[j];
    t.rhs(i) = sign[i] * lp.constraints[i].rhs;
    if (sense[i] == Sense::le) {
      t.at(i, slack_col[i]) = 1.0;
      basis[i] = slack_col[i];
    } else {
      if (sense[i] == Sense::ge) t.at(i, slack_col[i]) = -1.0;
      t.at(i, art_col[i]) = 1.0;
      basis[i] = art_col[i];
    }
  }
  // The standard-form matrix before pivoting, for dual recovery.
  std::vector<double> original(m * total);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < total; ++j) original[i * total + j] = t.at(i, j);

  LpSolution sol;
  std::vector<char> allowed(total, 1);

  if (first_art < total) {
    std::vector<double> phase1(total, 0.0);
    for (std::size_t j = first_art; j < total; ++j) phase1[j] = -1.0;
    run_simplex(t, basis, phase1, allowed, sol.pivots);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] >= first_art) infeas += t.rhs(i);
    if (infeas > 1e-9) throw LpInfeasible("constraints admit no nonnegative solution");
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.pivot(i, j);
          basis[i] = j;
          ++sol.pivots;
          break;
        }
      }
    }
    for (std::size_t j = first_art; j < total; ++j) allowed[j] = 0;
  }

  std::vector<double> cost(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];
  run_simplex(t, basis, cost, allowed, sol.pivots);

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = t.rhs(i);
  sol.optimum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.optimum += lp.objective[j] * sol.x[j];

  if (m > 0) {
    std::vector<double> bmat(m * m), cb(m);
    for (std::size_t i = 0; i < m; ++i) cb[i] = cost[basis[i]];
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t i = 0; i < m; ++i) bmat[r * m + i] = original[r * total + basis[i]];
    // bmat holds B row-major; solve B^T y = c_B.
    auto y = solve_transposed(bmat, m, cb);
    sol.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) sol.duals[i] = sign[i] * y[i];
  }
  return sol;
}

}  // namespace rcpomdp
