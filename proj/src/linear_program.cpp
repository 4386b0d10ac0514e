#include "hypmet/linear_program.hpp"

#include <limits>
#include <vector>

#include "hypmet/errors.hpp"

namespace hypmet {

namespace {

// Tableau rows 0..m-1 hold constraints, row m the reduced costs of a
// minimization; the last column is the right-hand side.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, double tol)
      : t_(std::move(t)), basis_(std::move(basis)), tol_(tol) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int j) {
    t_.row(r) /= t_(r, j);
    const Eigen::Index all = t_.rows();
    for (Eigen::Index i = 0; i < all; ++i) {
      if (i == r || t_(i, j) == 0) continue;
      t_.row(i) -= t_(i, j) * t_.row(r);
    }
    basis_[r] = j;
  }

  // Runs Bland-rule iterations over the columns flagged in `allowed`.
  // Returns false when the program is unbounded.
  bool optimize(const std::vector<bool>& allowed) {
    const int m = rows(), n = cols();
    const int max_iter = 50 * (m + n) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (allowed[j] && t_(m, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < t_.rows() - 1; ++i) {
        const double a = t_(i, enter);
        if (a <= tol_) continue;
        const double ratio = t_(i, n) / a;
        if (leave < 0 || ratio < best - tol_ || (ratio <= best + tol_ && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(static_cast<int>(leave), enter);
    }
    throw NumericalError("simplex: iteration limit reached");
  }

  void set_costs(const Eigen::VectorXd& cost) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cost.size()) = cost.transpose();
    const int m = rows();
    for (int i = 0; i < m; ++i) {
      const double cb = basis_[i] < cost.size() ? cost[basis_[i]] : 0.0;
      if (cb != 0) t_.row(rows()) -= cb * t_.row(i);
    }
  }

  void drop_row(int r) {
    const int n = static_cast<int>(t_.rows());
    t_.middleRows(r, n - r - 1) = t_.bottomRows(n - r - 1).eval();
    t_.conservativeResize(n - 1, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

}  // namespace

LpSolution solve_lp(const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& A_ub,
                    const Eigen::VectorXd& b_ub, const Eigen::VectorXd& c, double tol) {
  const int n = static_cast<int>(c.size());
  const int me = static_cast<int>(A_eq.rows()), mu = static_cast<int>(A_ub.rows());
  if ((me > 0 && A_eq.cols() != n) || (mu > 0 && A_ub.cols() != n) || b_eq.size() != me || b_ub.size() != mu)
    throw InputError("solve_lp: inconsistent dimensions");
  const int m = me + mu;
  // columns: x (n), slacks (mu), artificials (m), rhs
  const int art0 = n + mu;
  const int total = art0 + m;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, total + 1);
  if (me > 0) {
    t.block(0, 0, me, n) = A_eq;
    t.block(0, total, me, 1) = b_eq;
  }
  if (mu > 0) {
    t.block(me, 0, mu, n) = A_ub;
    t.block(me, n, mu, mu).setIdentity();
    t.block(me, total, mu, 1) = b_ub;
  }
  for (int i = 0; i < m; ++i) {
    if (t(i, total) < 0) t.row(i) *= -1;
    t(i, art0 + i) = 1;
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = art0 + i;
  Tableau tab(std::move(t), std::move(basis), tol);

  // Phase 1: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  tab.optimize(std::vector<bool>(total, true));
  const double scale = 1 + (m > 0 ? tab.data().col(total).head(tab.rows()).cwiseAbs().maxCoeff() : 0.0);
  LpSolution out;
  if (-tab.data()(tab.rows(), total) > 1e3 * tol * scale) {
    out.status = LpSolution::Infeasible;
    return out;
  }
  // Drive remaining artificials out of the basis; drop redundant rows.
  for (int i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis()[i] < art0) continue;
    int enter = -1;
    for (int j = 0; j < art0; ++j) {
      if (std::abs(tab.data()(i, j)) > tol) {
        enter = j;
        break;
      }
    }
    if (enter >= 0) tab.pivot(i, enter);
    else tab.drop_row(i);
  }

  // Phase 2 (minimize -c).
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(total);
  phase2.head(n) = -c;
  tab.set_costs(phase2);
  std::vector<bool> allowed(total, true);
  for (int j = art0; j < total; ++j) allowed[j] = false;
  if (!tab.optimize(allowed)) {
    out.status = LpSolution::Unbounded;
    return out;
  }
  out.status = LpSolution::Optimal;
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < n) out.x[tab.basis()[i]] = tab.data()(i, total);
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace hypmet
