#pragma once

#include <Eigen/Core>

namespace hypmet {

struct LpSolution {
  enum Status { Optimal, Infeasible, Unbounded };
  Status status = Infeasible;
  Eigen::VectorXd x;
  double objective = 0;
};

/// Dense two-phase simplex with Bland's rule for
///   maximize cᵀx  subject to  A_eq x = b_eq,  A_ub x ≤ b_ub,  x ≥ 0.
/// Either constraint block may have zero rows.
LpSolution solve_lp(const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq, const Eigen::MatrixXd& A_ub,
                    const Eigen::VectorXd& b_ub, const Eigen::VectorXd& c, double tol = 1e-10);

}  // namespace hypmet
