#pragma once

#include <Eigen/Dense>

namespace cqavwc::lp {

/// minimize c.x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
/// Either constraint block may have zero rows.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Result {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense two-phase primal simplex with Bland's rule. Intended for the small
/// feasibility programs built by the symmetrizability check (tens of
/// variables, a few hundred rows); deterministic for identical input.
Result solve(const LinearProgram& program);

}  // namespace cqavwc::lp
