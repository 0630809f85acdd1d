#pragma once

#include <string_view>

#include <Eigen/Dense>

namespace shortdot::linalg {

/// 1 / rcond of the LU factorization (L1 estimate); +inf when singular.
double condition_estimate(const Eigen::MatrixXd& matrix);

/// Solves matrix * x = rhs with partial pivoting. Throws NumericalError when
/// the estimated condition number exceeds `max_condition` or the solution is
/// not finite. `what` names the solve in the error message.
Eigen::VectorXd guarded_solve(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              double max_condition, std::string_view what);

/// Same, reusing a factorization across many right-hand sides.
class GuardedLu {
 public:
  GuardedLu(const Eigen::MatrixXd& matrix, double max_condition, std::string_view what);
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  [[nodiscard]] double condition() const { return condition_; }

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 0.0;
};

}  // namespace shortdot::linalg
