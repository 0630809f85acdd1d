#include "shortdot/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "shortdot/errors.hpp"

namespace shortdot::linalg {

namespace {

double condition_of(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
  const double rcond = lu.rcond();
  if (!(rcond > 0.0) || !std::isfinite(rcond)) return std::numeric_limits<double>::infinity();
  return 1.0 / rcond;
}

[[noreturn]] void fail_condition(std::string_view what, double condition, double max_condition) {
  std::ostringstream msg;
  msg << what << ": estimated condition number " << condition << " exceeds " << max_condition;
  throw NumericalError(msg.str());
}

}  // namespace

double condition_estimate(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return 1.0;
  return condition_of(Eigen::PartialPivLU<Eigen::MatrixXd>(matrix));
}

GuardedLu::GuardedLu(const Eigen::MatrixXd& matrix, double max_condition, std::string_view what)
    : lu_(matrix) {
  condition_ = condition_of(lu_);
  if (condition_ > max_condition) fail_condition(what, condition_, max_condition);
}

Eigen::VectorXd GuardedLu::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x = lu_.solve(rhs);
  if (!x.allFinite()) throw NumericalError("non-finite solution");
  return x;
}

Eigen::VectorXd guarded_solve(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                              double max_condition, std::string_view what) {
  if (matrix.rows() == 0) return Eigen::VectorXd(0);
  return GuardedLu(matrix, max_condition, what).solve(rhs);
}

}  // namespace shortdot::linalg
