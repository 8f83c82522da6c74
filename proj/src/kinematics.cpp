// SPDX-License-Identifier: MIT
#include "kls/kinematics.hpp"

namespace kls {

SplitState split_quantities(const Mat2& a_co, const Mat2& A_co, const Mat2& ahat_con) {
  SplitState s;
  const double det_hat = ahat_con.determinant();
  if (!(det_hat > 0.0) || !(ahat_con(0, 0) > 0.0))
    throw Error(ErrorKind::DegenerateIntermediateMetric, "intermediate metric is not positive definite");
  const double det_a = a_co.determinant();
  const double det_A = A_co.determinant();
  s.ahat_con = ahat_con;
  s.ahat_co = inverse2<double>(ahat_con, det_hat);
  s.J = std::sqrt(det_a / det_A);
  s.J_el = std::sqrt(det_a * det_hat);
  s.J_in = 1.0 / std::sqrt(det_hat * det_A);
  s.I1 = inverse2<double>(A_co, det_A).cwiseProduct(a_co).sum();
  s.I1_el = ahat_con.cwiseProduct(a_co).sum();
  s.eps = 0.5 * (a_co - A_co);
  s.eps_el = 0.5 * (a_co - s.ahat_co);
  s.eps_in = 0.5 * (s.ahat_co - A_co);
  s.bhat_co.setZero();
  s.kappa.setZero();
  s.kappa_el.setZero();
  s.kappa_in.setZero();
  return s;
}

SplitState split_quantities(const Mat2& a_co, const Mat2& A_co, const Mat2& ahat_con, const Mat2& b_co,
                            const Mat2& B_co, const Mat2& bhat_co) {
  SplitState s = split_quantities(a_co, A_co, ahat_con);
  s.bhat_co = bhat_co;
  s.kappa = b_co - B_co;
  s.kappa_el = b_co - bhat_co;
  s.kappa_in = bhat_co - B_co;
  return s;
}

}  // namespace kls
