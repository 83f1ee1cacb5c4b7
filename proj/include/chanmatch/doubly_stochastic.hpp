#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace chanmatch {

/// Frank-Wolfe iterate of the relaxed matching problem: nonnegative entries,
/// unit row and column sums.
using DoublyStochastic = Eigen::MatrixXd;

template <typename Derived>
bool is_doubly_stochastic(const Eigen::MatrixBase<Derived>& d, typename Derived::RealScalar tol = 1e-9) {
  if (d.rows() != d.cols()) return false;
  if ((d.array() < -tol).any()) return false;
  return ((d.rowwise().sum().array() - 1).abs() <= tol).all() &&
         ((d.colwise().sum().array() - 1).abs() <= tol).all();
}

/// J / n, the centre of the Birkhoff polytope.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> barycenter(Eigen::Index n) {
  return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, Scalar(1) / Scalar(n));
}

/// Sinkhorn-Knopp balancing of a positive matrix by alternating row and column
/// normalization. Stops when every row and column sum is within tol of 1.
template <typename Derived>
typename Derived::PlainObject sinkhorn_balance(const Eigen::MatrixBase<Derived>& m,
                                               typename Derived::RealScalar tol = 1e-12, int max_iters = 10000) {
  typename Derived::PlainObject d = m;
  for (int it = 0; it < max_iters; ++it) {
    d.array().colwise() /= d.rowwise().sum().array();
    d.array().rowwise() /= d.colwise().sum().array();
    if (((d.rowwise().sum().array() - 1).abs() <= tol).all()) break;
  }
  return d;
}

}  // namespace chanmatch
