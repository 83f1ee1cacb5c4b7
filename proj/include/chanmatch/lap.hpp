#pragma once

#include <Eigen/Dense>

#include "chanmatch/graph.hpp"

namespace chanmatch {

enum class Sense { Minimize, Maximize };

namespace detail {
Permutation lap_solve_min(const Eigen::MatrixXd& cost);
}

/// Exact linear assignment by shortest augmenting paths with dual potentials,
/// O(n^3). Returns sigma with row i assigned to column sigma(i). Rows are
/// inserted in index order and ties resolve to the lowest column index.
/// Throws InputError for non-square or non-finite input.
template <typename Derived>
Permutation lap_solve(const Eigen::MatrixBase<Derived>& cost, Sense sense = Sense::Minimize) {
  Eigen::MatrixXd c = cost.template cast<double>();
  if (sense == Sense::Maximize) c = -c;
  return detail::lap_solve_min(c);
}

/// Sum of cost(i, sigma(i)).
template <typename Derived>
typename Derived::Scalar assignment_value(const Eigen::MatrixBase<Derived>& cost, const Permutation& sigma) {
  typename Derived::Scalar total(0);
  for (Vertex i = 0; i < sigma.size(); ++i)
    total += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(sigma[i]));
  return total;
}

}  // namespace chanmatch
