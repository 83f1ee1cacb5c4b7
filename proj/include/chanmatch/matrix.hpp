#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

#include "chanmatch/graph.hpp"

namespace chanmatch {

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (auto [i, j] : g.edges()) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Scalar(1);
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = Scalar(1);
  }
  return m;
}

template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> to_sparse(const Graph& g) {
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(2 * g.edge_count());
  for (auto [i, j] : g.edges()) {
    entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), Scalar(1));
    entries.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i), Scalar(1));
  }
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::SparseMatrix<Scalar> m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

/// Permutation matrix with a single 1 per row at column sigma(i), so that
/// M * B * M^T is the adjacency of relabel(B, sigma).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> permutation_matrix(const Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Vertex i = 0; i < p.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p[i])) = Scalar(1);
  return m;
}

}  // namespace chanmatch
