#include "chanmatch/lap.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "chanmatch/errors.hpp"

namespace chanmatch::detail {

Permutation lap_solve_min(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw InputError("lap_solve: cost matrix must be square");
  if (!cost.allFinite()) throw InputError("lap_solve: non-finite cost entry");
  const std::size_t n = static_cast<std::size_t>(cost.rows());
  if (n == 0) return Permutation::identity(0);

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based: index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    owner[0] = row;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Vertex> sigma(n);
  for (std::size_t j = 1; j <= n; ++j) sigma[owner[j] - 1] = j - 1;
  return Permutation(std::move(sigma));
}

}  // namespace chanmatch::detail
