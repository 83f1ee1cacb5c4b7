#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "chanmatch/graph.hpp"
#include "chanmatch/rng.hpp"

namespace chanmatch {

/// Symmetric hollow matrix of per-pair probabilities. A constant matrix is
/// stored as a single value so the uniform and correlated-ER cases stay O(1)
/// in memory.
class PairProbabilities {
 public:
  /// Constant value on every off-diagonal entry.
  PairProbabilities(std::size_t n, double value);
  /// Throws InputError unless square, symmetric, hollow, entries in [0,1].
  explicit PairProbabilities(Eigen::MatrixXd dense);

  std::size_t size() const noexcept { return n_; }
  bool is_constant() const noexcept { return constant_.has_value(); }

  double operator()(Vertex i, Vertex j) const noexcept {
    if (i == j) return 0.0;
    return constant_ ? *constant_ : dense_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  double max_entry() const noexcept;
  double min_entry() const noexcept;

 private:
  std::size_t n_;
  std::optional<double> constant_;
  Eigen::MatrixXd dense_;
};

/// Uniform corrupting channel C(A, p, P).
struct UniformChannelSpec {
  double p = 0.0;
  Permutation shuffle;
};

/// Heterogeneous channel C(A, psi1, psi2, P). psi1 flips non-edges into
/// edges, psi2 deletes edges.
struct HeterogeneousChannelSpec {
  PairProbabilities psi1;
  PairProbabilities psi2;
  Permutation shuffle;
};

/// B = P (X o (1 - A) + (1 - X) o A) P^T with one Bernoulli(p) draw per
/// unordered pair. With relabel() conventions, relabel(B, P) recovers the
/// noisy, unshuffled graph.
Graph corrupt_uniform(const Graph& a, const UniformChannelSpec& spec, Seed seed);

Graph corrupt_heterogeneous(const Graph& a, const HeterogeneousChannelSpec& spec, Seed seed);

/// Draws A ~ Bernoulli(lambda) and then B from the heterogeneous channel with
/// psi1 = (1 - R) o lambda, psi2 = (1 - R) o (1 - lambda). Marginally both
/// graphs are Bernoulli(lambda) and corr(A_ij, B_ij) = R_ij.
std::pair<Graph, Graph> correlated_bernoulli_pair(const PairProbabilities& lambda,
                                                  const PairProbabilities& correlation,
                                                  const Permutation& shuffle, Seed seed);

/// Log-likelihood of (p, P) under the uniform channel, summed over unordered
/// pairs: agreements contribute log(1-p), disagreements log(p).
double loglikelihood_uniform(const Graph& a, const Graph& b, double p, const Permutation& shuffle);

/// The trace expression
///   (1/2) tr(A P^T B P) (log(1-p) - log p) + n(n-1) log(p) / 2.
/// It counts only shared edges as agreements, so its value differs from
/// loglikelihood_uniform(); both are increasing affine functions of
/// tr(A P^T B P) when p < 1/2 and rank permutations identically.
double loglikelihood_uniform_trace_form(const Graph& a, const Graph& b, double p,
                                        const Permutation& shuffle);

/// Heterogeneous-channel log-likelihood over unordered pairs.
double loglikelihood_heterogeneous(const Graph& a, const Graph& b, const HeterogeneousChannelSpec& spec);

/// Profile log-likelihood of P with the nuisance matrices replaced by their
/// profile MLE (0 on agreeing pairs, 1/2 on disagreeing ones), summed over
/// both triangles. Equals -log(2) * ||A - P^T B P||_F^2.
double profile_loglikelihood(const Graph& a, const Graph& b, const Permutation& shuffle);

}  // namespace chanmatch
