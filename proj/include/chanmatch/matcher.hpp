#pragma once

#include <optional>
#include <vector>

#include "chanmatch/doubly_stochastic.hpp"
#include "chanmatch/graph.hpp"
#include "chanmatch/rng.hpp"

namespace chanmatch {

enum class FaqInit { Identity, Barycenter, Given, RandomDoublyStochastic };

/// Whether to match A against the complement of B. The complement is the
/// maximum-likelihood target when the channel noise exceeds 1/2.
enum class ComplementMode { Auto, Never, Always };

struct FaqOptions {
  FaqInit init = FaqInit::Barycenter;
  /// Starting permutation for FaqInit::Given.
  std::optional<Permutation> given;
  std::size_t max_iters = 30;
  /// Stop when the relaxed objective changes by less than tol (relative).
  double tol = 1e-6;
  /// Extra runs from random doubly stochastic starts; the best is kept.
  std::size_t restarts = 0;
  ComplementMode complement_mode = ComplementMode::Auto;
  /// Channel noise estimate; ComplementMode::Auto complements B when > 1/2.
  std::optional<double> noise_estimate;
};

struct MatchResult {
  Permutation p_hat;
  /// ||A - P^T B' P||_F^2 with B' the matched graph (B or its complement).
  std::size_t objective = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t restarts_used = 0;
  bool complemented = false;
  /// tr(A D B' D^T) before the first step and after each accepted step.
  std::vector<double> objective_trace;
  std::vector<double> step_sizes;
};

/// FAQ: Frank-Wolfe ascent on tr(A D B D^T) over doubly stochastic D with
/// exact line search, then projection to the nearest permutation.
MatchResult faq_match(const Graph& a, const Graph& b, const FaqOptions& opts = {}, Seed seed = 0);

/// A random interior starting point (J/n + K)/2 with K a Sinkhorn-balanced
/// uniform random matrix.
DoublyStochastic random_doubly_stochastic(std::size_t n, Seed seed);

struct BruteForceResult {
  /// Every minimizer of ||A - P^T B P||_F^2, in lexicographic order.
  std::vector<Permutation> minimizers;
  std::size_t objective = 0;
};

inline constexpr std::size_t kBruteForceMaxN = 9;

/// Exhaustive search over all n! permutations. Throws ResourceError when
/// n > max_n.
BruteForceResult brute_force_mle(const Graph& a, const Graph& b, std::size_t max_n = kBruteForceMaxN);

/// Fraction of labels where the estimate agrees with the truth.
double match_accuracy(const Permutation& p_hat, const Permutation& p_true);

/// Accuracy restricted to the floor(c n) highest-degree vertices of A (ties by
/// ascending index). An empty selection counts as 1.
double accuracy_by_degree(const Permutation& p_hat, const Permutation& p_true, const Graph& a, double c);

}  // namespace chanmatch
