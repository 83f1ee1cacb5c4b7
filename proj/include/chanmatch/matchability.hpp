#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "chanmatch/graph.hpp"
#include "chanmatch/rng.hpp"

namespace chanmatch {

/// Number of permutations drawn per estimate unless configured otherwise.
inline constexpr std::size_t kDefaultSampleCount = 1000;

/// Enumeration budget for the exact bound.
inline constexpr std::uint64_t kExactEnumerationBudget = 10'000'000;

/// Uniform draw from the permutations moving exactly k of n labels: a uniform
/// k-subset followed by a rejection-sampled uniform derangement of it.
Permutation sample_pi_nk(std::size_t n, std::size_t k, Seed seed);

/// Calls fn on every member of Pi_{n,k} (subsets in lexicographic order,
/// derangements in lexicographic order within each subset).
void enumerate_pi_nk(std::size_t n, std::size_t k, const std::function<void(const Permutation&)>& fn);

/// D(k), the number of derangements of k elements.
std::uint64_t derangement_count(std::size_t k);

/// |Pi_{n,k}| = C(n,k) D(k), saturating at UINT64_MAX.
std::uint64_t pi_nk_size(std::size_t n, std::size_t k);

/// |U_Q|: unordered pairs {i,j} whose image {sigma(i), sigma(j)} differs from
/// {i,j}. Equals C(k,2) + k(n-k) minus the number of 2-cycles of Q.
std::size_t changed_pair_count(const Permutation& q);

struct ShuffleStats {
  /// Mean of X_Q = (1/2)||A - Q^T A Q||_F^2 over the sample.
  double mean = 0;
  /// Minimum of the full count ||A - Q^T A Q||_F^2 over the sample.
  std::size_t min = 0;
};

/// Disagreement statistics over an explicit set of permutations.
ShuffleStats shuffle_stats(const Graph& a, std::span<const Permutation> sample);

/// Monte-Carlo X_k and X_{k,min} over m draws from Pi_{n,k}. Draw i uses
/// derive_seed(seed, {i}); `threads` only affects wall time.
ShuffleStats xhat_k(const Graph& a, std::size_t k, std::size_t m, Seed seed, unsigned threads = 1);

/// 1/2 - 1/2 sqrt(1 - exp(-6 k log n / x_min)), with 0 when x_min = 0.
double phat_star_from_min(std::size_t n, std::size_t k, double x_min);

double phat_star(const Graph& a, std::size_t k, std::size_t m, Seed seed, unsigned threads = 1);

/// 6 k log n / log(1 / (4 p (1-p))). Throws DomainError unless 0 < p < 1/2.
double theorem1_threshold(std::size_t n, std::size_t k, double p);

/// Exact p*_{n,k}: the bound minimized over all of Pi_{n,k}. Throws
/// ResourceError when |Pi_{n,k}| exceeds kExactEnumerationBudget.
double pstar_exact(const Graph& a, std::size_t k);

struct MatchabilityRecord {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  double xhat_mean = 0;
  /// xhat_mean / (k log n)
  double xhat_norm = 0;
  std::size_t xhat_min = 0;
  double phat_star = 0;
  /// Some sampled shuffle left the graph unchanged.
  bool automorphism_suspect = false;

  /// Minimum disagreement count the consistency condition requires at noise p.
  double threshold(double p) const { return theorem1_threshold(n, k, p); }
};

struct MatchabilityProfile {
  std::size_t n = 0;
  std::vector<MatchabilityRecord> records;
};

/// One record per k; X_k and p-hat share the same sample of permutations,
/// seeded by derive_seed(seed, {k}).
MatchabilityProfile matchability_profile(const Graph& a, std::span<const std::size_t> ks, std::size_t m,
                                         Seed seed, unsigned threads = 1);

/// CSV with header n,k,m,xhat_mean,xhat_norm,xhat_min,phat_star.
void write_profile_csv(std::ostream& out, const MatchabilityProfile& profile);

}  // namespace chanmatch
