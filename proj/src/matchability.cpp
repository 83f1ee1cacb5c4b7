#include "chanmatch/matchability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "chanmatch/errors.hpp"
#include "chanmatch/format.hpp"
#include "chanmatch/parallel.hpp"

namespace chanmatch {

namespace {

void check_shuffle_size(std::size_t n, std::size_t k) {
  if (k < 2 || k > n) {
    throw InputError("shuffle size k=" + std::to_string(k) + " must satisfy 2 <= k <= n=" + std::to_string(n));
  }
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact at every step
    const std::uint64_t num = n - k + i;
    if (r > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    r = r * num / i;
  }
  return r;
}

}  // namespace

Permutation sample_pi_nk(std::size_t n, std::size_t k, Seed seed) {
  check_shuffle_size(n, k);
  Engine eng = make_engine(seed);

  // Floyd's algorithm for a uniform k-subset.
  std::set<Vertex> chosen;
  for (std::size_t j = n - k; j < n; ++j) {
    const Vertex t = uniform_below(eng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  const std::vector<Vertex> subset(chosen.begin(), chosen.end());

  std::vector<std::size_t> order(k);
  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t t = k; t > 1; --t) std::swap(order[t - 1], order[uniform_below(eng, t)]);
    bool deranged = true;
    for (std::size_t t = 0; t < k && deranged; ++t) deranged = order[t] != t;
    if (deranged) break;
  }

  std::vector<Vertex> sigma(n);
  std::iota(sigma.begin(), sigma.end(), Vertex{0});
  for (std::size_t t = 0; t < k; ++t) sigma[subset[t]] = subset[order[t]];
  return Permutation(std::move(sigma));
}

void enumerate_pi_nk(std::size_t n, std::size_t k, const std::function<void(const Permutation&)>& fn) {
  check_shuffle_size(n, k);
  std::vector<Vertex> subset(k);
  std::iota(subset.begin(), subset.end(), Vertex{0});
  std::vector<Vertex> sigma(n);
  for (;;) {
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
      bool deranged = true;
      for (std::size_t t = 0; t < k && deranged; ++t) deranged = order[t] != t;
      if (!deranged) continue;
      std::iota(sigma.begin(), sigma.end(), Vertex{0});
      for (std::size_t t = 0; t < k; ++t) sigma[subset[t]] = subset[order[t]];
      fn(Permutation(sigma));
    } while (std::next_permutation(order.begin(), order.end()));

    // next k-combination in lexicographic order
    std::size_t pos = k;
    while (pos > 0 && subset[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++subset[pos - 1];
    for (std::size_t t = pos; t < k; ++t) subset[t] = subset[t - 1] + 1;
  }
}

std::uint64_t derangement_count(std::size_t k) {
  std::uint64_t prev2 = 1, prev1 = 0;  // D(0), D(1)
  if (k == 0) return 1;
  for (std::size_t i = 2; i <= k; ++i) {
    const std::uint64_t s = prev1 + prev2;
    const std::uint64_t next = s < prev1 ? std::numeric_limits<std::uint64_t>::max() : saturating_mul(i - 1, s);
    prev2 = prev1;
    prev1 = next;
  }
  return prev1;
}

std::uint64_t pi_nk_size(std::size_t n, std::size_t k) { return saturating_mul(binomial(n, k), derangement_count(k)); }

std::size_t changed_pair_count(const Permutation& q) {
  const std::size_t n = q.size();
  const std::size_t k = q.moved_count();
  std::size_t two_cycles = 0;
  for (Vertex i = 0; i < n; ++i) {
    const Vertex j = q[i];
    if (j > i && q[j] == i) ++two_cycles;
  }
  return k * (k - 1) / 2 + k * (n - k) - two_cycles;
}

ShuffleStats shuffle_stats(const Graph& a, std::span<const Permutation> sample) {
  if (sample.empty()) throw InputError("shuffle_stats: empty sample");
  ShuffleStats s;
  s.min = std::numeric_limits<std::size_t>::max();
  double total = 0;
  for (const auto& q : sample) {
    const std::size_t half = shuffle_half_disagreements(a, q);
    total += static_cast<double>(half);
    s.min = std::min(s.min, 2 * half);
  }
  s.mean = total / static_cast<double>(sample.size());
  return s;
}

ShuffleStats xhat_k(const Graph& a, std::size_t k, std::size_t m, Seed seed, unsigned threads) {
  check_shuffle_size(a.size(), k);
  if (m == 0) throw InputError("xhat_k: sample count m must be >= 1");
  std::vector<std::size_t> half(m);
  parallel_for(m, threads, [&](std::size_t i) {
    half[i] = shuffle_half_disagreements(a, sample_pi_nk(a.size(), k, derive_seed(seed, {i})));
  });
  ShuffleStats s;
  double total = 0;
  s.min = std::numeric_limits<std::size_t>::max();
  for (auto h : half) {
    total += static_cast<double>(h);
    s.min = std::min(s.min, 2 * h);
  }
  s.mean = total / static_cast<double>(m);
  return s;
}

double phat_star_from_min(std::size_t n, std::size_t k, double x_min) {
  if (!(x_min >= 0.0)) throw InputError("phat_star: x_min must be nonnegative");
  if (x_min == 0.0) return 0.0;
  const double rate = 6.0 * static_cast<double>(k) * std::log(static_cast<double>(n)) / x_min;
  // 1 - exp(-rate) = (1 - 2p)^2 at the bound
  return 0.5 - 0.5 * std::sqrt(-std::expm1(-rate));
}

double phat_star(const Graph& a, std::size_t k, std::size_t m, Seed seed, unsigned threads) {
  const auto s = xhat_k(a, k, m, seed, threads);
  return phat_star_from_min(a.size(), k, static_cast<double>(s.min));
}

double theorem1_threshold(std::size_t n, std::size_t k, double p) {
  if (!(p > 0.0 && p < 0.5)) throw DomainError("theorem1_threshold: p must lie in (0, 1/2)");
  const double gap = 1.0 - 2.0 * p;
  // log(1 / (4p(1-p))) with 4p(1-p) = 1 - (1-2p)^2
  const double denom = -std::log1p(-gap * gap);
  return 6.0 * static_cast<double>(k) * std::log(static_cast<double>(n)) / denom;
}

double pstar_exact(const Graph& a, std::size_t k) {
  check_shuffle_size(a.size(), k);
  const std::uint64_t count = pi_nk_size(a.size(), k);
  if (count > kExactEnumerationBudget) {
    throw ResourceError("pstar_exact: |Pi_{n,k}| = " + std::to_string(count) + " exceeds enumeration budget " +
                        std::to_string(kExactEnumerationBudget));
  }
  std::size_t best = std::numeric_limits<std::size_t>::max();
  enumerate_pi_nk(a.size(), k, [&](const Permutation& q) {
    if (best > 0) best = std::min(best, 2 * shuffle_half_disagreements(a, q));
  });
  return phat_star_from_min(a.size(), k, static_cast<double>(best));
}

MatchabilityProfile matchability_profile(const Graph& a, std::span<const std::size_t> ks, std::size_t m,
                                         Seed seed, unsigned threads) {
  MatchabilityProfile profile;
  profile.n = a.size();
  const double log_n = std::log(static_cast<double>(a.size()));
  for (std::size_t k : ks) {
    const auto s = xhat_k(a, k, m, derive_seed(seed, {k}), threads);
    MatchabilityRecord r;
    r.n = a.size();
    r.k = k;
    r.m = m;
    r.xhat_mean = s.mean;
    r.xhat_norm = s.mean / (static_cast<double>(k) * log_n);
    r.xhat_min = s.min;
    r.phat_star = phat_star_from_min(a.size(), k, static_cast<double>(s.min));
    r.automorphism_suspect = s.min == 0;
    profile.records.push_back(r);
  }
  return profile;
}

void write_profile_csv(std::ostream& out, const MatchabilityProfile& profile) {
  out << "n,k,m,xhat_mean,xhat_norm,xhat_min,phat_star\n";
  for (const auto& r : profile.records) {
    out << r.n << ',' << r.k << ',' << r.m << ',' << format_number(r.xhat_mean) << ',' << format_number(r.xhat_norm)
        << ',' << r.xhat_min << ',' << format_number(r.phat_star) << '\n';
  }
}

}  // namespace chanmatch
