#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "chanmatch/errors.hpp"
#include "chanmatch/matchability.hpp"
#include "oracles.hpp"

using namespace chanmatch;

TEST_CASE("derangement and Pi_{n,k} counts") {
  for (std::size_t k = 0; k <= 15; ++k) CHECK(derangement_count(k) == oracle::derangements(k));
  CHECK(derangement_count(2) == 1);
  CHECK(derangement_count(4) == 9);
  CHECK(pi_nk_size(5, 2) == 10);
  CHECK(pi_nk_size(3, 3) == 2);
  CHECK(pi_nk_size(6, 2) == 15);
  CHECK(pi_nk_size(10000, 5000) == UINT64_MAX);
}

TEST_CASE("enumerate_pi_nk visits every member once") {
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t k = 2; k <= n; ++k) {
      std::set<std::vector<Vertex>> seen;
      enumerate_pi_nk(n, k, [&](const Permutation& q) {
        CHECK(q.moved_count() == k);
        seen.insert(oracle::images(q));
      });
      CHECK(seen.size() == oracle::binom(n, k) * oracle::derangements(k));
      CHECK(seen.size() == pi_nk_size(n, k));
    }
  CHECK_THROWS_AS(enumerate_pi_nk(4, 1, [](const Permutation&) {}), InputError);
  CHECK_THROWS_AS(enumerate_pi_nk(4, 5, [](const Permutation&) {}), InputError);
}

TEST_CASE("sample_pi_nk is uniform") {
  auto check_uniform = [](std::size_t n, std::size_t k, int draws) {
    std::map<std::vector<Vertex>, int> freq;
    for (int t = 0; t < draws; ++t) {
      const auto q = sample_pi_nk(n, k, static_cast<Seed>(t));
      REQUIRE(q.moved_count() == k);
      ++freq[oracle::images(q)];
    }
    const double cells = static_cast<double>(pi_nk_size(n, k));
    CHECK(freq.size() == pi_nk_size(n, k));
    // chi-square against the uniform law, 5 sd above its mean
    const double expect = draws / cells;
    double chi2 = 0;
    for (const auto& [q, c] : freq) chi2 += (c - expect) * (c - expect) / expect;
    const double dof = cells - 1;
    CHECK(chi2 < dof + 5 * std::sqrt(2 * dof));
  };
  check_uniform(5, 2, 20000);
  check_uniform(3, 3, 4000);
  check_uniform(5, 4, 45000);
  CHECK_THROWS_AS(sample_pi_nk(3, 1, 0), InputError);
  CHECK(sample_pi_nk(9, 4, 17) == sample_pi_nk(9, 4, 17));
}

TEST_CASE("changed pair count |U_Q|") {
  std::mt19937 gen(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + gen() % 20;
    const std::size_t k = 2 + gen() % (n - 1);
    const auto q = sample_pi_nk(n, k, static_cast<Seed>(t));
    const auto u = changed_pair_count(q);
    CHECK(u == oracle::changed_pairs(oracle::images(q)));
    // worst case is all 2-cycles: k (n - k/2 - 1) >= nk/3 needs n >= 6
    if (n >= 6) CHECK(3 * u >= n * k);
  }
  // a transposition moves every pair through one of its labels; the swapped pair maps to itself
  CHECK(changed_pair_count(Permutation::transposition(10, 2, 5)) == 2 * 8);
}

TEST_CASE("mean |U_Q| over Pi_{n,k} matches the 2-cycle correction") {
  for (std::size_t n : {5, 7})
    for (std::size_t k = 2; k <= n; ++k) {
      double total = 0;
      std::uint64_t count = 0;
      enumerate_pi_nk(n, k, [&](const Permutation& q) {
        total += static_cast<double>(oracle::changed_pairs(oracle::images(q)));
        ++count;
      });
      // E[#2-cycles] = C(k,2) D(k-2) / D(k)
      const double ck2 = k * (k - 1) / 2.0;
      const double two_cycles = ck2 * static_cast<double>(oracle::derangements(k - 2)) /
                                static_cast<double>(oracle::derangements(k));
      const double expect = ck2 + static_cast<double>(k * (n - k)) - two_cycles;
      CHECK(total / static_cast<double>(count) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("shuffle statistics") {
  const Graph a = oracle::random_graph(40, 0.3, 1);
  std::vector<Permutation> sample;
  for (Seed s = 0; s < 30; ++s) sample.push_back(sample_pi_nk(40, 5, s));
  const auto st = shuffle_stats(a, sample);
  double mean = 0;
  std::size_t mn = SIZE_MAX;
  for (const auto& q : sample) {
    const auto full = oracle::frobenius(oracle::dense(a), oracle::relabel(oracle::dense(a), oracle::images(q)));
    mean += static_cast<double>(full) / 2.0;
    mn = std::min(mn, full);
  }
  CHECK(st.mean == doctest::Approx(mean / 30.0));
  CHECK(st.min == mn);
  CHECK_THROWS_AS(shuffle_stats(a, std::span<const Permutation>{}), InputError);

  const auto x1 = xhat_k(a, 5, 200, 9, 1);
  const auto x4 = xhat_k(a, 5, 200, 9, 4);
  CHECK(x1.mean == x4.mean);
  CHECK(x1.min == x4.min);
  CHECK(static_cast<double>(x1.min) <= 2 * x1.mean);
  CHECK_THROWS_AS(xhat_k(a, 1, 10, 0), InputError);
  CHECK_THROWS_AS(xhat_k(a, 41, 10, 0), InputError);
  CHECK_THROWS_AS(xhat_k(a, 5, 0, 0), InputError);

  // xhat_k draw i is sample_pi_nk(n, k, derive_seed(seed, {i}))
  std::vector<Permutation> same;
  for (std::uint64_t i = 0; i < 50; ++i) same.push_back(sample_pi_nk(40, 6, derive_seed(123, {i})));
  const auto direct = shuffle_stats(a, same);
  const auto sampled = xhat_k(a, 6, 50, 123);
  CHECK(direct.mean == sampled.mean);
  CHECK(direct.min == sampled.min);
}

TEST_CASE("estimator algebra") {
  CHECK(phat_star_from_min(100, 5, 0.0) == 0.0);
  CHECK_THROWS_AS(phat_star_from_min(100, 5, -1.0), InputError);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> up(1e-6, 0.5 - 1e-6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 10 + gen() % 10000;
    const std::size_t k = 2 + gen() % (n - 1);
    const double p = up(gen);
    const double x = theorem1_threshold(n, k, p);
    CHECK(std::abs(phat_star_from_min(n, k, x) - p) < 1e-12);
  }
  // threshold formula directly
  CHECK(theorem1_threshold(100, 4, 0.1) == doctest::Approx(6 * 4 * std::log(100.0) / std::log(1 / (4 * 0.1 * 0.9))));
  CHECK_THROWS_AS(theorem1_threshold(100, 4, 0.0), DomainError);
  CHECK_THROWS_AS(theorem1_threshold(100, 4, 0.5), DomainError);
  // more disagreement tolerates more noise
  CHECK(phat_star_from_min(100, 4, 1000) > phat_star_from_min(100, 4, 100));
  CHECK(phat_star_from_min(100, 4, 1e12) < 0.5);
}

TEST_CASE("exact bound versus sampled bound") {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const Graph a = oracle::random_graph(6, 0.5, seed);
    const double exact = pstar_exact(a, 2);
    std::size_t best = SIZE_MAX;
    enumerate_pi_nk(6, 2, [&](const Permutation& q) {
      best = std::min(best, oracle::frobenius(oracle::dense(a), oracle::relabel(oracle::dense(a), oracle::images(q))));
    });
    CHECK(exact == phat_star_from_min(6, 2, static_cast<double>(best)));
    CHECK(phat_star(a, 2, 5, seed) >= exact);
  }
  CHECK_THROWS_AS(pstar_exact(Graph(100), 50), ResourceError);
}

TEST_CASE("matchability profile") {
  SUBCASE("complete graph has automorphisms everywhere") {
    const std::size_t ks[] = {2, 5};
    const auto prof = matchability_profile(Graph::complete(10), ks, 20, 1);
    REQUIRE(prof.records.size() == 2);
    for (const auto& r : prof.records) {
      CHECK(r.xhat_min == 0);
      CHECK(r.xhat_mean == 0.0);
      CHECK(r.phat_star == 0.0);
      CHECK(r.automorphism_suspect);
    }
  }
  SUBCASE("empty graph gives an all-zero profile") {
    const std::size_t ks[] = {2, 3, 8};
    for (const auto& r : matchability_profile(Graph(8), ks, 10, 1).records) {
      CHECK(r.xhat_mean == 0.0);
      CHECK(r.xhat_norm == 0.0);
      CHECK(r.phat_star == 0.0);
    }
  }
  SUBCASE("records agree with xhat_k under the documented seeding") {
    const Graph a = oracle::random_graph(60, 0.2, 4);
    const std::size_t ks[] = {3, 30};
    const auto prof = matchability_profile(a, ks, 100, 77, 2);
    for (const auto& r : prof.records) {
      const auto s = xhat_k(a, r.k, 100, derive_seed(77, {r.k}));
      CHECK(r.xhat_mean == s.mean);
      CHECK(r.xhat_min == s.min);
      CHECK(r.xhat_norm == doctest::Approx(s.mean / (static_cast<double>(r.k) * std::log(60.0))));
      CHECK(r.phat_star == phat_star_from_min(60, r.k, static_cast<double>(s.min)));
      CHECK(r.threshold(0.1) == theorem1_threshold(60, r.k, 0.1));
    }
    std::ostringstream os;
    write_profile_csv(os, prof);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,k,m,xhat_mean,xhat_norm,xhat_min,phat_star");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
  }
}
