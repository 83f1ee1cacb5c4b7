#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "chanmatch/errors.hpp"
#include "chanmatch/generators.hpp"
#include "oracles.hpp"

using namespace chanmatch;

namespace {

// Lattice built straight from the cyclic-distance definition.
Graph lattice_oracle(std::size_t n, std::size_t d) {
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const std::size_t diff = j - i;
      if (std::min(diff, n - diff) <= d) b.add_edge(i, j);
    }
  return std::move(b).build();
}

bool is_regular(const Graph& g, std::size_t d) {
  for (auto x : g.degrees())
    if (x != d) return false;
  return true;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate(ErGnp{10, 1.5}, 0), InputError);
  CHECK_THROWS_AS(generate(ErGnm{4, 7}, 0), InputError);
  CHECK_THROWS_AS(generate(RingLattice{5, 5}, 0), InputError);
  CHECK_THROWS_AS(generate(NewmanWatts{10, 2, -0.1}, 0), InputError);
  CHECK_THROWS_AS(generate(WattsStrogatz{10, 3, 0.1}, 0), InputError);
  CHECK_THROWS_AS(generate(WattsStrogatz{10, 10, 0.1}, 0), InputError);
  CHECK_THROWS_AS(generate(PrefAttach{5, 1.0, 0}, 0), InputError);
  CHECK_THROWS_AS(generate(PrefAttach{5, 1.0, 5}, 0), InputError);
  CHECK_THROWS_AS(generate(PrefAttach{5, -1.0, 2}, 0), InputError);
  CHECK_THROWS_AS(generate(RandomRegular{5, 3}, 0), InputError);
  CHECK_THROWS_AS(generate(RandomRegular{5, 5}, 0), InputError);
  CHECK_NOTHROW(validate(ErGnm{4, 6}));
}

TEST_CASE("describe and vertex_count") {
  CHECK(describe(ErGnp{500, 0.3}) == "ER(500,0.3)");
  CHECK(describe(RingLattice{10, 2}) == "Lattice(10,2)");
  CHECK(vertex_count(PrefAttach{77, 1.0, 2}) == 77);
  CHECK(vertex_count(BernoulliLambda{PairProbabilities(12, 0.1)}) == 12);
}

TEST_CASE("Erdos-Renyi G(n, alpha)") {
  const Graph g = generate(ErGnp{500, 0.3}, 42);
  const double pairs = 500.0 * 499.0 / 2.0;
  const double se = std::sqrt(pairs * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(g.edge_count()) - 0.3 * pairs) < 3 * se);
  CHECK(generate(ErGnp{50, 0.0}, 1).edge_count() == 0);
  CHECK(generate(ErGnp{50, 1.0}, 1) == Graph::complete(50));
  CHECK(generate(ErGnp{60, 0.2}, 5) == generate(ErGnp{60, 0.2}, 5));
  CHECK(generate(ErGnp{60, 0.2}, 5) != generate(ErGnp{60, 0.2}, 6));
}

TEST_CASE("Erdos-Renyi G(n, m)") {
  CHECK(generate(ErGnm{100, 0}, 3).edge_count() == 0);
  for (Seed s = 0; s < 20; ++s) {
    const std::size_t n = 2 + s * 17;
    const std::size_t m = (n * (n - 1) / 2) * (s % 5) / 4;
    CHECK(generate(ErGnm{n, m}, s).edge_count() == m);
  }
  CHECK(generate(ErGnm{6, 15}, 0) == Graph::complete(6));

  // n = 4, m = 2: all C(6, 2) = 15 edge sets equally likely
  std::map<std::vector<std::pair<Vertex, Vertex>>, int> freq;
  const int draws = 15000;
  for (int t = 0; t < draws; ++t) ++freq[generate(ErGnm{4, 2}, 1000 + t).edges()];
  CHECK(freq.size() == 15);
  const double expect = draws / 15.0, sd = std::sqrt(expect * (1 - 1 / 15.0));
  for (const auto& [edges, count] : freq) CHECK(std::abs(count - expect) < 5 * sd);
}

TEST_CASE("Bernoulli Lambda") {
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(30, 30);
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 15; ++j)
      if (i != j) lam(i, j) = 1.0;
  const Graph g = generate(BernoulliLambda{PairProbabilities(lam)}, 9);
  CHECK(g.edge_count() == 15 * 14 / 2);
  CHECK(g.has_edge(0, 14));
  CHECK_FALSE(g.has_edge(0, 15));
}

TEST_CASE("ring lattice") {
  const Graph g = generate(RingLattice{10, 2}, 0);
  CHECK(is_regular(g, 4));
  CHECK(g == lattice_oracle(10, 2));
  CHECK(disagreements(g, relabel(g, Permutation::transposition(10, 0, 1))) == 8);
  const Graph big = generate(RingLattice{20, 2}, 0);
  CHECK(disagreements(big, relabel(big, Permutation::transposition(20, 0, 1))) == 8);
  for (std::size_t n = 3; n < 16; ++n)
    for (std::size_t d = 1; d < n; ++d) CHECK(generate(RingLattice{n, d}, 0) == lattice_oracle(n, d));
  // d >= n/2 saturates to the complete graph
  CHECK(generate(RingLattice{9, 4}, 0) == Graph::complete(9));
}

TEST_CASE("Newman-Watts") {
  CHECK(generate(NewmanWatts{40, 3, 0.0}, 7) == lattice_oracle(40, 3));
  CHECK(generate(NewmanWatts{40, 3, 1.0}, 7) == Graph::complete(40));
  const Graph g = generate(NewmanWatts{200, 2, 0.1}, 7);
  const Graph lat = lattice_oracle(200, 2);
  // every lattice edge survives
  for (auto [i, j] : lat.edges()) CHECK(g.has_edge(i, j));
  const double shortcuts = static_cast<double>(g.edge_count() - lat.edge_count());
  const double pairs = 200.0 * 199.0 / 2.0 - static_cast<double>(lat.edge_count());
  CHECK(std::abs(shortcuts - 0.1 * pairs) < 4 * std::sqrt(pairs * 0.09));
}

TEST_CASE("Watts-Strogatz") {
  CHECK(generate(WattsStrogatz{30, 4, 0.0}, 1) == lattice_oracle(30, 2));
  for (double beta : {0.05, 0.5, 1.0}) {
    const Graph g = generate(WattsStrogatz{100, 6, beta}, 3);
    CHECK(g.edge_count() == 300);
    CHECK(summary_stats(g).mean_degree == doctest::Approx(6.0));
  }
  const Graph rewired = generate(WattsStrogatz{100, 6, 0.75}, 3);
  CHECK(disagreements(rewired, lattice_oracle(100, 3)) > 0);
}

TEST_CASE("preferential attachment") {
  for (std::size_t d : {1, 2, 3, 5}) {
    for (double gamma : {0.0, 1.0, 2.0}) {
      const std::size_t n = 120;
      const Graph g = generate(PrefAttach{n, gamma, d}, 11 + d);
      const std::size_t seed_clique = d * (d + 1) / 2;
      CHECK(g.edge_count() - seed_clique == (n - d - 1) * d);
      for (auto deg : g.degrees()) CHECK(deg >= d);
    }
  }
  // stronger preference concentrates degree: compare max degree averaged over seeds
  double max1 = 0, max2 = 0;
  for (Seed s = 0; s < 10; ++s) {
    auto d1 = generate(PrefAttach{500, 1.0, 2}, s).degrees();
    auto d2 = generate(PrefAttach{500, 2.0, 2}, s).degrees();
    max1 += static_cast<double>(*std::max_element(d1.begin(), d1.end()));
    max2 += static_cast<double>(*std::max_element(d2.begin(), d2.end()));
  }
  CHECK(max2 > max1);
  CHECK(generate(PrefAttach{3, 1.0, 2}, 0) == Graph::complete(3));
}

TEST_CASE("random regular") {
  for (Seed s = 0; s < 10; ++s) {
    CHECK(is_regular(generate(RandomRegular{50, 3}, s), 3));
    CHECK(is_regular(generate(RandomRegular{50, 10}, s), 10));
    CHECK(is_regular(generate(RandomRegular{31, 30}, s), 30));
  }
  CHECK(generate(RandomRegular{8, 0}, 0).edge_count() == 0);
  CHECK(generate(RandomRegular{200, 4}, 1) != generate(RandomRegular{200, 4}, 2));
}

TEST_CASE("noise hardening") {
  CHECK(hardening_rate(10000, 0.1) == doctest::Approx(std::sqrt(std::log(10000.0) / (0.16 * 10000))));
  CHECK(hardening_rate(10000, 0.1) == doctest::Approx(0.0759).epsilon(1e-3));
  try {
    noise_hardening(Graph(100), 0.49, 0);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("beta") != std::string::npos);
  }
  CHECK_THROWS_AS(noise_hardening(Graph(100), 0.5, 0), DomainError);
  CHECK_THROWS_AS(hardening_rate(100, -0.1), DomainError);

  const std::size_t n = 10000;
  const double beta = hardening_rate(n, 0.1);
  const Graph h = noise_hardening(Graph(n), 0.1, 4);
  const double pairs = n * (n - 1) / 2.0;
  CHECK(std::abs(static_cast<double>(h.edge_count()) - beta * pairs) < 3 * std::sqrt(pairs * beta * (1 - beta)));
}
