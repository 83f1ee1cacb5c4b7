#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <limits>
#include <random>

#include "chanmatch/channel.hpp"
#include "chanmatch/doubly_stochastic.hpp"
#include "chanmatch/errors.hpp"
#include "chanmatch/lap.hpp"
#include "chanmatch/matcher.hpp"
#include "chanmatch/matrix.hpp"
#include "oracles.hpp"

using namespace chanmatch;

namespace {

// Best assignment value by enumerating all n! permutations.
double exhaustive_assignment(const Eigen::MatrixXd& c, bool maximize) {
  const std::size_t n = static_cast<std::size_t>(c.rows());
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  double best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  do {
    double v = 0;
    for (std::size_t i = 0; i < n; ++i) v += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s[i]));
    best = maximize ? std::max(best, v) : std::min(best, v);
  } while (std::next_permutation(s.begin(), s.end()));
  return best;
}

// Random graph with only the trivial automorphism.
Graph asymmetric_graph(std::size_t n, std::uint32_t& seed) {
  for (;; ++seed) {
    const Graph g = oracle::random_graph(n, 0.5, seed);
    if (oracle::automorphism_count(oracle::dense(g)) == 1) return g;
  }
}

}  // namespace

TEST_CASE("lap_solve examples") {
  const Eigen::MatrixXd diag = -Eigen::MatrixXd::Identity(5, 5);
  CHECK(lap_solve(diag).is_identity());
  Eigen::Matrix2d c;
  c << 0, 1, 1, 0;
  const auto p = lap_solve(c);
  CHECK(p.is_identity());
  CHECK(assignment_value(c, p) == 0.0);
  CHECK(lap_solve(c, Sense::Maximize) == Permutation::transposition(2, 0, 1));
  // all-equal costs: lowest indices win
  CHECK(lap_solve(Eigen::MatrixXd::Zero(4, 4)).is_identity());
  CHECK(lap_solve(Eigen::MatrixXd(0, 0)).size() == 0);
  CHECK(lap_solve(Eigen::Matrix3i::Identity(), Sense::Maximize).is_identity());
}

TEST_CASE("lap_solve errors") {
  CHECK_THROWS_AS(lap_solve(Eigen::MatrixXd::Zero(2, 3)), InputError);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(3, 3);
  c(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(lap_solve(c), InputError);
  c(1, 2) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(lap_solve(c), InputError);
}

TEST_CASE("lap_solve matches exhaustive assignment") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> real(-5, 5);
  std::uniform_int_distribution<int> small(0, 3);
  for (int t = 0; t < 300; ++t) {
    const Eigen::Index n = 1 + t % 7;
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) c(i, j) = (t % 2) ? real(gen) : small(gen);  // integers force ties
    for (bool maximize : {false, true}) {
      const auto p = lap_solve(c, maximize ? Sense::Maximize : Sense::Minimize);
      CHECK(assignment_value(c, p) == doctest::Approx(exhaustive_assignment(c, maximize)).epsilon(1e-12));
    }
  }
}

TEST_CASE("doubly stochastic helpers") {
  CHECK(is_doubly_stochastic(barycenter(6)));
  CHECK(is_doubly_stochastic(Eigen::MatrixXd::Identity(4, 4)));
  CHECK_FALSE(is_doubly_stochastic(Eigen::MatrixXd::Ones(3, 3)));
  CHECK_FALSE(is_doubly_stochastic(Eigen::MatrixXd::Ones(2, 3)));
  Eigen::MatrixXd neg = Eigen::MatrixXd::Identity(2, 2);
  neg << 1.5, -0.5, -0.5, 1.5;
  CHECK_FALSE(is_doubly_stochastic(neg));
  for (Seed s = 0; s < 10; ++s) {
    const auto d = random_doubly_stochastic(3 + s, s);
    CHECK(is_doubly_stochastic(d));
    CHECK((d.array() > 0).all());
  }
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5).cwiseAbs().array() + 0.1;
  CHECK(is_doubly_stochastic(sinkhorn_balance(m)));
}

TEST_CASE("matrix views agree with relabel") {
  for (std::uint32_t seed = 0; seed < 10; ++seed) {
    const std::size_t n = 4 + seed;
    const Graph b = oracle::random_graph(n, 0.4, seed);
    const Permutation q = oracle::random_permutation(n, seed + 1);
    const Eigen::MatrixXd m = permutation_matrix(q);
    const Eigen::MatrixXd rel = m * to_dense(b) * m.transpose();
    CHECK(rel == to_dense(relabel(b, q)));
    CHECK(Eigen::MatrixXd(to_sparse(b)) == to_dense(b));
  }
}

TEST_CASE("faq_match fixed points and invariants") {
  std::uint32_t seed = 1;
  const Graph a = asymmetric_graph(8, seed);
  FaqOptions id;
  id.init = FaqInit::Identity;
  const auto r = faq_match(a, a, id);
  CHECK(r.p_hat.is_identity());
  CHECK(r.objective == 0);

  for (std::uint32_t s = 0; s < 20; ++s) {
    const std::size_t n = 10 + s * 3;
    const Graph x = oracle::random_graph(n, 0.3, s);
    const Graph y = corrupt_uniform(x, {0.1, oracle::random_permutation(n, s + 7)}, s);
    FaqOptions opts;
    opts.restarts = s % 3;
    const auto res = faq_match(x, y, opts, s);
    CHECK(res.objective == disagreements(x, relabel(y, res.p_hat)));
    CHECK(res.iterations >= 1);
    CHECK(res.iterations <= opts.max_iters);
    CHECK(res.restarts_used <= opts.restarts);
    for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
      CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-9);
    for (double step : res.step_sizes) {
      CHECK(step > 0.0);
      CHECK(step <= 1.0);
    }
    CHECK(res.step_sizes.size() + 1 == res.objective_trace.size());
  }
}

TEST_CASE("faq_match given init and errors") {
  const Graph a = oracle::random_graph(12, 0.4, 3);
  const Permutation q = oracle::random_permutation(12, 4);
  const Graph b = relabel(a, q.inverse());
  FaqOptions given;
  given.init = FaqInit::Given;
  given.given = q;
  const auto r = faq_match(a, b, given);
  CHECK(r.objective == 0);

  given.given = Permutation::identity(11);
  CHECK_THROWS_AS(faq_match(a, b, given), InputError);
  CHECK_THROWS_AS(faq_match(a, Graph(11)), InputError);
  CHECK_THROWS_AS(faq_match(Graph(1), Graph(1)), InputError);
  FaqOptions bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(faq_match(a, b, bad), InputError);
  bad.max_iters = 5;
  bad.tol = 0;
  CHECK_THROWS_AS(faq_match(a, b, bad), InputError);
}

TEST_CASE("faq_match versus brute force on small graphs") {
  std::uint32_t seed = 100;
  int hits = 0;
  const int instances = 20;
  for (int t = 0; t < instances; ++t, ++seed) {
    const std::size_t n = 5 + t % 3;
    const Graph a = oracle::random_graph(n, 0.5, seed);
    const Graph b = corrupt_uniform(a, {0.15, oracle::random_permutation(n, seed + 1)}, seed);
    const auto bf = brute_force_mle(a, b);
    FaqOptions opts;
    opts.restarts = 50;
    opts.init = FaqInit::RandomDoublyStochastic;
    const auto res = faq_match(a, b, opts, seed);
    CHECK(res.objective >= bf.objective);
    hits += res.objective == bf.objective;
  }
  std::cout << "faq attained the brute-force minimum on " << hits << "/" << instances << " instances\n";

  // noiseless n = 6 asymmetric shuffle
  std::uint32_t s6 = 500;
  const Graph a6 = asymmetric_graph(6, s6);
  const Graph b6 = relabel(a6, oracle::random_permutation(6, 9));
  FaqOptions opts;
  opts.restarts = 5;
  CHECK(faq_match(a6, b6, opts, 1).objective == brute_force_mle(a6, b6).objective);
  CHECK(brute_force_mle(a6, b6).objective == 0);
}

TEST_CASE("complement matching") {
  for (std::uint32_t s = 0; s < 5; ++s) {
    const std::size_t n = 30;
    const Graph a = oracle::random_graph(n, 0.3, s);
    const Permutation truth = oracle::random_permutation(n, s + 50);
    const Graph b = corrupt_uniform(a, {1.0, truth}, s);  // complement, shuffled
    FaqOptions always;
    always.complement_mode = ComplementMode::Always;
    always.init = FaqInit::Given;
    always.given = truth;
    const auto r = faq_match(a, b, always);
    CHECK(r.complemented);
    CHECK(r.objective == 0);
    CHECK(r.p_hat == truth);
    CHECK(r.objective == disagreements(a, relabel(complement(b), r.p_hat)));

    FaqOptions automatic;
    automatic.noise_estimate = 0.9;
    CHECK(faq_match(a, b, automatic).complemented);
    automatic.noise_estimate = 0.1;
    CHECK_FALSE(faq_match(a, b, automatic).complemented);
    FaqOptions never;
    never.complement_mode = ComplementMode::Never;
    never.noise_estimate = 0.9;
    CHECK_FALSE(faq_match(a, b, never).complemented);
  }
}

TEST_CASE("complement beats direct matching at high noise") {
  // ER(100, 0.3) at p = 0.9, identity truth, 30 replicates
  double acc_c = 0, acc_d = 0;
  const std::size_t n = 100;
  const Permutation id = Permutation::identity(n);
  for (Seed s = 0; s < 30; ++s) {
    const Graph a = oracle::random_graph(n, 0.3, static_cast<std::uint32_t>(s));
    const Graph b = corrupt_uniform(a, {0.9, id}, s);
    FaqOptions opts;
    opts.init = FaqInit::Identity;
    opts.complement_mode = ComplementMode::Always;
    acc_c += match_accuracy(faq_match(a, b, opts).p_hat, id);
    opts.complement_mode = ComplementMode::Never;
    acc_d += match_accuracy(faq_match(a, b, opts).p_hat, id);
  }
  CHECK(acc_c >= acc_d);
}

TEST_CASE("brute_force_mle") {
  std::uint32_t seed = 3;
  const Graph a = asymmetric_graph(6, seed);
  const auto r = brute_force_mle(a, a);
  CHECK(r.objective == 0);
  REQUIRE(r.minimizers.size() == 1);
  CHECK(r.minimizers.front().is_identity());

  const auto k4 = brute_force_mle(Graph::complete(4), Graph::complete(4));
  CHECK(k4.minimizers.size() == 24);
  CHECK(std::is_sorted(k4.minimizers.begin(), k4.minimizers.end()));

  GraphBuilder pb(4);
  pb.add_edge(0, 1);
  pb.add_edge(1, 2);
  pb.add_edge(2, 3);
  const Graph p4 = std::move(pb).build();
  const auto rp = brute_force_mle(p4, p4);
  REQUIRE(rp.minimizers.size() == 2);
  CHECK(rp.minimizers[0].is_identity());
  CHECK(rp.minimizers[1] == Permutation({3, 2, 1, 0}));

  CHECK_THROWS_AS(brute_force_mle(Graph(10), Graph(10)), ResourceError);
  CHECK_THROWS_AS(brute_force_mle(Graph(4), Graph(5)), InputError);
  CHECK_NOTHROW(brute_force_mle(Graph(3), Graph(3), 3));
}

TEST_CASE("accuracy metrics") {
  const auto id = Permutation::identity(4);
  CHECK(match_accuracy(id, id) == 1.0);
  CHECK(match_accuracy(id, Permutation::transposition(4, 0, 1)) == 0.5);
  CHECK_THROWS_AS(match_accuracy(id, Permutation::identity(3)), InputError);
  for (std::uint32_t s = 0; s < 30; ++s) {
    const auto p = oracle::random_permutation(9, s), q = oracle::random_permutation(9, s + 99);
    CHECK(match_accuracy(p, q) == doctest::Approx(1.0 - permutation_distance(p, q) / 18.0));
    const Graph g = oracle::random_graph(9, 0.4, s);
    CHECK(accuracy_by_degree(p, q, g, 1.0) == match_accuracy(p, q));
    CHECK(accuracy_by_degree(p, p, g, 0.3) == 1.0);
  }

  GraphBuilder sb(5);
  for (Vertex i = 1; i < 5; ++i) sb.add_edge(0, i);
  const Graph star = std::move(sb).build();
  // correct only on the centre
  const Permutation hat({0, 2, 3, 4, 1});
  const auto truth = Permutation::identity(5);
  CHECK(accuracy_by_degree(hat, truth, star, 0.2) == 1.0);
  CHECK(accuracy_by_degree(hat, truth, star, 0.4) == 0.5);
  CHECK(accuracy_by_degree(hat, truth, star, 0.1) == 1.0);  // floor(0.5) = 0, vacuous
  CHECK_THROWS_AS(accuracy_by_degree(hat, truth, star, 0.0), InputError);
  CHECK_THROWS_AS(accuracy_by_degree(hat, truth, star, 1.5), InputError);

  // degree ties resolve to the lower index
  GraphBuilder tb(4);
  tb.add_edge(0, 1);
  tb.add_edge(2, 3);
  const Permutation only_zero({0, 2, 3, 1});
  CHECK(accuracy_by_degree(only_zero, Permutation::identity(4), std::move(tb).build(), 0.25) == 1.0);
}
