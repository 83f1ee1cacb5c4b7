#include "chanmatch/channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "chanmatch/errors.hpp"

namespace chanmatch {

namespace {

void check_probability(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw InputError(std::string(what) + ": probability outside [0,1]");
}

void check_likelihood_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("log-likelihood: p must lie in (0,1)");
}

// Builds the unshuffled noisy graph then applies B = relabel(noisy, P^-1).
template <typename FlipProb>
Graph corrupt(const Graph& a, const Permutation& shuffle, Seed seed, FlipProb&& flip_prob) {
  const std::size_t n = a.size();
  GraphBuilder noisy(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const bool edge = a.has_edge(i, j);
      const bool flip = pair_bernoulli(seed, i, j, flip_prob(i, j, edge));
      if (edge != flip) noisy.add_edge(i, j);
    }
  Graph g = std::move(noisy).build();
  if (shuffle.is_identity()) return g;
  return relabel(g, shuffle.inverse());
}

}  // namespace

PairProbabilities::PairProbabilities(std::size_t n, double value) : n_(n), constant_(value) {
  check_probability(value, "PairProbabilities");
}

PairProbabilities::PairProbabilities(Eigen::MatrixXd dense) : n_(0), dense_(std::move(dense)) {
  if (dense_.rows() != dense_.cols()) throw InputError("PairProbabilities: matrix not square");
  n_ = static_cast<std::size_t>(dense_.rows());
  for (Eigen::Index i = 0; i < dense_.rows(); ++i) {
    if (dense_(i, i) != 0.0) throw InputError("PairProbabilities: nonzero diagonal");
    for (Eigen::Index j = 0; j < dense_.cols(); ++j) {
      check_probability(dense_(i, j), "PairProbabilities");
      if (dense_(i, j) != dense_(j, i)) throw InputError("PairProbabilities: matrix not symmetric");
    }
  }
}

double PairProbabilities::max_entry() const noexcept {
  if (constant_) return n_ > 1 ? *constant_ : 0.0;
  double m = 0.0;
  for (Eigen::Index i = 0; i < dense_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < dense_.cols(); ++j) m = std::max(m, dense_(i, j));
  return m;
}

double PairProbabilities::min_entry() const noexcept {
  if (constant_) return n_ > 1 ? *constant_ : 0.0;
  double m = 1.0;
  for (Eigen::Index i = 0; i < dense_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < dense_.cols(); ++j) m = std::min(m, dense_(i, j));
  return n_ > 1 ? m : 0.0;
}

Graph corrupt_uniform(const Graph& a, const UniformChannelSpec& spec, Seed seed) {
  if (spec.shuffle.size() != a.size()) throw InputError("corrupt_uniform: permutation size mismatch");
  check_probability(spec.p, "corrupt_uniform");
  const double p = spec.p;
  return corrupt(a, spec.shuffle, seed, [p](Vertex, Vertex, bool) { return p; });
}

Graph corrupt_heterogeneous(const Graph& a, const HeterogeneousChannelSpec& spec, Seed seed) {
  const std::size_t n = a.size();
  if (spec.psi1.size() != n || spec.psi2.size() != n || spec.shuffle.size() != n)
    throw InputError("corrupt_heterogeneous: shape mismatch");
  return corrupt(a, spec.shuffle, seed, [&](Vertex i, Vertex j, bool edge) {
    return edge ? spec.psi2(i, j) : spec.psi1(i, j);
  });
}

std::pair<Graph, Graph> correlated_bernoulli_pair(const PairProbabilities& lambda,
                                                  const PairProbabilities& correlation,
                                                  const Permutation& shuffle, Seed seed) {
  const std::size_t n = lambda.size();
  if (correlation.size() != n || shuffle.size() != n)
    throw InputError("correlated_bernoulli_pair: shape mismatch");

  const Seed seed_a = derive_seed(seed, {0});
  const Seed seed_b = derive_seed(seed, {1});
  GraphBuilder ab(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (pair_bernoulli(seed_a, i, j, lambda(i, j))) ab.add_edge(i, j);
  Graph a = std::move(ab).build();

  auto psi1 = [&](Vertex i, Vertex j) { return (1.0 - correlation(i, j)) * lambda(i, j); };
  auto psi2 = [&](Vertex i, Vertex j) { return (1.0 - correlation(i, j)) * (1.0 - lambda(i, j)); };
  Graph b = corrupt(a, shuffle, seed_b, [&](Vertex i, Vertex j, bool edge) {
    return edge ? psi2(i, j) : psi1(i, j);
  });
  return {std::move(a), std::move(b)};
}

double loglikelihood_uniform(const Graph& a, const Graph& b, double p, const Permutation& shuffle) {
  check_likelihood_p(p);
  if (a.size() != b.size() || shuffle.size() != a.size())
    throw InputError("loglikelihood_uniform: size mismatch");
  const double n = static_cast<double>(a.size());
  const double pairs = n * (n - 1.0) / 2.0;
  const double disagree = static_cast<double>(disagreements(a, relabel(b, shuffle))) / 2.0;
  return (pairs - disagree) * std::log1p(-p) + disagree * std::log(p);
}

double loglikelihood_uniform_trace_form(const Graph& a, const Graph& b, double p,
                                        const Permutation& shuffle) {
  check_likelihood_p(p);
  if (a.size() != b.size() || shuffle.size() != a.size())
    throw InputError("loglikelihood_uniform_trace_form: size mismatch");
  const Graph pb = relabel(b, shuffle);
  // tr(A M) for symmetric A, M is the number of shared ordered pairs.
  double trace = 0;
  for (Vertex i = 0; i < a.size(); ++i) {
    const auto ra = a.row(i);
    const auto rb = pb.row(i);
    for (std::size_t w = 0; w < ra.size(); ++w) trace += std::popcount(ra[w] & rb[w]);
  }
  const double n = static_cast<double>(a.size());
  return 0.5 * trace * (std::log1p(-p) - std::log(p)) + n * (n - 1.0) * std::log(p) / 2.0;
}

double loglikelihood_heterogeneous(const Graph& a, const Graph& b, const HeterogeneousChannelSpec& spec) {
  const std::size_t n = a.size();
  if (b.size() != n || spec.psi1.size() != n || spec.psi2.size() != n || spec.shuffle.size() != n)
    throw InputError("loglikelihood_heterogeneous: shape mismatch");
  const Graph pb = relabel(b, spec.shuffle);
  double ll = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      const double prob_edge = a.has_edge(i, j) ? 1.0 - spec.psi2(i, j) : spec.psi1(i, j);
      ll += std::log(pb.has_edge(i, j) ? prob_edge : 1.0 - prob_edge);
    }
  return ll;
}

double profile_loglikelihood(const Graph& a, const Graph& b, const Permutation& shuffle) {
  const std::size_t n = a.size();
  if (b.size() != n || shuffle.size() != n) throw InputError("profile_loglikelihood: size mismatch");
  const Graph pb = relabel(b, shuffle);
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = 0; j < n; ++j)
      if (i != j && a.has_edge(i, j) != pb.has_edge(i, j))
        psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5;
  const PairProbabilities hat(psi);
  const HeterogeneousChannelSpec at_profile{hat, hat, shuffle};
  // The unordered-pair likelihood counts each pair once; the profile sums
  // over both triangles of the symmetric matrices.
  return 2.0 * loglikelihood_heterogeneous(a, b, at_profile);
}

}  // namespace chanmatch
