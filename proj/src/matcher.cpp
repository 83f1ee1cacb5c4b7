#include "chanmatch/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chanmatch/errors.hpp"
#include "chanmatch/lap.hpp"
#include "chanmatch/matrix.hpp"

namespace chanmatch {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;

// <M, Q> for the permutation matrix Q with Q(i, tau(i)) = 1.
double permutation_inner(const Eigen::MatrixXd& m, const Permutation& tau) {
  double s = 0;
  for (Vertex i = 0; i < tau.size(); ++i) s += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(tau[i]));
  return s;
}

// Rows of B reordered so that row i is row tau(i) of B.
SparseMat permute_rows(const Graph& b, const Permutation& tau) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * b.edge_count());
  for (Vertex i = 0; i < b.size(); ++i) {
    const Vertex src = tau[i];
    for (Vertex j = 0; j < b.size(); ++j)
      if (b.has_edge(src, j)) entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), 1.0);
  }
  const auto n = static_cast<Eigen::Index>(b.size());
  SparseMat m(n, n);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

struct RunOutcome {
  Permutation p_hat;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<double> steps;
};

RunOutcome frank_wolfe(const Graph& b, const SparseMat& as, const SparseMat& bs, DoublyStochastic d,
                       const FaqOptions& opts) {
  RunOutcome out;
  Eigen::MatrixXd adb = as * (d * bs);
  double f = adb.cwiseProduct(d).sum();
  out.trace.push_back(f);

  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    const Eigen::MatrixXd grad = 2.0 * adb;
    const Permutation tau = lap_solve(grad, Sense::Maximize);

    // Segment objective f(D + t (Q - D)) = f + b t + a t^2.
    const double lin = permutation_inner(grad, tau) - grad.cwiseProduct(d).sum();
    const Eigen::MatrixXd aqb = as * permute_rows(b, tau);
    const Eigen::MatrixXd diff = aqb - adb;
    const double quad = permutation_inner(diff, tau) - diff.cwiseProduct(d).sum();

    double step = 0, gain = 0;
    if (lin + quad > gain) {
      step = 1;
      gain = lin + quad;
    }
    if (quad < 0) {
      const double t = -lin / (2 * quad);
      const double g = lin * t + quad * t * t;
      if (t > 0 && t < 1 && g > gain) {
        step = t;
        gain = g;
      }
    }
    out.iterations = it + 1;
    const double scale = std::max(1.0, std::abs(f));
    if (step == 0 || gain <= 1e-12 * scale) {
      out.converged = true;
      break;
    }

    d *= 1 - step;
    for (Vertex i = 0; i < tau.size(); ++i) d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(tau[i])) += step;
    adb += step * diff;
    const double f_new = adb.cwiseProduct(d).sum();
    out.trace.push_back(f_new);
    out.steps.push_back(step);
    const bool small = std::abs(f_new - f) <= opts.tol * scale;
    f = f_new;
    if (small) {
      out.converged = true;
      break;
    }
  }
  out.p_hat = lap_solve(d, Sense::Maximize);
  return out;
}

DoublyStochastic initial_point(std::size_t n, const FaqOptions& opts, Seed seed) {
  const auto ni = static_cast<Eigen::Index>(n);
  switch (opts.init) {
    case FaqInit::Identity:
      return Eigen::MatrixXd::Identity(ni, ni);
    case FaqInit::Barycenter:
      return barycenter(ni);
    case FaqInit::Given:
      if (!opts.given || opts.given->size() != n) throw InputError("faq_match: given init missing or wrong size");
      return permutation_matrix(*opts.given);
    case FaqInit::RandomDoublyStochastic:
      return random_doubly_stochastic(n, seed);
  }
  return barycenter(ni);
}

}  // namespace

DoublyStochastic random_doubly_stochastic(std::size_t n, Seed seed) {
  const auto ni = static_cast<Eigen::Index>(n);
  Engine eng = make_engine(seed);
  Eigen::MatrixXd k(ni, ni);
  for (Eigen::Index j = 0; j < ni; ++j)
    for (Eigen::Index i = 0; i < ni; ++i) k(i, j) = 1e-3 + uniform01(eng);
  return 0.5 * (barycenter(ni) + sinkhorn_balance(k));
}

MatchResult faq_match(const Graph& a, const Graph& b, const FaqOptions& opts, Seed seed) {
  if (a.size() != b.size()) throw InputError("faq_match: size mismatch");
  if (a.size() < 2) throw InputError("faq_match: need n >= 2");
  if (opts.max_iters < 1) throw InputError("faq_match: max_iters must be >= 1");
  if (!(opts.tol > 0)) throw InputError("faq_match: tol must be positive");

  bool complemented = opts.complement_mode == ComplementMode::Always;
  if (opts.complement_mode == ComplementMode::Auto && opts.noise_estimate && *opts.noise_estimate > 0.5)
    complemented = true;
  const Graph target = complemented ? complement(b) : b;

  const SparseMat as = to_sparse(a);
  const SparseMat bs = to_sparse(target);

  MatchResult best;
  best.objective = std::numeric_limits<std::size_t>::max();
  best.complemented = complemented;
  for (std::size_t run = 0; run <= opts.restarts; ++run) {
    DoublyStochastic start = run == 0 ? initial_point(a.size(), opts, derive_seed(seed, {0}))
                                      : random_doubly_stochastic(a.size(), derive_seed(seed, {run}));
    RunOutcome r = frank_wolfe(target, as, bs, std::move(start), opts);
    const std::size_t obj = disagreements(a, relabel(target, r.p_hat));
    best.restarts_used = run;
    if (obj < best.objective) {
      best.objective = obj;
      best.p_hat = std::move(r.p_hat);
      best.iterations = r.iterations;
      best.converged = r.converged;
      best.objective_trace = std::move(r.trace);
      best.step_sizes = std::move(r.steps);
    }
    if (best.objective == 0) break;
  }
  return best;
}

BruteForceResult brute_force_mle(const Graph& a, const Graph& b, std::size_t max_n) {
  const std::size_t n = a.size();
  if (b.size() != n) throw InputError("brute_force_mle: size mismatch");
  if (n > max_n) {
    throw ResourceError("brute_force_mle: n=" + std::to_string(n) + " exceeds the enumeration limit " +
                        std::to_string(max_n));
  }
  BruteForceResult res;
  res.objective = std::numeric_limits<std::size_t>::max();
  std::vector<Vertex> sigma(n);
  std::iota(sigma.begin(), sigma.end(), Vertex{0});
  do {
    std::size_t obj = 0;
    for (Vertex i = 0; i < n && obj <= res.objective; ++i)
      for (Vertex j = i + 1; j < n; ++j) obj += 2 * (a.has_edge(i, j) != b.has_edge(sigma[i], sigma[j]));
    if (obj < res.objective) {
      res.objective = obj;
      res.minimizers.clear();
    }
    if (obj == res.objective) res.minimizers.emplace_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return res;
}

double match_accuracy(const Permutation& p_hat, const Permutation& p_true) {
  if (p_hat.size() != p_true.size()) throw InputError("match_accuracy: size mismatch");
  if (p_hat.size() == 0) return 1.0;
  std::size_t hits = 0;
  for (Vertex i = 0; i < p_hat.size(); ++i) hits += p_hat[i] == p_true[i];
  return static_cast<double>(hits) / static_cast<double>(p_hat.size());
}

double accuracy_by_degree(const Permutation& p_hat, const Permutation& p_true, const Graph& a, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw InputError("accuracy_by_degree: c must lie in (0, 1]");
  if (p_hat.size() != p_true.size() || p_hat.size() != a.size())
    throw InputError("accuracy_by_degree: size mismatch");
  const std::size_t n = a.size();
  const auto top = static_cast<std::size_t>(std::floor(c * static_cast<double>(n) + 1e-9));
  if (top == 0) return 1.0;
  const auto deg = a.degrees();
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(), [&](Vertex x, Vertex y) { return deg[x] > deg[y]; });
  std::size_t hits = 0;
  for (std::size_t t = 0; t < top; ++t) hits += p_hat[order[t]] == p_true[order[t]];
  return static_cast<double>(hits) / static_cast<double>(top);
}

}  // namespace chanmatch
