#pragma once

#include <string>
#include <variant>

#include "chanmatch/channel.hpp"
#include "chanmatch/graph.hpp"
#include "chanmatch/rng.hpp"

namespace chanmatch {

/// G(n, alpha): every pair independently with probability alpha.
struct ErGnp {
  std::size_t n;
  double alpha;
};

/// G(n, m): uniform over graphs with exactly m edges.
struct ErGnm {
  std::size_t n;
  std::size_t m;
};

/// Independent pairs with pair-specific probabilities.
struct BernoulliLambda {
  PairProbabilities lambda;
};

/// Circulant lattice: i ~ j iff 0 < min(|i-j|, n-|i-j|) <= d.
struct RingLattice {
  std::size_t n;
  std::size_t d;
};

/// Ring lattice plus independent Bernoulli(beta) shortcuts on non-lattice pairs.
struct NewmanWatts {
  std::size_t n;
  std::size_t d;
  double beta;
};

/// Lattice with d nearest neighbours (d/2 per side, d even) and each edge
/// rewired with probability beta.
struct WattsStrogatz {
  std::size_t n;
  std::size_t d;
  double beta;
};

/// Preferential attachment: seed clique on d+1 vertices, then each new vertex
/// attaches to d distinct existing vertices chosen with probability
/// proportional to degree^gamma.
struct PrefAttach {
  std::size_t n;
  double gamma;
  std::size_t d;
};

/// Exactly d-regular graph on n vertices.
struct RandomRegular {
  std::size_t n;
  std::size_t d;
};

using GeneratorSpec =
    std::variant<ErGnp, ErGnm, BernoulliLambda, RingLattice, NewmanWatts, WattsStrogatz, PrefAttach, RandomRegular>;

/// Throws InputError when parameters are out of range for the model.
void validate(const GeneratorSpec& spec);

/// Short tag such as "ER(500,0.3)" used in logs and CSV output.
std::string describe(const GeneratorSpec& spec);

std::size_t vertex_count(const GeneratorSpec& spec);

Graph generate(const GeneratorSpec& spec, Seed seed);

/// beta = sqrt(log n / ((1/2 - p)^2 n)), the shortcut rate that makes
/// any graph matchable at channel noise p once mixed in.
double hardening_rate(std::size_t n, double p);

/// A' = C(A, beta, I) with beta = hardening_rate(n, p). Throws DomainError
/// when p >= 1/2 or beta > 1.
Graph noise_hardening(const Graph& a, double p, Seed seed);

}  // namespace chanmatch
