#include "chanmatch/generators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "chanmatch/errors.hpp"

namespace chanmatch {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_prob(double v, const char* model) {
  if (!(v >= 0.0 && v <= 1.0)) throw InputError(std::string(model) + ": probability outside [0,1]");
}

std::size_t cyclic_distance(std::size_t i, std::size_t j, std::size_t n) {
  const std::size_t diff = i > j ? i - j : j - i;
  return std::min(diff, n - diff);
}

Graph ring_lattice(std::size_t n, std::size_t d) {
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i)
    for (std::size_t s = 1; s <= d && s < n; ++s) {
      const Vertex j = (i + s) % n;
      if (i != j && cyclic_distance(i, j, n) <= d) b.add_edge(i, j);
    }
  return std::move(b).build();
}

// Pair index k in row-major order of {(i, j) : i < j}; row i starts at
// i*n - i*(i+1)/2.
std::pair<Vertex, Vertex> decode_pair(std::uint64_t k, std::size_t n) {
  auto row_start = [n](std::uint64_t i) { return i * n - i * (i + 1) / 2; };
  std::uint64_t lo = 0, hi = n - 1;
  while (lo + 1 < hi) {
    const std::uint64_t mid = (lo + hi) / 2;
    if (row_start(mid) <= k)
      lo = mid;
    else
      hi = mid;
  }
  const std::uint64_t i = lo;
  return {i, i + 1 + (k - row_start(i))};
}

Graph gnm(std::size_t n, std::size_t m, Seed seed) {
  const std::uint64_t total = n < 2 ? 0 : std::uint64_t{n} * (n - 1) / 2;
  Engine eng = make_engine(seed);
  // Partial Fisher-Yates over pair indices with a sparse swap table.
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  auto at = [&](std::uint64_t idx) {
    auto it = swapped.find(idx);
    return it == swapped.end() ? idx : it->second;
  };
  GraphBuilder b(n);
  for (std::uint64_t t = 0; t < m; ++t) {
    const std::uint64_t r = t + uniform_below(eng, total - t);
    const std::uint64_t chosen = at(r);
    swapped[r] = at(t);
    const auto [i, j] = decode_pair(chosen, n);
    b.add_edge(i, j);
  }
  return std::move(b).build();
}

Graph watts_strogatz(std::size_t n, std::size_t d, double beta, Seed seed) {
  const std::size_t half = d / 2;
  GraphBuilder b(ring_lattice(n, half));
  Engine eng = make_engine(seed);
  for (Vertex i = 0; i < n; ++i)
    for (std::size_t s = 1; s <= half; ++s) {
      const Vertex j = (i + s) % n;
      if (uniform01(eng) >= beta) continue;
      // Uniform over non-self, non-adjacent endpoints; keep the edge if none.
      std::vector<Vertex> candidates;
      for (Vertex k = 0; k < n; ++k)
        if (k != i && (k == j || !b.has_edge(i, k))) candidates.push_back(k);
      if (candidates.empty()) continue;
      const Vertex k = candidates[uniform_below(eng, candidates.size())];
      b.remove_edge(i, j);
      b.add_edge(i, k);
    }
  return std::move(b).build();
}

// Fenwick tree over vertex weights, supporting weighted draws by prefix search.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), w_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - w_[i];
    w_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }
  double weight(std::size_t i) const { return w_[i]; }
  double total() const {
    double s = 0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }
  // Smallest i with prefix(i+1) > target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    std::size_t step = std::bit_floor(tree_.size() - 1);
    for (; step > 0; step >>= 1) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return std::min(pos, w_.size() - 1);
  }

 private:
  std::vector<double> tree_;
  std::vector<double> w_;
};

Graph pref_attach(std::size_t n, double gamma, std::size_t d, Seed seed) {
  const std::size_t seed_size = d + 1;
  GraphBuilder b(n);
  std::vector<std::size_t> degree(n, 0);
  for (Vertex i = 0; i < seed_size; ++i)
    for (Vertex j = i + 1; j < seed_size; ++j) b.add_edge(i, j);
  std::fill(degree.begin(), degree.begin() + static_cast<std::ptrdiff_t>(seed_size), d);

  auto weight_of = [gamma](std::size_t deg) { return std::pow(static_cast<double>(deg), gamma); };
  WeightTree tree(n);
  for (Vertex i = 0; i < seed_size; ++i) tree.set(i, weight_of(degree[i]));

  Engine eng = make_engine(seed);
  std::vector<Vertex> targets;
  for (Vertex v = seed_size; v < n; ++v) {
    targets.clear();
    // d distinct targets without replacement: zero a chosen weight until the
    // round is done.
    for (std::size_t t = 0; t < d; ++t) {
      const double total = tree.total();
      Vertex u;
      if (total > 0) {
        u = tree.find(uniform01(eng) * total);
        // Round-off at the upper end can land on a zero-weight slot.
        while (tree.weight(u) == 0.0 && u + 1 < v) ++u;
        while (tree.weight(u) == 0.0 && u > 0) --u;
      } else {
        std::vector<Vertex> free;
        for (Vertex c = 0; c < v; ++c)
          if (std::find(targets.begin(), targets.end(), c) == targets.end()) free.push_back(c);
        u = free[uniform_below(eng, free.size())];
      }
      targets.push_back(u);
      tree.set(u, 0.0);
    }
    for (Vertex u : targets) {
      b.add_edge(v, u);
      ++degree[u];
      tree.set(u, weight_of(degree[u]));
    }
    degree[v] = d;
    tree.set(v, weight_of(d));
  }
  return std::move(b).build();
}

Graph circulant_regular(std::size_t n, std::size_t d) {
  GraphBuilder b(n);
  for (Vertex i = 0; i < n; ++i) {
    for (std::size_t s = 1; s <= d / 2; ++s) b.add_edge(i, (i + s) % n);
    if (d % 2 == 1) b.add_edge(i, (i + n / 2) % n);
  }
  return std::move(b).build();
}

Graph regular_by_swaps(std::size_t n, std::size_t d, Seed seed) {
  Graph base = circulant_regular(n, d);
  auto edges = base.edges();
  GraphBuilder g(std::move(base));
  Engine eng = make_engine(seed);
  const std::size_t swaps = 10 * edges.size();
  for (std::size_t t = 0; t < swaps; ++t) {
    const std::size_t e1 = uniform_below(eng, edges.size());
    const std::size_t e2 = uniform_below(eng, edges.size());
    if (e1 == e2) continue;
    auto [a, bb] = edges[e1];
    auto [c, dd] = edges[e2];
    if (eng() & 1U) std::swap(c, dd);
    // (a,bb),(c,dd) -> (a,dd),(c,bb)
    if (a == dd || c == bb || g.has_edge(a, dd) || g.has_edge(c, bb)) continue;
    g.remove_edge(a, bb);
    g.remove_edge(c, dd);
    g.add_edge(a, dd);
    g.add_edge(c, bb);
    edges[e1] = {a, dd};
    edges[e2] = {c, bb};
  }
  return std::move(g).build();
}

Graph regular_by_configuration(std::size_t n, std::size_t d, Seed seed) {
  constexpr int kRetryBudget = 1000;
  Engine eng = make_engine(seed);
  std::vector<Vertex> stubs;
  stubs.reserve(n * d);
  for (Vertex i = 0; i < n; ++i) stubs.insert(stubs.end(), d, i);
  for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
    for (std::size_t t = stubs.size(); t > 1; --t) std::swap(stubs[t - 1], stubs[uniform_below(eng, t)]);
    GraphBuilder b(n);
    bool ok = true;
    for (std::size_t t = 0; t + 1 < stubs.size() && ok; t += 2) {
      const Vertex u = stubs[t], v = stubs[t + 1];
      if (u == v || b.has_edge(u, v))
        ok = false;
      else
        b.add_edge(u, v);
    }
    if (ok) return std::move(b).build();
  }
  throw ResourceError("random regular: configuration model exhausted its retry budget");
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  std::visit(overloaded{
                 [](const ErGnp& s) { check_prob(s.alpha, "ER_GNP"); },
                 [](const ErGnm& s) {
                   const std::size_t total = s.n < 2 ? 0 : s.n * (s.n - 1) / 2;
                   if (s.m > total) throw InputError("ER_GNM: m exceeds n(n-1)/2");
                 },
                 [](const BernoulliLambda&) {},
                 [](const RingLattice& s) {
                   if (s.d >= s.n) throw InputError("RingLattice: need d < n");
                 },
                 [](const NewmanWatts& s) {
                   if (s.d >= s.n) throw InputError("NewmanWatts: need d < n");
                   check_prob(s.beta, "NewmanWatts");
                 },
                 [](const WattsStrogatz& s) {
                   if (s.d % 2 != 0) throw InputError("WattsStrogatz: d must be even");
                   if (s.d >= s.n) throw InputError("WattsStrogatz: need d < n");
                   check_prob(s.beta, "WattsStrogatz");
                 },
                 [](const PrefAttach& s) {
                   if (s.d == 0 || s.d + 1 > s.n) throw InputError("PrefAttach: need 1 <= d < n");
                   if (!(s.gamma >= 0.0) || !std::isfinite(s.gamma)) throw InputError("PrefAttach: gamma must be >= 0");
                 },
                 [](const RandomRegular& s) {
                   if (s.d >= s.n && !(s.n == 0 && s.d == 0)) throw InputError("RandomRegular: need d < n");
                   if ((s.n * s.d) % 2 != 0) throw InputError("RandomRegular: n*d must be even");
                 },
             },
             spec);
}

std::string describe(const GeneratorSpec& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ErGnp& s) { os << "ER(" << s.n << "," << s.alpha << ")"; },
                 [&](const ErGnm& s) { os << "GNM(" << s.n << "," << s.m << ")"; },
                 [&](const BernoulliLambda& s) { os << "Bernoulli(" << s.lambda.size() << ")"; },
                 [&](const RingLattice& s) { os << "Lattice(" << s.n << "," << s.d << ")"; },
                 [&](const NewmanWatts& s) { os << "NW(" << s.n << "," << s.d << "," << s.beta << ")"; },
                 [&](const WattsStrogatz& s) { os << "WS(" << s.n << "," << s.d << "," << s.beta << ")"; },
                 [&](const PrefAttach& s) { os << "PA(" << s.n << "," << s.gamma << "," << s.d << ")"; },
                 [&](const RandomRegular& s) { os << "RR(" << s.n << "," << s.d << ")"; },
             },
             spec);
  return os.str();
}

std::size_t vertex_count(const GeneratorSpec& spec) {
  return std::visit(overloaded{
                        [](const BernoulliLambda& s) { return s.lambda.size(); },
                        [](const auto& s) { return s.n; },
                    },
                    spec);
}

Graph generate(const GeneratorSpec& spec, Seed seed) {
  validate(spec);
  return std::visit(
      overloaded{
          [&](const ErGnp& s) {
            GraphBuilder b(s.n);
            for (Vertex i = 0; i < s.n; ++i)
              for (Vertex j = i + 1; j < s.n; ++j)
                if (pair_bernoulli(seed, i, j, s.alpha)) b.add_edge(i, j);
            return std::move(b).build();
          },
          [&](const ErGnm& s) { return gnm(s.n, s.m, seed); },
          [&](const BernoulliLambda& s) {
            const std::size_t n = s.lambda.size();
            GraphBuilder b(n);
            for (Vertex i = 0; i < n; ++i)
              for (Vertex j = i + 1; j < n; ++j)
                if (pair_bernoulli(seed, i, j, s.lambda(i, j))) b.add_edge(i, j);
            return std::move(b).build();
          },
          [&](const RingLattice& s) { return ring_lattice(s.n, s.d); },
          [&](const NewmanWatts& s) {
            GraphBuilder b(ring_lattice(s.n, s.d));
            for (Vertex i = 0; i < s.n; ++i)
              for (Vertex j = i + 1; j < s.n; ++j)
                if (cyclic_distance(i, j, s.n) > s.d && pair_bernoulli(seed, i, j, s.beta)) b.add_edge(i, j);
            return std::move(b).build();
          },
          [&](const WattsStrogatz& s) { return watts_strogatz(s.n, s.d, s.beta, seed); },
          [&](const PrefAttach& s) { return pref_attach(s.n, s.gamma, s.d, seed); },
          [&](const RandomRegular& s) {
            if (s.d == 0) return Graph(s.n);
            if (static_cast<double>(s.d) > std::cbrt(static_cast<double>(s.n)))
              return regular_by_swaps(s.n, s.d, seed);
            return regular_by_configuration(s.n, s.d, seed);
          },
      },
      spec);
}

double hardening_rate(std::size_t n, double p) {
  if (!(p >= 0.0 && p < 0.5)) throw DomainError("noise_hardening: p must lie in [0, 1/2)");
  if (n < 2) throw DomainError("noise_hardening: need n >= 2");
  const double nd = static_cast<double>(n);
  const double gap = 0.5 - p;
  return std::sqrt(std::log(nd) / (gap * gap * nd));
}

Graph noise_hardening(const Graph& a, double p, Seed seed) {
  const double beta = hardening_rate(a.size(), p);
  if (beta > 1.0) {
    std::ostringstream os;
    os << "noise_hardening: computed beta = " << beta << " exceeds 1 (n=" << a.size() << ", p=" << p << ")";
    throw DomainError(os.str());
  }
  return corrupt_uniform(a, {beta, Permutation::identity(a.size())}, seed);
}

}  // namespace chanmatch
