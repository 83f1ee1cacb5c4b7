#include "chanmatch/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "chanmatch/errors.hpp"

namespace chanmatch {

namespace {

std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

template <typename Fn>
void for_each_bit(std::span<const Word> row, Fn&& fn) {
  for (std::size_t w = 0; w < row.size(); ++w) {
    Word bits = row[w];
    while (bits) {
      const auto b = static_cast<std::size_t>(std::countr_zero(bits));
      fn(w * 64 + b);
      bits &= bits - 1;
    }
  }
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": size mismatch (" + std::to_string(a) + " vs " +
                     std::to_string(b) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<Vertex> sigma) : sigma_(std::move(sigma)) {
  std::vector<bool> seen(sigma_.size(), false);
  for (Vertex v : sigma_) {
    if (v >= sigma_.size() || seen[v]) throw InputError("permutation: not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<Vertex> s(n);
  std::iota(s.begin(), s.end(), Vertex{0});
  Permutation p;
  p.sigma_ = std::move(s);
  return p;
}

Permutation Permutation::transposition(std::size_t n, Vertex a, Vertex b) {
  if (a >= n || b >= n) throw InputError("transposition: label out of range");
  Permutation p = identity(n);
  std::swap(p.sigma_[a], p.sigma_[b]);
  return p;
}

Permutation Permutation::cycle(std::size_t n, std::span<const Vertex> cyc) {
  std::vector<Vertex> s(n);
  std::iota(s.begin(), s.end(), Vertex{0});
  for (std::size_t t = 0; t < cyc.size(); ++t) {
    if (cyc[t] >= n) throw InputError("cycle: label out of range");
    s[cyc[t]] = cyc[(t + 1) % cyc.size()];
  }
  return Permutation(std::move(s));
}

Permutation Permutation::inverse() const {
  std::vector<Vertex> inv(sigma_.size());
  for (Vertex i = 0; i < sigma_.size(); ++i) inv[sigma_[i]] = i;
  Permutation p;
  p.sigma_ = std::move(inv);
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  require_same_size(size(), other.size(), "compose");
  std::vector<Vertex> out(sigma_.size());
  for (Vertex i = 0; i < out.size(); ++i) out[i] = sigma_[other.sigma_[i]];
  Permutation p;
  p.sigma_ = std::move(out);
  return p;
}

std::size_t Permutation::moved_count() const noexcept {
  std::size_t c = 0;
  for (Vertex i = 0; i < sigma_.size(); ++i) c += sigma_[i] != i;
  return c;
}

std::vector<Vertex> Permutation::moved() const {
  std::vector<Vertex> out;
  for (Vertex i = 0; i < sigma_.size(); ++i)
    if (sigma_[i] != i) out.push_back(i);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  os << '[';
  for (Vertex i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
  return os << ']';
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(std::size_t n) : n_(n), words_(words_for(n)), bits_(n * words_for(n), 0) {}

Graph Graph::complete(std::size_t n) { return complement(Graph(n)); }

std::size_t Graph::degree(Vertex i) const noexcept {
  std::size_t d = 0;
  for (Word w : row(i)) d += static_cast<std::size_t>(std::popcount(w));
  return d;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(n_);
  for (Vertex i = 0; i < n_; ++i) d[i] = degree(i);
  return d;
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t total = 0;
  for (Word w : bits_) total += static_cast<std::size_t>(std::popcount(w));
  return total / 2;
}

std::vector<std::pair<Vertex, Vertex>> Graph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count());
  for (Vertex i = 0; i < n_; ++i)
    for_each_bit(row(i), [&](Vertex j) {
      if (i < j) out.emplace_back(i, j);
    });
  return out;
}

GraphBuilder::GraphBuilder(std::size_t n) : g_(n) {}

void GraphBuilder::add_edge(Vertex i, Vertex j) {
  if (i >= g_.n_ || j >= g_.n_) throw InputError("add_edge: vertex out of range");
  if (i == j) throw InputError("add_edge: self-loop");
  g_.bits_[i * g_.words_ + (j >> 6)] |= Word{1} << (j & 63);
  g_.bits_[j * g_.words_ + (i >> 6)] |= Word{1} << (i & 63);
}

void GraphBuilder::remove_edge(Vertex i, Vertex j) {
  if (i >= g_.n_ || j >= g_.n_) throw InputError("remove_edge: vertex out of range");
  if (i == j) return;
  g_.bits_[i * g_.words_ + (j >> 6)] &= ~(Word{1} << (j & 63));
  g_.bits_[j * g_.words_ + (i >> 6)] &= ~(Word{1} << (i & 63));
}

// ---------------------------------------------------------------------------
// Edge lists

Graph from_edge_list(std::span<const std::pair<Vertex, Vertex>> edges, std::size_t n,
                     EdgeListOptions opts) {
  GraphBuilder b(n);
  for (auto [u, v] : edges) {
    if (opts.one_indexed) {
      if (u == 0 || v == 0) throw InputError("edge list: id 0 in one-indexed input");
      --u;
      --v;
    }
    if (u >= n || v >= n) {
      throw InputError("edge list: endpoint out of range (" + std::to_string(u) + ", " +
                       std::to_string(v) + ") for n=" + std::to_string(n));
    }
    if (u == v) {
      if (opts.drop_loops) continue;
      throw InputError("edge list: self-loop at vertex " + std::to_string(u));
    }
    b.add_edge(u, v);
  }
  return std::move(b).build();
}

Graph parse_edge_list(std::istream& in, std::size_t n, EdgeListOptions opts) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::string line;
  std::size_t lineno = 0;
  Vertex max_id = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    if (!(ls >> u >> v) || u < 0 || v < 0) {
      throw InputError("edge list: malformed line " + std::to_string(lineno) + ": '" + line + "'");
    }
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    max_id = std::max({max_id, static_cast<Vertex>(u), static_cast<Vertex>(v)});
    any = true;
  }
  if (n == 0 && any) n = opts.one_indexed ? max_id : max_id + 1;
  return from_edge_list(edges, n, opts);
}

Graph read_edge_list(const std::string& path, std::size_t n, EdgeListOptions opts) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, n, opts);
}

void write_edge_list(std::ostream& out, const Graph& g, bool one_indexed) {
  const Vertex off = one_indexed ? 1 : 0;
  for (auto [i, j] : g.edges()) out << i + off << ' ' << j + off << '\n';
}

// ---------------------------------------------------------------------------
// Kernels

Graph relabel(const Graph& a, const Permutation& q) {
  require_same_size(a.size(), q.size(), "relabel");
  const Permutation inv = q.inverse();
  GraphBuilder b(a.size());
  for (Vertex u = 0; u < a.size(); ++u)
    for_each_bit(a.row(u), [&](Vertex v) {
      if (u < v) b.add_edge(inv[u], inv[v]);
    });
  return std::move(b).build();
}

std::size_t disagreements(const Graph& a, const Graph& b) {
  require_same_size(a.size(), b.size(), "disagreements");
  std::size_t total = 0;
  for (Vertex i = 0; i < a.size(); ++i) {
    const auto ra = a.row(i);
    const auto rb = b.row(i);
    for (std::size_t w = 0; w < ra.size(); ++w)
      total += static_cast<std::size_t>(std::popcount(ra[w] ^ rb[w]));
  }
  return total;
}

// Pairs with no moved endpoint never disagree, and sigma maps the set of pairs
// touching the moved set onto itself. Both A and Q^T A Q therefore carry the
// same number of edges inside that set, so
//   X_Q = 2 * (|E_U| - |{(i,j) in E_U : A(sigma i, sigma j) = 1}|).
std::size_t shuffle_half_disagreements(const Graph& a, const Permutation& q) {
  require_same_size(a.size(), q.size(), "shuffle_half_disagreements");
  std::size_t incident = 0;
  std::size_t preserved = 0;
  for (Vertex i = 0; i < a.size(); ++i) {
    const Vertex si = q[i];
    if (si == i) continue;
    for_each_bit(a.row(i), [&](Vertex j) {
      const Vertex sj = q[j];
      if (sj != j && j < i) return;  // counted from the smaller moved endpoint
      ++incident;
      preserved += a.has_edge(si, sj);
    });
  }
  return 2 * (incident - preserved);
}

Graph complement(const Graph& a) {
  GraphBuilder b(a.size());
  for (Vertex i = 0; i < a.size(); ++i)
    for (Vertex j = i + 1; j < a.size(); ++j)
      if (!a.has_edge(i, j)) b.add_edge(i, j);
  return std::move(b).build();
}

std::size_t permutation_distance(const Permutation& p, const Permutation& q) {
  require_same_size(p.size(), q.size(), "permutation_distance");
  std::size_t diff = 0;
  for (Vertex i = 0; i < p.size(); ++i) diff += p[i] != q[i];
  return 2 * diff;
}

SummaryStats summary_stats(const Graph& a) {
  const std::size_t n = a.size();
  if (n < 2) throw InputError("summary_stats: need at least 2 vertices");

  const auto deg = a.degrees();
  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(deg.begin(), deg.end(), 0.0) / nd;

  double m2 = 0, m3 = 0;
  for (auto d : deg) {
    const double c = static_cast<double>(d) - mean;
    m2 += c * c;
    m3 += c * c * c;
  }
  m2 /= nd;
  m3 /= nd;

  // 3 * triangles = sum over edges of common-neighbour counts.
  double closed = 0;
  for (Vertex i = 0; i < n; ++i) {
    const auto ri = a.row(i);
    for_each_bit(ri, [&](Vertex j) {
      if (j <= i) return;
      const auto rj = a.row(j);
      for (std::size_t w = 0; w < ri.size(); ++w) closed += std::popcount(ri[w] & rj[w]);
    });
  }
  double triples = 0;
  for (auto d : deg) triples += 0.5 * static_cast<double>(d) * (static_cast<double>(d) - 1.0);

  SummaryStats s;
  s.n = n;
  s.mean_degree = mean;
  s.density = mean / (nd - 1.0);
  s.clustering = triples > 0 ? closed / triples : 0.0;
  s.skewness = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
  s.rsd = mean > 0 ? std::sqrt(m2) / mean : 0.0;
  return s;
}

Graph induced_subgraph(const Graph& a, std::span<const Vertex> keep) {
  std::vector<std::size_t> pos(a.size(), SIZE_MAX);
  for (std::size_t t = 0; t < keep.size(); ++t) {
    if (keep[t] >= a.size()) throw InputError("induced_subgraph: vertex out of range");
    pos[keep[t]] = t;
  }
  GraphBuilder b(keep.size());
  for (std::size_t t = 0; t < keep.size(); ++t)
    for_each_bit(a.row(keep[t]), [&](Vertex j) {
      if (pos[j] != SIZE_MAX && pos[j] > t) b.add_edge(t, pos[j]);
    });
  return std::move(b).build();
}

std::vector<Vertex> largest_component(const Graph& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> comp(n, SIZE_MAX);
  std::vector<Vertex> best, stack;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] != SIZE_MAX) continue;
    std::vector<Vertex> members;
    stack.push_back(s);
    comp[s] = s;
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for_each_bit(a.row(u), [&](Vertex v) {
        if (comp[v] == SIZE_MAX) {
          comp[v] = s;
          stack.push_back(v);
        }
      });
    }
    if (members.size() > best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  return best;
}

}  // namespace chanmatch
