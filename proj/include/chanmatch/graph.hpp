#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chanmatch {

using Vertex = std::size_t;
using Word = std::uint64_t;

/// Bijection on {0, ..., n-1}; sigma[i] is the image of i.
///
/// Relabeling a graph A by a permutation Q produces Q^T A Q, whose (i, j)
/// entry is A(sigma(i), sigma(j)).
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `sigma` is a bijection on its index range.
  explicit Permutation(std::vector<Vertex> sigma);

  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, Vertex a, Vertex b);
  /// (c0 c1 ... c_{m-1}): c0 -> c1 -> ... -> c_{m-1} -> c0.
  static Permutation cycle(std::size_t n, std::span<const Vertex> cyc);

  std::size_t size() const noexcept { return sigma_.size(); }
  Vertex operator[](Vertex i) const noexcept { return sigma_[i]; }
  std::span<const Vertex> images() const noexcept { return sigma_; }

  Permutation inverse() const;
  /// (this o other)(i) = this(other(i)).
  Permutation compose(const Permutation& other) const;

  /// Number of labels i with sigma(i) != i.
  std::size_t moved_count() const noexcept;
  std::vector<Vertex> moved() const;
  bool is_identity() const noexcept { return moved_count() == 0; }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Vertex> sigma_;
};

std::ostream& operator<<(std::ostream& os, const Permutation& p);

class GraphBuilder;

/// Simple undirected graph on n labeled vertices stored as bit-packed
/// adjacency rows. Symmetric and hollow by construction; immutable once built.
class Graph {
 public:
  Graph() = default;
  /// Empty graph on n vertices.
  explicit Graph(std::size_t n);

  static Graph complete(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool has_edge(Vertex i, Vertex j) const noexcept {
    return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1U;
  }
  std::span<const Word> row(Vertex i) const noexcept {
    return {bits_.data() + i * words_, words_};
  }

  std::size_t degree(Vertex i) const noexcept;
  std::vector<std::size_t> degrees() const;
  std::size_t edge_count() const noexcept;
  /// Edges (i, j) with i < j in row-major order.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend class GraphBuilder;
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

/// Mutable staging area for a Graph. add_edge/remove_edge keep the matrix
/// symmetric; self-loops are rejected.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::size_t n);
  explicit GraphBuilder(Graph g) : g_(std::move(g)) {}

  std::size_t size() const noexcept { return g_.n_; }
  void add_edge(Vertex i, Vertex j);
  void remove_edge(Vertex i, Vertex j);
  void set_edge(Vertex i, Vertex j, bool present) { present ? add_edge(i, j) : remove_edge(i, j); }
  bool has_edge(Vertex i, Vertex j) const noexcept { return g_.has_edge(i, j); }
  Graph build() && { return std::move(g_); }

 private:
  Graph g_;
};

/// Degree-sequence and triangle summaries of a graph.
struct SummaryStats {
  std::size_t n = 0;
  double mean_degree = 0;
  double density = 0;
  /// Global transitivity: 3 * triangles / connected triples.
  double clustering = 0;
  /// Sample skewness g1 of the degree sequence (biased central moments).
  double skewness = 0;
  /// Population standard deviation of degrees over the mean degree.
  double rsd = 0;
};

struct EdgeListOptions {
  bool one_indexed = false;
  bool drop_loops = false;
};

Graph from_edge_list(std::span<const std::pair<Vertex, Vertex>> edges, std::size_t n,
                     EdgeListOptions opts = {});

/// Parses "u v" lines; '#' starts a comment line. When n is 0 the vertex
/// count is inferred from the largest id.
Graph parse_edge_list(std::istream& in, std::size_t n = 0, EdgeListOptions opts = {});
Graph read_edge_list(const std::string& path, std::size_t n = 0, EdgeListOptions opts = {});
void write_edge_list(std::ostream& out, const Graph& g, bool one_indexed = false);

/// Q^T A Q: result(i, j) = A(sigma(i), sigma(j)).
Graph relabel(const Graph& a, const Permutation& q);

/// ||A - B||_F^2, i.e. twice the number of unordered pairs where A and B differ.
std::size_t disagreements(const Graph& a, const Graph& b);

/// X_Q = (1/2) ||A - Q^T A Q||_F^2 without materializing Q^T A Q. Runs in time
/// proportional to the degrees and rows of the vertices Q moves.
std::size_t shuffle_half_disagreements(const Graph& a, const Permutation& q);

Graph complement(const Graph& a);

/// ||P - Q||_F^2 = 2 * |{i : P(i) != Q(i)}|.
std::size_t permutation_distance(const Permutation& p, const Permutation& q);

SummaryStats summary_stats(const Graph& a);

/// Subgraph induced by `keep` (relabeled 0..keep.size()-1 in the given order).
Graph induced_subgraph(const Graph& a, std::span<const Vertex> keep);

/// Vertices of the largest connected component, ascending. Ties go to the
/// component containing the smallest vertex.
std::vector<Vertex> largest_component(const Graph& a);

}  // namespace chanmatch
