#pragma once

// Partite graph encodings: K_{s+t} cliques correspond to reordered pattern
// copies (one vertex per row index per row part, likewise for columns).

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "removal/bitset.hpp"
#include "removal/config.hpp"
#include "removal/counting.hpp"
#include "removal/matrix.hpp"

namespace removal {

struct GraphVertex {
  std::size_t part = 0;   // 0-based; row parts first, then column parts
  std::size_t label = 0;  // host row or column index, 1-based
  friend bool operator==(const GraphVertex&, const GraphVertex&) = default;
};

class PartiteGraph {
 public:
  PartiteGraph(std::size_t row_parts, std::size_t col_parts);

  /// Adds a vertex to `part` and returns its id.
  std::size_t add_vertex(std::size_t part, std::size_t label);
  /// Must be called once all vertices exist, before add_edge.
  void finalize_vertices();
  void add_edge(std::size_t u, std::size_t v);

  [[nodiscard]] std::size_t row_parts() const { return row_parts_; }
  [[nodiscard]] std::size_t col_parts() const { return col_parts_; }
  [[nodiscard]] std::size_t part_count() const { return row_parts_ + col_parts_; }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] const GraphVertex& vertex(std::size_t id) const { return vertices_[id]; }
  [[nodiscard]] const std::vector<std::size_t>& part(std::size_t p) const { return parts_[p]; }
  [[nodiscard]] const Bitset& neighbors(std::size_t id) const { return adj_[id]; }
  [[nodiscard]] bool adjacent(std::size_t u, std::size_t v) const { return adj_[u].test(v); }
  [[nodiscard]] std::size_t edge_count() const;
  /// Id of the vertex with `label` in `part`, or vertex_count() if absent.
  [[nodiscard]] std::size_t find(std::size_t part, std::size_t label) const;
  /// "R1".."Rs" for row parts, "C1".."Ct" for column parts.
  [[nodiscard]] std::string part_name(std::size_t part) const;

  friend bool operator==(const PartiteGraph&, const PartiteGraph&) = default;

 private:
  std::size_t row_parts_;
  std::size_t col_parts_;
  std::vector<GraphVertex> vertices_;
  std::vector<std::vector<std::size_t>> parts_;
  std::vector<Bitset> adj_;
};

/// s row parts of m vertices and t column parts of n vertices. Same-side
/// vertices in different parts are adjacent iff their labels differ; row
/// vertex (i, part a) and column vertex (j, part b) iff M(i,j) = A(a,b).
[[nodiscard]] PartiteGraph build_partite_graph(const DenseMatrix& matrix, const Pattern& pattern,
                                               const Limits& limits = {});

/// Parts are the separator bands; same-side vertices in different parts are
/// always adjacent, row a in band i and column b in band j iff M*(a,b) = A(i,j).
[[nodiscard]] PartiteGraph build_separated_graph(const DenseMatrix& matrix,
                                                 const Pattern& pattern,
                                                 const SeparatorSet& sep,
                                                 const Limits& limits = {});

/// Number of k-cliques, k = part count. Throws std::logic_error if a part
/// contains an edge (the encodings never produce one).
[[nodiscard]] CopyCount count_cliques(const PartiteGraph& graph, std::size_t k,
                                      const Limits& limits = {});

/// Pairs (S, sigma) with apply_reordering(S, sigma) = A, by full enumeration.
[[nodiscard]] CopyCount count_reordered_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                               const Limits& limits = {});

/// Vertex ids of the clique a copy maps to under the identity reordering
/// (row k of the copy in part k, column l in part s+l).
[[nodiscard]] std::vector<std::size_t> clique_of_copy(const PartiteGraph& graph,
                                                      const SubmatrixIndex& copy);

[[nodiscard]] bool is_clique(const PartiteGraph& graph, std::span<const std::size_t> vertices);

/// No edge is used by two of the cliques.
[[nodiscard]] bool edge_disjoint(std::span<const std::vector<std::size_t>> cliques);

/// Only row-part/column-part edges are compared. Entry-disjoint copies
/// always give cross-edge-disjoint cliques; same-side edges can repeat when
/// two copies share a pair of rows (or columns).
[[nodiscard]] bool cross_edge_disjoint(const PartiteGraph& graph,
                                       std::span<const std::vector<std::size_t>> cliques);

/// Text format:
///   partite <row parts> <col parts>
///   <part name> <label> : <part name>:<label> ...
/// one line per vertex, vertices in id order.
void write_graph(std::ostream& out, const PartiteGraph& graph);
[[nodiscard]] PartiteGraph parse_graph(std::istream& in);

}  // namespace removal
