#include "removal/graph.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "removal/errors.hpp"

namespace removal {

PartiteGraph::PartiteGraph(std::size_t row_parts, std::size_t col_parts)
    : row_parts_(row_parts), col_parts_(col_parts), parts_(row_parts + col_parts) {}

std::size_t PartiteGraph::add_vertex(std::size_t part, std::size_t label) {
  if (part >= parts_.size()) throw InputError("vertex part out of range");
  if (!adj_.empty()) throw std::logic_error("add_vertex after finalize_vertices");
  vertices_.push_back({part, label});
  parts_[part].push_back(vertices_.size() - 1);
  return vertices_.size() - 1;
}

void PartiteGraph::finalize_vertices() { adj_.assign(vertices_.size(), Bitset(vertices_.size())); }

void PartiteGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) throw InputError("self loop");
  adj_[u].set(v);
  adj_[v].set(u);
}

std::size_t PartiteGraph::edge_count() const {
  std::size_t d = 0;
  for (const auto& a : adj_) d += a.count();
  return d / 2;
}

std::size_t PartiteGraph::find(std::size_t p, std::size_t label) const {
  if (p >= parts_.size()) return vertices_.size();
  const auto& ids = parts_[p];
  // Labels within a part are added in increasing order.
  const auto it = std::ranges::lower_bound(ids, label, {},
                                           [&](std::size_t id) { return vertices_[id].label; });
  return it != ids.end() && vertices_[*it].label == label ? *it : vertices_.size();
}

std::string PartiteGraph::part_name(std::size_t p) const {
  return p < row_parts_ ? "R" + std::to_string(p + 1) : "C" + std::to_string(p - row_parts_ + 1);
}

namespace {

void check_vertex_cap(std::size_t vertices, const Limits& limits) {
  if (vertices > limits.graph_vertex_cap) {
    throw BudgetExceeded("graph would have " + std::to_string(vertices) +
                         " vertices, over the cap of " + std::to_string(limits.graph_vertex_cap));
  }
}

/// Same-side edges between different parts, when `rule` allows them.
void connect_same_side(PartiteGraph& g, std::size_t first, std::size_t last,
                       const std::function<bool(std::size_t, std::size_t)>& rule) {
  for (std::size_t p = first; p < last; ++p) {
    for (std::size_t q = p + 1; q < last; ++q) {
      for (const auto u : g.part(p)) {
        for (const auto v : g.part(q)) {
          if (rule(g.vertex(u).label, g.vertex(v).label)) g.add_edge(u, v);
        }
      }
    }
  }
}

}  // namespace

PartiteGraph build_partite_graph(const DenseMatrix& matrix, const Pattern& pattern,
                                 const Limits& limits) {
  const std::size_t m = matrix.rows(), n = matrix.cols();
  const std::size_t s = pattern.rows(), t = pattern.cols();
  if (s > m || t > n) throw InputError("pattern does not fit inside the host matrix");
  check_vertex_cap(s * m + t * n, limits);
  PartiteGraph g(s, t);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t i = 1; i <= m; ++i) g.add_vertex(a, i);
  }
  for (std::size_t b = 0; b < t; ++b) {
    for (std::size_t j = 1; j <= n; ++j) g.add_vertex(s + b, j);
  }
  g.finalize_vertices();
  const auto differ = [](std::size_t x, std::size_t y) { return x != y; };
  connect_same_side(g, 0, s, differ);
  connect_same_side(g, s, s + t, differ);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < t; ++b) {
      const Symbol want = pattern(a + 1, b + 1);
      for (const auto u : g.part(a)) {
        for (const auto v : g.part(s + b)) {
          if (matrix(g.vertex(u).label, g.vertex(v).label) == want) g.add_edge(u, v);
        }
      }
    }
  }
  return g;
}

PartiteGraph build_separated_graph(const DenseMatrix& matrix, const Pattern& pattern,
                                   const SeparatorSet& sep, const Limits& limits) {
  const std::size_t m = matrix.rows(), n = matrix.cols();
  const std::size_t s = pattern.rows(), t = pattern.cols();
  sep.validate(m, n);
  if (sep.rows.size() + 1 != s || sep.cols.size() + 1 != t) {
    throw InputError("separator counts do not match the pattern shape");
  }
  check_vertex_cap(m + n, limits);
  PartiteGraph g(s, t);
  const auto bounds = IndexBounds::from_separators(sep, m, n);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t i = bounds.rows[a].first; i <= bounds.rows[a].second; ++i) g.add_vertex(a, i);
  }
  for (std::size_t b = 0; b < t; ++b) {
    for (std::size_t j = bounds.cols[b].first; j <= bounds.cols[b].second; ++j) {
      g.add_vertex(s + b, j);
    }
  }
  g.finalize_vertices();
  const auto always = [](std::size_t, std::size_t) { return true; };
  connect_same_side(g, 0, s, always);
  connect_same_side(g, s, s + t, always);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < t; ++b) {
      const Symbol want = pattern(a + 1, b + 1);
      for (const auto u : g.part(a)) {
        for (const auto v : g.part(s + b)) {
          if (matrix(g.vertex(u).label, g.vertex(v).label) == want) g.add_edge(u, v);
        }
      }
    }
  }
  return g;
}

CopyCount count_cliques(const PartiteGraph& graph, std::size_t k, const Limits& limits) {
  const std::size_t parts = graph.part_count();
  if (k != parts) {
    throw InputError("count_cliques counts cliques with one vertex per part; k must be " +
                     std::to_string(parts));
  }
  std::vector<Bitset> masks(parts, Bitset(graph.vertex_count()));
  for (std::size_t p = 0; p < parts; ++p) {
    for (const auto v : graph.part(p)) masks[p].set(v);
  }
  for (std::size_t p = 0; p < parts; ++p) {
    for (const auto v : graph.part(p)) {
      if (graph.neighbors(v).intersects(masks[p])) {
        throw std::logic_error("count_cliques: edge inside part " + graph.part_name(p));
      }
    }
  }

  CopyCount total;
  std::uint64_t nodes = 0;
  std::vector<Bitset> cand(parts + 1);
  cand[0] = Bitset(graph.vertex_count());
  cand[0].set_all();
  std::function<void(std::size_t)> extend = [&](std::size_t p) {
    if (++nodes > limits.node_budget) {
      throw BudgetExceeded("clique enumeration exceeded the node budget of " +
                           std::to_string(limits.node_budget));
    }
    if (p == parts) {
      total = checked_add(total, CopyCount::of(1));
      return;
    }
    for (const auto v : graph.part(p)) {
      if (!cand[p].test(v)) continue;
      cand[p + 1] = cand[p];
      cand[p + 1] &= graph.neighbors(v);
      // Prune when a later part has no candidate left.
      bool alive = true;
      for (std::size_t q = p + 1; q < parts && alive; ++q) alive = cand[p + 1].intersects(masks[q]);
      if (alive) extend(p + 1);
    }
  };
  if (parts == 0) return total;
  extend(0);
  return total;
}

CopyCount count_reordered_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                 const Limits& limits) {
  const std::size_t s = pattern.rows(), t = pattern.cols();
  if (s > matrix.rows() || t > matrix.cols()) return {};
  const auto reorderings = Reordering::all(s, t);
  CopyCount submatrices = checked_mul(binomial(matrix.rows(), s), binomial(matrix.cols(), t));
  const CopyCount work = checked_mul(submatrices, CopyCount::of(reorderings.size()));
  if (work.value > limits.enumeration_budget) {
    throw BudgetExceeded("count_reordered_copies needs " + work.str() +
                         " checks, over the enumeration budget");
  }
  CopyCount total;
  std::vector<std::size_t> rows(s), cols(t);
  // Odometer over strictly increasing tuples.
  auto first_tuple = [](std::vector<std::size_t>& v) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = k + 1;
  };
  auto next_tuple = [](std::vector<std::size_t>& v, std::size_t n) {
    std::size_t k = v.size();
    while (k > 0 && v[k - 1] == n - (v.size() - k)) --k;
    if (k == 0) return false;
    ++v[k - 1];
    for (std::size_t j = k; j < v.size(); ++j) v[j] = v[j - 1] + 1;
    return true;
  };
  first_tuple(rows);
  do {
    first_tuple(cols);
    do {
      const Pattern sub = extract_submatrix(matrix, {rows, cols});
      for (const auto& sigma : reorderings) {
        if (std::ranges::equal(apply_reordering(sub, sigma).entries(), pattern.entries())) {
          total = checked_add(total, CopyCount::of(1));
        }
      }
    } while (next_tuple(cols, matrix.cols()));
  } while (next_tuple(rows, matrix.rows()));
  return total;
}

std::vector<std::size_t> clique_of_copy(const PartiteGraph& graph, const SubmatrixIndex& copy) {
  if (copy.rows.size() != graph.row_parts() || copy.cols.size() != graph.col_parts()) {
    throw InputError("copy shape does not match the graph's parts");
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < copy.rows.size(); ++k) out.push_back(graph.find(k, copy.rows[k]));
  for (std::size_t l = 0; l < copy.cols.size(); ++l) {
    out.push_back(graph.find(graph.row_parts() + l, copy.cols[l]));
  }
  for (const auto v : out) {
    if (v == graph.vertex_count()) throw InputError("copy index has no vertex in its part");
  }
  return out;
}

bool is_clique(const PartiteGraph& graph, std::span<const std::size_t> vertices) {
  for (std::size_t x = 0; x < vertices.size(); ++x) {
    for (std::size_t y = x + 1; y < vertices.size(); ++y) {
      if (!graph.adjacent(vertices[x], vertices[y])) return false;
    }
  }
  return true;
}

bool edge_disjoint(std::span<const std::vector<std::size_t>> cliques) {
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (const auto& c : cliques) {
    for (std::size_t x = 0; x < c.size(); ++x) {
      for (std::size_t y = x + 1; y < c.size(); ++y) {
        const auto e = std::minmax(c[x], c[y]);
        if (!used.insert(e).second) return false;
      }
    }
  }
  return true;
}

bool cross_edge_disjoint(const PartiteGraph& graph,
                         std::span<const std::vector<std::size_t>> cliques) {
  const std::size_t s = graph.row_parts();
  std::set<std::pair<std::size_t, std::size_t>> used;
  for (const auto& c : cliques) {
    for (const auto u : c) {
      for (const auto v : c) {
        if (graph.vertex(u).part < s && graph.vertex(v).part >= s && !used.insert({u, v}).second) {
          return false;
        }
      }
    }
  }
  return true;
}

void write_graph(std::ostream& out, const PartiteGraph& graph) {
  out << "partite " << graph.row_parts() << ' ' << graph.col_parts() << '\n';
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    const auto& gv = graph.vertex(v);
    out << graph.part_name(gv.part) << ' ' << gv.label << " :";
    graph.neighbors(v).for_each([&](std::size_t u) {
      out << ' ' << graph.part_name(graph.vertex(u).part) << ':' << graph.vertex(u).label;
    });
    out << '\n';
  }
}

namespace {

std::size_t parse_size(std::string_view text, std::size_t line) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError(ParseErrorKind::kMalformedRecord, line,
                     "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_part(std::string_view name, std::size_t row_parts, std::size_t col_parts,
                       std::size_t line) {
  if (name.size() < 2 || (name[0] != 'R' && name[0] != 'C')) {
    throw ParseError(ParseErrorKind::kMalformedRecord, line,
                     "bad part name '" + std::string(name) + "'");
  }
  const std::size_t k = parse_size(name.substr(1), line);
  const std::size_t limit = name[0] == 'R' ? row_parts : col_parts;
  if (k < 1 || k > limit) {
    throw ParseError(ParseErrorKind::kMalformedRecord, line,
                     "part '" + std::string(name) + "' out of range");
  }
  return name[0] == 'R' ? k - 1 : row_parts + k - 1;
}

}  // namespace

PartiteGraph parse_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t row_parts = 0, col_parts = 0;
  {
    ++line_no;
    if (!std::getline(in, line)) {
      throw ParseError(ParseErrorKind::kMalformedHeader, 1, "missing 'partite' header");
    }
    std::istringstream hs(line);
    std::string word;
    if (!(hs >> word >> row_parts >> col_parts) || word != "partite") {
      throw ParseError(ParseErrorKind::kMalformedHeader, 1, "expected 'partite <s> <t>'");
    }
  }
  struct Pending {
    std::size_t line;
    std::vector<std::pair<std::size_t, std::size_t>> nbrs;
  };
  PartiteGraph g(row_parts, col_parts);
  std::vector<Pending> pending;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string part, label, colon;
    if (!(ls >> part >> label >> colon) || colon != ":") {
      throw ParseError(ParseErrorKind::kMalformedRecord, line_no,
                       "expected '<part> <label> : neighbors'");
    }
    const auto p = parse_part(part, row_parts, col_parts, line_no);
    g.add_vertex(p, parse_size(label, line_no));
    Pending pend{line_no, {}};
    std::string tok;
    while (ls >> tok) {
      const auto pos = tok.find(':');
      if (pos == std::string::npos) {
        throw ParseError(ParseErrorKind::kMalformedRecord, line_no, "bad neighbor '" + tok + "'");
      }
      pend.nbrs.emplace_back(parse_part(std::string_view(tok).substr(0, pos), row_parts,
                                        col_parts, line_no),
                             parse_size(std::string_view(tok).substr(pos + 1), line_no));
    }
    pending.push_back(std::move(pend));
  }
  g.finalize_vertices();
  for (std::size_t v = 0; v < pending.size(); ++v) {
    for (const auto& [p, label] : pending[v].nbrs) {
      const auto u = g.find(p, label);
      if (u == g.vertex_count()) {
        throw ParseError(ParseErrorKind::kMalformedRecord, pending[v].line,
                         "neighbor " + g.part_name(p) + ":" + std::to_string(label) +
                             " is not a vertex");
      }
      g.add_edge(v, u);
    }
  }
  return g;
}

}  // namespace removal
