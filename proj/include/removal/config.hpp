#pragma once

#include <cstddef>
#include <cstdint>

namespace removal {

/// Guardrails shared by the exact procedures. Every operation that can blow
/// up takes a `const Limits&` and refuses with BudgetExceeded rather than
/// approximating.
struct Limits {
  /// Patterns larger than this in either dimension are refused.
  std::size_t max_pattern_dim = 8;
  /// Cap on C(m,s) * n * t for the row-tuple sweeps.
  std::uint64_t count_work_budget = 4'000'000'000ULL;
  /// Cap on the number of copies materialized by an enumeration.
  std::uint64_t enumeration_budget = 50'000'000ULL;
  /// Exact packing and hitting-set solvers refuse above this many copies.
  std::size_t exact_copy_cap = 5000;
  /// Search-node cap for branch-and-bound and clique enumeration.
  std::uint64_t node_budget = 200'000'000ULL;
  /// Exact edit distance only runs when m and n are both at most this.
  std::size_t edit_max_dim = 8;
  /// Cap on total vertices of a partite encoding graph.
  std::size_t graph_vertex_cap = 8192;
};

}  // namespace removal
