#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "removal/config.hpp"
#include "removal/matrix.hpp"

namespace removal {

struct Packing {
  CopySet copy_set;
  /// True when no remaining copy is disjoint from all selected ones.
  bool maximal = false;

  [[nodiscard]] std::size_t size() const { return copy_set.copies.size(); }
};

struct HittingSet {
  std::vector<Cell> entries;
};

struct Edit {
  std::size_t row;
  std::size_t col;
  Symbol symbol;
  friend bool operator==(const Edit&, const Edit&) = default;
};

struct EditCertificate {
  std::vector<Edit> edits;
  /// Whether the edited matrix was verified to contain no family copy.
  bool free = false;
};

struct EditDistance {
  std::size_t distance = 0;
  EditCertificate certificate;
};

struct PlantedInstance {
  DenseMatrix matrix;
  Packing packing;
};

/// Scans copies in lexicographic order, taking each one disjoint from all
/// previously taken copies.
[[nodiscard]] Packing greedy_maximal_packing(const DenseMatrix& matrix, const Pattern& pattern,
                                             const Limits& limits = {});

/// Maximum disjoint packing by branch-and-bound on the copy conflict graph.
/// Refuses with BudgetExceeded above limits.exact_copy_cap copies.
[[nodiscard]] Packing exact_max_packing(const DenseMatrix& matrix, const Pattern& pattern,
                                        const Limits& limits = {});

/// Minimum set of entries meeting every copy.
[[nodiscard]] HittingSet exact_min_hitting_set(const DenseMatrix& matrix, const Pattern& pattern,
                                               const Limits& limits = {});

/// Fewest entry rewrites (to any symbol) that remove every copy of every
/// family member. Only runs on matrices up to limits.edit_max_dim per side.
[[nodiscard]] EditDistance exact_edit_distance_to_freeness(const DenseMatrix& matrix,
                                                           std::span<const Pattern> family,
                                                           const Limits& limits = {});

/// Random background (symbol k drawn with weight background[k]) with
/// `target` pairwise-disjoint copies written in at rejection-sampled
/// positions. Placement is not uniform over packings.
[[nodiscard]] PlantedInstance plant_disjoint_copies(std::size_t m, std::size_t n,
                                                    const Pattern& pattern, std::size_t target,
                                                    std::span<const double> background,
                                                    std::uint64_t seed,
                                                    std::size_t retry_factor = 100);

[[nodiscard]] DenseMatrix apply_edits(const DenseMatrix& matrix, std::span<const Edit> edits);

[[nodiscard]] bool hits_every_copy(const DenseMatrix& matrix, const Pattern& pattern,
                                   const HittingSet& hitting, const Limits& limits = {});

/// True if no copy of the pattern is disjoint from every listed copy.
[[nodiscard]] bool is_maximal_packing(const DenseMatrix& matrix, const Pattern& pattern,
                                      std::span<const SubmatrixIndex> copies,
                                      const Limits& limits = {});

/// Verifies the disjoint-packing invariants in `host`.
[[nodiscard]] bool verify_packing(const DenseMatrix& host, const Packing& packing);

}  // namespace removal
