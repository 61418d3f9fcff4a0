#pragma once

// Constructive procedures behind the removal arguments: strip assembly,
// the folding bound, separator extraction, row-permutation repair and the
// augmented-alphabet separator iteration. Every result carries enough data
// to be re-verified independently of the procedure that produced it.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "removal/config.hpp"
#include "removal/counting.hpp"
#include "removal/matrix.hpp"
#include "removal/packing.hpp"
#include "removal/rational.hpp"

namespace removal {

struct SeparatedPacking {
  Packing packing;
  SeparatorSet separators;
};

/// Copies match the pattern in `original`, are pairwise disjoint, and are
/// separated by the separators.
[[nodiscard]] bool verify_separated_packing(const DenseMatrix& original,
                                            const SeparatedPacking& sp);

// ---- strip removal ---------------------------------------------------------

struct StripWitness {
  /// groups[i] are the copies whose (i+1)-th column feeds position i+1.
  std::vector<std::vector<SubmatrixIndex>> groups;
};

struct StripBound {
  StripWitness witness;
  CopyCount lower_bound;
  /// Number of assembled submatrices checked against the pattern.
  std::size_t assembled_checked = 0;
  bool all_checked_match = true;
};

/// Splits a strip packing of size p into t groups of floor(p/t) copies, group
/// i taking the copies with the smallest i-th column among those left. Any
/// choice of one column per group assembles a copy, so the product of group
/// sizes is a lower bound. Assemblies are checked exhaustively up to
/// `check_cap`, otherwise on a deterministic subset of that size.
[[nodiscard]] StripBound strip_split_count(const DenseMatrix& strip, const Pattern& pattern,
                                           const Packing& packing,
                                           std::size_t check_cap = 100'000);

// ---- folding bound ---------------------------------------------------------

struct FoldingBoundReport {
  Pattern folded;  // rows equal to their predecessor removed
  CopyCount folded_count;
  CopyCount actual_count;
  double eps_prime = 0.0;  // folded_count / n^(s'+t)
  double delta = 0.0;      // eps' / (5 s s')
  /// eps' * delta^s * n^(s+t) / 2, the number of copies the argument promises.
  double predicted = 0.0;
  /// The same three quantities exactly, when they fit in 64-bit rationals.
  std::optional<Rational> eps_prime_exact;
  std::optional<Rational> delta_exact;
  std::optional<Rational> predicted_exact;
  bool holds = false;
};

[[nodiscard]] FoldingBoundReport folding_bound_check(const DenseMatrix& matrix,
                                                     const Pattern& pattern,
                                                     const Limits& limits = {});

// ---- separator extraction --------------------------------------------------

struct SeparationParams {
  /// Cap on the clusters used at each step.
  std::size_t r_max = 1024;
  /// When set, every step uses this delta instead of the recurrence
  /// delta_i = delta_{i-1}^2 / (20 r_i) started at the packing density.
  std::optional<Rational> constant_delta;
};

struct SeparationStep {
  Axis axis = Axis::kRow;
  std::size_t index = 0;  // i: separator x_i (or y_i) being placed
  Rational delta;         // delta_{i-1} used at this step
  bool delta_saturated = false;
  std::size_t clusters = 0;
  std::size_t good_lines = 0;
  std::size_t chosen_cluster_good = 0;
  std::size_t half = 0;  // |R^1| = |R^2|
  std::size_t separator = 0;
  std::size_t before = 0;
  std::size_t survivors = 0;
  /// The induction statement re-checked on the survivors.
  bool audit_ok = false;
};

enum class SeparationStatus { kSeparated, kDensityBranch, kPackingExhausted };

[[nodiscard]] std::string_view to_string(SeparationStatus status);

struct SeparationOutcome {
  SeparationStatus status = SeparationStatus::kPackingExhausted;
  std::optional<SeparatedPacking> result;
  std::vector<SeparationStep> audit;
  /// 1-based step at which the procedure stopped, 0 if it completed.
  std::size_t failed_step = 0;
  std::string message;
};

/// Places row separators x_1..x_{s-1}, then column separators, each by
/// clustering lines at delta/4, picking the cluster with the most lines that
/// carry the current row of >= delta*len/2 copies, splitting those good lines
/// into a lower and an upper half, and shifting the copies of the upper half
/// onto their partners in the lower half. Only shifted copies that still
/// match survive.
[[nodiscard]] SeparationOutcome separator_extraction(const DenseMatrix& matrix,
                                                     const Pattern& pattern,
                                                     const Packing& packing,
                                                     const SeparationParams& params = {});

// ---- row-permutation repair ------------------------------------------------

struct FamilyCopy {
  std::size_t member = 0;  // index into the family
  SubmatrixIndex copy;
  friend auto operator<=>(const FamilyCopy&, const FamilyCopy&) = default;
};

enum class RepairBranch { kEdit, kCopies, kDensityBranch };

[[nodiscard]] std::string_view to_string(RepairBranch branch);

struct RepairOutcome {
  RepairBranch branch = RepairBranch::kDensityBranch;
  std::optional<EditCertificate> edits;
  /// Copy branch: pairwise disjoint family copies in M coordinates, all on
  /// representative rows.
  std::vector<FamilyCopy> copies;

  std::size_t clusters = 0;
  std::vector<std::size_t> representatives;  // rows of Q
  std::size_t q_packing = 0;
  Rational packing_threshold;  // eps * n / (3k)
  std::size_t edit_budget = 0;  // ceil(5 eps m n / 6)
};

/// True if every member is unfoldable and the family is closed under row
/// permutations (as a set of matrices).
[[nodiscard]] bool is_closed_under_row_permutations(std::span<const Pattern> family);

/// Every distinct row permutation of every member, members in order.
[[nodiscard]] std::vector<Pattern> row_permutation_closure(std::span<const Pattern> family);

/// Throws InputError when the family is empty, not unfoldable or not closed
/// under row permutations.
[[nodiscard]] RepairOutcome row_perm_repair(const DenseMatrix& matrix,
                                            std::span<const Pattern> family, const Rational& eps,
                                            std::size_t r_max, const Limits& limits = {});

/// Re-checks whichever branch is present against `matrix` and the family.
[[nodiscard]] bool verify_repair(const DenseMatrix& matrix, std::span<const Pattern> family,
                                 const RepairOutcome& outcome, const Limits& limits = {});

/// Greedy disjoint packing across family members (members in order, copies
/// in lexicographic order within each member).
[[nodiscard]] std::vector<FamilyCopy> greedy_family_packing(const DenseMatrix& matrix,
                                                            std::span<const Pattern> family,
                                                            const Limits& limits = {});

// ---- augmented-alphabet iteration -----------------------------------------

struct AugmentedStep {
  Axis axis = Axis::kRow;
  std::size_t index = 0;
  std::size_t collected = 0;  // size of the wide collection before choosing x
  std::size_t separator = 0;
  std::size_t kept = 0;
};

struct AugmentedOutcome {
  SeparatedPacking separated;
  /// The final matrix over the augmented alphabet; alpha = original sigma.
  DenseMatrix final_matrix;
  std::vector<AugmentedStep> audit;
  /// A step found no copy of sufficient width (or kept none).
  bool width_branch_failed = false;
};

/// Starts from M_0 (packed copies kept, everything else alpha) and, per row
/// gap then per column gap, greedily collects copies of width >= threshold
/// that respect the earlier separators, blanking intersecting copies of the
/// previous collection; the separator is the value separating the most
/// collected copies (lowest on ties).
[[nodiscard]] AugmentedOutcome augmented_separator_iteration(
    const DenseMatrix& matrix, const Pattern& pattern, const Packing& packing,
    const Rational& width_threshold = Rational(0), const Limits& limits = {});

}  // namespace removal
