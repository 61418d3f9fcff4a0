#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "removal/config.hpp"
#include "removal/matrix.hpp"
#include "removal/rational.hpp"

namespace removal {

/// Exact non-negative copy count with 128-bit capacity.
struct CopyCount {
  unsigned __int128 value = 0;

  static CopyCount of(std::uint64_t v) { return {v}; }
  [[nodiscard]] std::string str() const;
  [[nodiscard]] double to_double() const { return static_cast<double>(value); }
  [[nodiscard]] bool fits_u64() const { return value <= UINT64_MAX; }

  friend bool operator==(const CopyCount&, const CopyCount&) = default;
  friend auto operator<=>(const CopyCount& a, const CopyCount& b) {
    return a.value < b.value ? std::strong_ordering::less
           : a.value > b.value ? std::strong_ordering::greater
                               : std::strong_ordering::equal;
  }
};

/// Throws CountOverflow instead of wrapping.
[[nodiscard]] CopyCount checked_add(CopyCount a, CopyCount b);
[[nodiscard]] CopyCount checked_mul(CopyCount a, CopyCount b);
[[nodiscard]] CopyCount binomial(std::uint64_t n, std::uint64_t k);

/// Inclusive per-position index ranges; pattern row a may only map to a
/// host row in rows[a-1], likewise for columns. Empty vectors mean [1, m].
struct IndexBounds {
  std::vector<std::pair<std::size_t, std::size_t>> rows;
  std::vector<std::pair<std::size_t, std::size_t>> cols;

  /// The bands induced by separators: position i lives in (x_{i-1}, x_i].
  static IndexBounds from_separators(const SeparatorSet& sep, std::size_t m, std::size_t n);
};

struct DensityEstimate {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  [[nodiscard]] Rational point_estimate() const {
    return {static_cast<std::int64_t>(hits), static_cast<std::int64_t>(samples)};
  }
};

struct WidestCopy {
  SubmatrixIndex copy;
  Rational width;
};

/// Rejects patterns that do not fit the host or exceed the size guardrail,
/// and sweeps whose C(m,s)*n*t work estimate is over budget.
void check_sweep_budget(const DenseMatrix& matrix, const Pattern& pattern, const Limits& limits);

/// Number of index tuples whose submatrix equals the pattern. Enumerates row
/// tuples and runs a (t+1)-state prefix count over the columns.
[[nodiscard]] CopyCount count_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                     const Limits& limits = {});

/// count_copies restricted to the given per-position bands.
[[nodiscard]] CopyCount count_copies_within(const DenseMatrix& matrix, const Pattern& pattern,
                                            const IndexBounds& bounds,
                                            const Limits& limits = {});

/// Strip with exactly as many rows as the pattern: one left-to-right pass.
[[nodiscard]] CopyCount count_copies_in_strip(const DenseMatrix& strip, const Pattern& pattern,
                                              const Limits& limits = {});

/// Monte-Carlo copy density; sample k draws from its own counter stream
/// derive_seed(seed, k), so the result is a pure function of the arguments.
[[nodiscard]] DensityEstimate estimate_copy_density(const DenseMatrix& matrix,
                                                    const Pattern& pattern,
                                                    std::uint64_t samples, std::uint64_t seed);

[[nodiscard]] CopyCount count_separated_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                               const SeparatorSet& sep,
                                               const Limits& limits = {});

/// Copy maximizing the gap between consecutive indices j and j+1 along the
/// axis. Ties go to the lexicographically smallest (rows, cols) tuple.
[[nodiscard]] std::optional<WidestCopy> widest_copy(const DenseMatrix& matrix,
                                                    const Pattern& pattern, Axis axis,
                                                    std::size_t j, const Limits& limits = {});

[[nodiscard]] std::optional<WidestCopy> widest_copy_within(const DenseMatrix& matrix,
                                                           const Pattern& pattern, Axis axis,
                                                           std::size_t j,
                                                           const IndexBounds& bounds,
                                                           const Limits& limits = {});

/// Visits every copy in lexicographic (rows, cols) order until the visitor
/// returns false. Throws BudgetExceeded past limits.enumeration_budget copies.
void for_each_copy(const DenseMatrix& matrix, const Pattern& pattern,
                   const std::function<bool(const SubmatrixIndex&)>& visit,
                   const Limits& limits = {});

[[nodiscard]] std::vector<SubmatrixIndex> enumerate_copies(const DenseMatrix& matrix,
                                                           const Pattern& pattern,
                                                           const Limits& limits = {});

/// Lexicographically smallest copy, if any.
[[nodiscard]] std::optional<SubmatrixIndex> first_copy(const DenseMatrix& matrix,
                                                       const Pattern& pattern,
                                                       const Limits& limits = {});

}  // namespace removal
