#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "removal/config.hpp"
#include "removal/matrix.hpp"
#include "removal/rational.hpp"

namespace removal {

/// Subset of [1, m] with no solution of x1 + x2 + x3 = 3 x4 other than
/// x1 = x2 = x3 = x4.
struct BehrendSet {
  std::size_t m = 0;
  std::vector<std::size_t> elements;
  /// How the set was obtained, e.g. "digits d=3 k=2 norm=2" or "greedy".
  std::string method;
};

/// Largest norm shell of digit vectors (digits < d, base 3d-2 so the
/// equation never carries), shifted into [1, m], over all (d, k) that fit;
/// replaced by the greedy scan of [1, m] when that is strictly larger.
/// Always verified before returning.
[[nodiscard]] BehrendSet behrend_set(std::size_t m);

/// Cubic check over x1 <= x2 <= x3 with membership lookup of x4.
[[nodiscard]] bool verify_solution_free(std::span<const std::size_t> xs);

/// 2x2 patterns of the lower-bound family: A = [[1,0],[0,1]], B = [[0,1],[1,0]].
[[nodiscard]] Pattern lb_pattern_a();
[[nodiscard]] Pattern lb_pattern_b();

struct LowerBoundInstance {
  std::size_t m = 0;
  BehrendSet behrend;
  DenseMatrix base;
  std::size_t q = 0;  // m |X| / 5
  CopySet planted;
};

/// The ternary m x m matrix with, for 1 <= i <= m/5 and x in X,
///   M(i, i+x) = M(m/2+i+2x, m/2+i+3x) = 1,
///   M(i, m/2+i+3x) = M(m/2+i+2x, i+x) = 0,
/// and 2 elsewhere. `verify` re-counts A and B copies (exact counting).
[[nodiscard]] LowerBoundInstance lower_bound_base(std::size_t m, const BehrendSet& xs,
                                                bool verify = true, const Limits& limits = {});

/// N(i,j) = base(ceil(i m / n), ceil(j m / n)) for a square base.
[[nodiscard]] DenseMatrix blowup(const DenseMatrix& base, std::size_t n);

/// The (n/m)^2 disjoint copies per base copy: rows b(r-1)+u, columns
/// b(c-1)+v for u, v in [b], b = n/m.
[[nodiscard]] CopySet blowup_packing(const CopySet& base_copies, std::size_t m, std::size_t n);

struct GapRow {
  std::size_t m = 0;
  std::size_t set_size = 0;
  Rational eps_hat;    // |X| / 5m
  Rational delta_hat;  // |X| / 5m^3
  Rational ratio;      // delta_hat / eps_hat
};

/// Rows sorted by m; each m must be a positive multiple of 10.
[[nodiscard]] std::vector<GapRow> gap_table(std::span<const std::size_t> m_values);

/// Header plus one line per row; exact rationals then decimals.
void write_gap_table_csv(std::ostream& out, std::span<const GapRow> rows);

}  // namespace removal
