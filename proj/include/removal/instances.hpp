#pragma once

// Seeded instance generators shared by the CLI, the experiment harness and
// the tests. Each is a pure function of its arguments.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "removal/matrix.hpp"
#include "removal/packing.hpp"

namespace removal {

/// I.i.d. binary entries, each 1 with probability p.
[[nodiscard]] DenseMatrix random_binary(std::size_t m, std::size_t n, double p,
                                        std::uint64_t seed);

struct BlockInstance {
  DenseMatrix matrix;
  std::vector<std::size_t> row_class;  // row i -> class in [1, r]
  std::vector<std::size_t> col_class;
  std::size_t flipped = 0;
};

/// Random row classes (r of them) and column classes (c), a random symbol per
/// block, then every entry flipped independently with probability `noise`.
/// Every class is non-empty.
[[nodiscard]] BlockInstance block_structured(std::size_t m, std::size_t n, std::size_t r,
                                             std::size_t c, double noise, std::uint64_t seed);

/// Periodic tiling: M(i,j) = A((i-1) mod s + 1, (j-1) mod t + 1).
[[nodiscard]] DenseMatrix periodic_tiling(const Pattern& pattern, std::size_t m, std::size_t n);

/// Rows of the form 0^a 1^(n-a) with a random a per row. Such rows never
/// have a 1 before a 0, so neither [[1,0],[0,1]] nor [[0,1],[1,0]] occurs.
[[nodiscard]] DenseMatrix staircase(std::size_t m, std::size_t n, std::uint64_t seed);

/// A random binary base_m x base_m matrix blown up to n x n (base_m | n),
/// with the greedy packing of the base carried through the blowup. Rows
/// (and columns) come in identical runs of n / base_m.
[[nodiscard]] PlantedInstance blowup_instance(std::size_t base_m, std::size_t n, double p,
                                              const Pattern& pattern, std::uint64_t seed);

}  // namespace removal
