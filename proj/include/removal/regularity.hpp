#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "removal/config.hpp"
#include "removal/counting.hpp"
#include "removal/matrix.hpp"
#include "removal/rational.hpp"

namespace removal {

enum class CenterRule {
  kLowestIndex,
  /// Next center is the unassigned line farthest from all earlier centers.
  kFarthestFirst,
};

/// A (delta, r)-clustering of the rows or columns: clusters[0..r-1] are
/// R_1..R_r, error_cluster is R_0. All index lists are sorted, 1-based.
struct Clustering {
  Axis axis = Axis::kRow;
  Rational delta;
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> error_cluster;

  [[nodiscard]] std::size_t r() const { return clusters.size(); }
};

/// Greedy clustering. A center is picked, then every unassigned line (in
/// index order) joins if it is within floor(delta * len) of every line
/// already in the cluster. Stops after r_max clusters; leftovers form R_0.
/// Returns nullopt when |R_0| > delta * count.
[[nodiscard]] std::optional<Clustering> clustering(const DenseMatrix& matrix, Axis axis,
                                                   const Rational& delta, std::size_t r_max,
                                                   CenterRule rule = CenterRule::kLowestIndex);

/// Independent check of the clustering invariants by pairwise comparison.
[[nodiscard]] bool satisfies_clustering_invariants(const DenseMatrix& matrix,
                                                   const Clustering& c);

/// Hamming distance between two rows (or two columns) of `matrix`.
[[nodiscard]] std::size_t line_distance(const DenseMatrix& matrix, Axis axis, std::size_t a,
                                        std::size_t b);

struct BlockPartition {
  std::vector<std::vector<std::size_t>> row_classes;
  std::vector<std::vector<std::size_t>> col_classes;
};

/// Row classes R_0, R_1, ..., R_r with empty classes dropped; same for columns.
[[nodiscard]] BlockPartition clusterings_to_partition(const Clustering& rows,
                                                      const Clustering& cols);

struct BlockStat {
  std::size_t row_class = 0;
  std::size_t col_class = 0;
  Symbol value = 0;  // majority symbol, smallest on ties
  std::size_t size = 0;
  std::size_t mismatches = 0;
  Rational impurity;
  bool homogeneous = false;
};

struct PartitionReport {
  Rational delta;
  Rational homogeneous_fraction;
  std::vector<BlockStat> blocks;
};

/// Throws InputError unless the classes partition [m] and [n].
[[nodiscard]] PartitionReport verify_partition(const DenseMatrix& matrix,
                                               const BlockPartition& partition,
                                               const Rational& delta);

struct PatternDensity {
  Pattern pattern;
  DensityEstimate estimate;
};

struct DichotomyReport {
  std::size_t k = 0;
  Rational delta;
  std::optional<Clustering> rows;
  std::optional<Clustering> cols;
  /// Set when either clustering failed and densities were estimated.
  bool density_branch = false;
  /// True when k > 2 and only a seeded sample of patterns was examined.
  bool sampled_patterns = false;
  std::vector<PatternDensity> densities;
  /// Index into densities of the smallest estimate.
  std::optional<std::size_t> argmin;

  [[nodiscard]] bool clustering_branch() const { return rows && cols; }
};

/// Runs clustering on both axes; when either fails, estimates the k x k copy
/// density of every binary pattern (k <= 2) or of `pattern_samples` seeded
/// random patterns (k > 2).
[[nodiscard]] DichotomyReport dichotomy_probe(const DenseMatrix& matrix, std::size_t k,
                                              const Rational& delta, std::size_t r_max,
                                              std::uint64_t samples, std::uint64_t seed,
                                              std::size_t pattern_samples = 64,
                                              const Limits& limits = {});

}  // namespace removal
