#include "removal/regularity.hpp"

#include <algorithm>
#include <string>

#include "removal/bitset.hpp"
#include "removal/errors.hpp"
#include "removal/rng.hpp"

namespace removal {
namespace {

/// Lines of one axis, bit-packed when the alphabet is binary.
class LineStore {
 public:
  LineStore(const DenseMatrix& matrix, Axis axis)
      : count_(axis == Axis::kRow ? matrix.rows() : matrix.cols()),
        length_(axis == Axis::kRow ? matrix.cols() : matrix.rows()),
        binary_(matrix.alphabet().size() == 2) {
    auto entry = [&](std::size_t line, std::size_t pos) {
      return axis == Axis::kRow ? matrix(line, pos) : matrix(pos, line);
    };
    if (binary_) {
      bits_.assign(count_, Bitset(length_));
      for (std::size_t l = 1; l <= count_; ++l) {
        for (std::size_t p = 1; p <= length_; ++p) {
          if (entry(l, p) != 0) bits_[l - 1].set(p - 1);
        }
      }
    } else {
      symbols_.assign(count_, std::vector<Symbol>(length_));
      for (std::size_t l = 1; l <= count_; ++l) {
        for (std::size_t p = 1; p <= length_; ++p) symbols_[l - 1][p - 1] = entry(l, p);
      }
    }
  }

  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] std::size_t length() const { return length_; }

  /// 1-based line indices.
  [[nodiscard]] std::size_t distance(std::size_t a, std::size_t b) const {
    if (binary_) return bits_[a - 1].xor_count(bits_[b - 1]);
    std::size_t d = 0;
    const auto& x = symbols_[a - 1];
    const auto& y = symbols_[b - 1];
    for (std::size_t p = 0; p < length_; ++p) d += x[p] != y[p] ? 1 : 0;
    return d;
  }

 private:
  std::size_t count_;
  std::size_t length_;
  bool binary_;
  std::vector<Bitset> bits_;
  std::vector<std::vector<Symbol>> symbols_;
};

void check_delta(const Rational& delta) {
  if (delta <= Rational(0) || delta > Rational(1)) {
    throw InputError("delta must lie in (0, 1], got " + delta.str());
  }
}

void check_classes(const std::vector<std::vector<std::size_t>>& classes, std::size_t n,
                   const char* what) {
  std::vector<char> seen(n + 1, 0);
  std::size_t total = 0;
  for (const auto& c : classes) {
    for (const auto i : c) {
      if (i < 1 || i > n || seen[i]) {
        throw InputError(std::string(what) + " classes do not partition [1, " +
                         std::to_string(n) + "]");
      }
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n) {
    throw InputError(std::string(what) + " classes do not cover [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

std::size_t line_distance(const DenseMatrix& matrix, Axis axis, std::size_t a, std::size_t b) {
  std::size_t d = 0;
  if (axis == Axis::kRow) {
    for (std::size_t j = 1; j <= matrix.cols(); ++j) d += matrix(a, j) != matrix(b, j) ? 1 : 0;
  } else {
    for (std::size_t i = 1; i <= matrix.rows(); ++i) d += matrix(i, a) != matrix(i, b) ? 1 : 0;
  }
  return d;
}

std::optional<Clustering> clustering(const DenseMatrix& matrix, Axis axis, const Rational& delta,
                                     std::size_t r_max, CenterRule rule) {
  check_delta(delta);
  if (r_max < 1) throw InputError("r_max must be at least 1");
  const LineStore lines(matrix, axis);
  const std::size_t count = lines.count();
  const auto radius = static_cast<std::size_t>(delta.floor_times(
      static_cast<std::int64_t>(lines.length())));

  Clustering out{axis, delta, {}, {}};
  std::vector<char> assigned(count + 1, 0);
  std::vector<std::size_t> centers;
  // For farthest-first: distance from each line to its nearest center.
  std::vector<std::size_t> nearest(count + 1, SIZE_MAX);
  std::size_t left = count;

  while (left > 0 && out.clusters.size() < r_max) {
    std::size_t center = 0;
    if (rule == CenterRule::kFarthestFirst && !centers.empty()) {
      std::size_t far = 0;
      for (std::size_t l = 1; l <= count; ++l) {
        if (!assigned[l] && (center == 0 || nearest[l] > far)) {
          center = l;
          far = nearest[l];
        }
      }
    } else {
      for (std::size_t l = 1; l <= count && center == 0; ++l) {
        if (!assigned[l]) center = l;
      }
    }
    centers.push_back(center);
    std::vector<std::size_t> members{center};
    assigned[center] = 1;
    --left;
    for (std::size_t l = 1; l <= count; ++l) {
      if (assigned[l]) continue;
      const bool fits = std::ranges::all_of(
          members, [&](std::size_t u) { return lines.distance(u, l) <= radius; });
      if (fits) {
        members.push_back(l);
        assigned[l] = 1;
        --left;
      }
    }
    std::ranges::sort(members);
    out.clusters.push_back(std::move(members));
    if (rule == CenterRule::kFarthestFirst) {
      for (std::size_t l = 1; l <= count; ++l) {
        if (!assigned[l]) nearest[l] = std::min(nearest[l], lines.distance(center, l));
      }
    }
  }
  for (std::size_t l = 1; l <= count; ++l) {
    if (!assigned[l]) out.error_cluster.push_back(l);
  }
  if (Rational(static_cast<std::int64_t>(out.error_cluster.size())) >
      delta * Rational(static_cast<std::int64_t>(count))) {
    return std::nullopt;
  }
  return out;
}

bool satisfies_clustering_invariants(const DenseMatrix& matrix, const Clustering& c) {
  const std::size_t count = c.axis == Axis::kRow ? matrix.rows() : matrix.cols();
  const std::size_t length = c.axis == Axis::kRow ? matrix.cols() : matrix.rows();
  std::vector<std::vector<std::size_t>> all = c.clusters;
  all.push_back(c.error_cluster);
  try {
    check_classes(all, count, "clustering");
  } catch (const InputError&) {
    return false;
  }
  const Rational bound = c.delta * Rational(static_cast<std::int64_t>(length));
  for (const auto& cluster : c.clusters) {
    for (std::size_t x = 0; x < cluster.size(); ++x) {
      for (std::size_t y = x + 1; y < cluster.size(); ++y) {
        const auto d = line_distance(matrix, c.axis, cluster[x], cluster[y]);
        if (Rational(static_cast<std::int64_t>(d)) > bound) return false;
      }
    }
  }
  return Rational(static_cast<std::int64_t>(c.error_cluster.size())) <=
         c.delta * Rational(static_cast<std::int64_t>(count));
}

BlockPartition clusterings_to_partition(const Clustering& rows, const Clustering& cols) {
  if (rows.axis != Axis::kRow || cols.axis != Axis::kCol) {
    throw InputError("clusterings_to_partition needs a row clustering and a column clustering");
  }
  auto classes = [](const Clustering& c) {
    std::vector<std::vector<std::size_t>> out;
    if (!c.error_cluster.empty()) out.push_back(c.error_cluster);
    for (const auto& k : c.clusters) {
      if (!k.empty()) out.push_back(k);
    }
    return out;
  };
  return {classes(rows), classes(cols)};
}

PartitionReport verify_partition(const DenseMatrix& matrix, const BlockPartition& partition,
                                 const Rational& delta) {
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  check_classes(partition.row_classes, m, "row");
  check_classes(partition.col_classes, n, "column");
  const std::size_t rc = partition.row_classes.size();
  const std::size_t cc = partition.col_classes.size();
  const std::size_t sigma = matrix.alphabet().size();

  std::vector<std::size_t> row_of(m + 1), col_of(n + 1);
  for (std::size_t k = 0; k < rc; ++k) {
    for (const auto i : partition.row_classes[k]) row_of[i] = k;
  }
  for (std::size_t k = 0; k < cc; ++k) {
    for (const auto j : partition.col_classes[k]) col_of[j] = k;
  }
  std::vector<std::size_t> tally(rc * cc * sigma, 0);
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      ++tally[(row_of[i] * cc + col_of[j]) * sigma + matrix(i, j)];
    }
  }

  PartitionReport report{delta, Rational(0), {}};
  std::int64_t good = 0;
  for (std::size_t a = 0; a < rc; ++a) {
    for (std::size_t b = 0; b < cc; ++b) {
      const auto* t = &tally[(a * cc + b) * sigma];
      BlockStat s;
      s.row_class = a;
      s.col_class = b;
      s.size = partition.row_classes[a].size() * partition.col_classes[b].size();
      std::size_t top = 0;
      for (std::size_t v = 0; v < sigma; ++v) {
        if (t[v] > top) {
          top = t[v];
          s.value = static_cast<Symbol>(v);
        }
      }
      s.mismatches = s.size - top;
      s.impurity = Rational(static_cast<std::int64_t>(s.mismatches),
                            static_cast<std::int64_t>(s.size));
      s.homogeneous = s.impurity <= delta;
      if (s.homogeneous) good += static_cast<std::int64_t>(s.size);
      report.blocks.push_back(s);
    }
  }
  report.homogeneous_fraction = Rational(good, static_cast<std::int64_t>(m * n));
  return report;
}

DichotomyReport dichotomy_probe(const DenseMatrix& matrix, std::size_t k, const Rational& delta,
                                std::size_t r_max, std::uint64_t samples, std::uint64_t seed,
                                std::size_t pattern_samples, const Limits& limits) {
  if (matrix.alphabet().size() != 2) throw InputError("dichotomy_probe needs a binary matrix");
  if (k < 1 || k > limits.max_pattern_dim) {
    throw BudgetExceeded("dichotomy_probe: k must lie in [1, " +
                         std::to_string(limits.max_pattern_dim) + "]");
  }
  if (k > matrix.rows() || k > matrix.cols()) throw InputError("dichotomy_probe: k exceeds M");
  if (samples < 1) throw InputError("dichotomy_probe: samples must be positive");

  DichotomyReport report;
  report.k = k;
  report.delta = delta;
  report.rows = clustering(matrix, Axis::kRow, delta, r_max);
  report.cols = clustering(matrix, Axis::kCol, delta, r_max);
  if (report.clustering_branch()) return report;

  report.density_branch = true;
  std::vector<Pattern> patterns;
  if (k <= 2) {
    const std::size_t cells = k * k;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
      std::vector<Symbol> e(cells);
      for (std::size_t c = 0; c < cells; ++c) e[c] = static_cast<Symbol>((code >> c) & 1U);
      patterns.emplace_back(k, k, Alphabet(2), std::move(e));
    }
  } else {
    report.sampled_patterns = true;
    CounterRng rng(seed, 0xd1c0);
    for (std::size_t p = 0; p < pattern_samples; ++p) {
      std::vector<Symbol> e(k * k);
      for (auto& x : e) x = static_cast<Symbol>(rng.uniform(2));
      patterns.emplace_back(k, k, Alphabet(2), std::move(e));
    }
  }
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    auto est = estimate_copy_density(matrix, patterns[p], samples, derive_seed(seed, p));
    if (!report.argmin || est.point_estimate() < report.densities[*report.argmin].estimate.point_estimate()) {
      report.argmin = p;
    }
    report.densities.push_back({std::move(patterns[p]), est});
  }
  return report;
}

}  // namespace removal
