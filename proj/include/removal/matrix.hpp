#pragma once

// Core data model: matrices over a finite alphabet, ordered submatrix
// indices, separators, reorderings and copy sets. All indices are 1-based,
// matching the [m] x [n] convention used throughout the library.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "removal/rational.hpp"

namespace removal {

using Symbol = std::uint8_t;

enum class Axis { kRow, kCol };

[[nodiscard]] std::string_view to_string(Axis axis);
[[nodiscard]] Axis parse_axis(std::string_view text);

/// Alphabet {0, ..., size-1}; 2 <= size <= 256.
class Alphabet {
 public:
  explicit Alphabet(unsigned size);

  [[nodiscard]] unsigned size() const { return size_; }
  [[nodiscard]] bool contains(unsigned symbol) const { return symbol < size_; }
  /// The alphabet with one extra symbol appended; the new symbol is size().
  [[nodiscard]] Alphabet augmented() const { return Alphabet(size_ + 1); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  unsigned size_;
};

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, Alphabet alphabet, std::vector<Symbol> entries);

  static DenseMatrix filled(std::size_t rows, std::size_t cols, Alphabet alphabet, Symbol value);
  /// Convenience for literals: {{1,0},{0,1}}.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows,
                               unsigned alphabet_size = 2);
  static DenseMatrix from_rows(const std::vector<std::vector<int>>& rows,
                               unsigned alphabet_size = 2);
  static DenseMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] std::span<const Symbol> entries() const { return entries_; }

  /// 1-based access, unchecked in release builds.
  [[nodiscard]] Symbol operator()(std::size_t i, std::size_t j) const {
    return entries_[(i - 1) * cols_ + (j - 1)];
  }
  /// 1-based access with bounds checking.
  [[nodiscard]] Symbol at(std::size_t i, std::size_t j) const;
  [[nodiscard]] std::span<const Symbol> row(std::size_t i) const {
    return {entries_.data() + (i - 1) * cols_, cols_};
  }

  void set(std::size_t i, std::size_t j, Symbol value);

  /// Same entries, viewed over a different (large enough) alphabet.
  [[nodiscard]] DenseMatrix with_alphabet(Alphabet alphabet) const;
  [[nodiscard]] DenseMatrix transposed() const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Alphabet alphabet_;
  std::vector<Symbol> entries_;
};

/// The small matrix being searched for. Shares the matrix representation.
using Pattern = DenseMatrix;

struct Cell {
  std::size_t row;
  std::size_t col;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Strictly increasing row and column lists selecting an ordered submatrix.
struct SubmatrixIndex {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  /// Throws InputError unless both lists are strictly increasing and in range.
  void validate(std::size_t m, std::size_t n) const;
  [[nodiscard]] std::vector<Cell> cells() const;

  friend auto operator<=>(const SubmatrixIndex&, const SubmatrixIndex&) = default;
};

/// Row separators x_1 < ... < x_{s-1} in [1, m-1] and column separators
/// y_1 < ... < y_{t-1} in [1, n-1].
struct SeparatorSet {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;

  void validate(std::size_t m, std::size_t n) const;

  friend bool operator==(const SeparatorSet&, const SeparatorSet&) = default;
};

/// A product of a row permutation and a column permutation, both given as
/// 1-based images: row k of the input moves to position row_perm[k-1].
struct Reordering {
  std::vector<std::size_t> row_perm;
  std::vector<std::size_t> col_perm;

  static Reordering identity(std::size_t s, std::size_t t);
  /// All s! * t! reorderings, rows-major in lexicographic permutation order.
  static std::vector<Reordering> all(std::size_t s, std::size_t t);
  void validate(std::size_t s, std::size_t t) const;

  friend bool operator==(const Reordering&, const Reordering&) = default;
};

/// (after o before): applying `before` and then `after`.
[[nodiscard]] Reordering compose(const Reordering& after, const Reordering& before);

struct CopySet {
  Pattern pattern;
  std::vector<SubmatrixIndex> copies;
  bool disjoint = false;
};

// ---- text formats ----------------------------------------------------------

/// Matrix text format: "m n sigma" header, then m lines of n symbols.
[[nodiscard]] DenseMatrix parse_matrix(std::istream& in);
[[nodiscard]] DenseMatrix parse_matrix(std::string_view text);
[[nodiscard]] std::string serialize_matrix(const DenseMatrix& matrix);
[[nodiscard]] DenseMatrix read_matrix_file(const std::string& path);

/// One copy per line: {"rows":[...],"cols":[...]}.
void write_copies_jsonl(std::ostream& out, std::span<const SubmatrixIndex> copies);
[[nodiscard]] std::vector<SubmatrixIndex> parse_copies_jsonl(std::istream& in);
[[nodiscard]] std::vector<SubmatrixIndex> parse_copies_jsonl(std::string_view text);

// ---- submatrix operations --------------------------------------------------

[[nodiscard]] Pattern extract_submatrix(const DenseMatrix& matrix, const SubmatrixIndex& idx);
[[nodiscard]] bool matches_at(const DenseMatrix& matrix, const SubmatrixIndex& idx,
                              const Pattern& pattern);

/// Deletes rows equal to their predecessor, then columns equal to theirs.
[[nodiscard]] Pattern fold(const Pattern& pattern);
/// Only the row half of fold().
[[nodiscard]] Pattern fold_rows(const Pattern& pattern);
[[nodiscard]] bool is_unfoldable(const Pattern& pattern);

/// r_i <= x_i < r_{i+1} for every row separator, likewise for columns.
[[nodiscard]] bool is_separated(const SubmatrixIndex& idx, const SeparatorSet& sep);

/// (idx[j+1] - idx[j]) / extent along the axis, with j 1-based.
[[nodiscard]] Rational copy_width(const SubmatrixIndex& idx, Axis axis, std::size_t j,
                                  std::size_t m, std::size_t n);

[[nodiscard]] Pattern apply_reordering(const Pattern& pattern, const Reordering& sigma);

/// Pairwise entry-disjointness of a list of copies.
[[nodiscard]] bool pairwise_disjoint(std::span<const SubmatrixIndex> copies);

/// Checks a CopySet against its invariants in `host`: every copy is valid
/// and equal to the pattern, and disjointness holds if claimed.
[[nodiscard]] bool verify_copy_set(const DenseMatrix& host, const CopySet& set);

}  // namespace removal
