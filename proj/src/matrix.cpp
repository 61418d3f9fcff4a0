#include "removal/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "removal/errors.hpp"

namespace removal {

std::string_view to_string(Axis axis) { return axis == Axis::kRow ? "row" : "col"; }

Axis parse_axis(std::string_view text) {
  if (text == "row" || text == "rows") return Axis::kRow;
  if (text == "col" || text == "cols" || text == "column") return Axis::kCol;
  throw InputError("unknown axis '" + std::string(text) + "'");
}

Alphabet::Alphabet(unsigned size) : size_(size) {
  if (size < 2 || size > 256) {
    throw InputError("alphabet size must be in [2, 256], got " + std::to_string(size));
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Alphabet alphabet,
                         std::vector<Symbol> entries)
    : rows_(rows), cols_(cols), alphabet_(alphabet), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw InputError("matrix dimensions must be positive");
  if (entries_.size() != rows * cols) {
    throw InputError("matrix needs " + std::to_string(rows * cols) + " entries, got " +
                     std::to_string(entries_.size()));
  }
  for (const Symbol s : entries_) {
    if (!alphabet_.contains(s)) {
      throw InputError("symbol " + std::to_string(s) + " outside alphabet of size " +
                       std::to_string(alphabet_.size()));
    }
  }
}

DenseMatrix DenseMatrix::filled(std::size_t rows, std::size_t cols, Alphabet alphabet,
                                Symbol value) {
  return {rows, cols, alphabet, std::vector<Symbol>(rows * cols, value)};
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows,
                                   unsigned alphabet_size) {
  std::vector<std::vector<int>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy, alphabet_size);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<int>>& rows,
                                   unsigned alphabet_size) {
  if (rows.empty()) throw InputError("matrix needs at least one row");
  const std::size_t cols = rows.front().size();
  std::vector<Symbol> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InputError("ragged row list");
    for (const int v : r) {
      if (v < 0 || v > 255) throw InputError("symbol out of range");
      entries.push_back(static_cast<Symbol>(v));
    }
  }
  return {rows.size(), cols, Alphabet(alphabet_size), std::move(entries)};
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m = filled(n, n, Alphabet(2), 0);
  for (std::size_t i = 1; i <= n; ++i) m.set(i, i, 1);
  return m;
}

Symbol DenseMatrix::at(std::size_t i, std::size_t j) const {
  if (i < 1 || i > rows_ || j < 1 || j > cols_) {
    throw InputError("index (" + std::to_string(i) + "," + std::to_string(j) +
                     ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return (*this)(i, j);
}

void DenseMatrix::set(std::size_t i, std::size_t j, Symbol value) {
  if (i < 1 || i > rows_ || j < 1 || j > cols_) throw InputError("set: index out of range");
  if (!alphabet_.contains(value)) throw InputError("set: symbol outside alphabet");
  entries_[(i - 1) * cols_ + (j - 1)] = value;
}

DenseMatrix DenseMatrix::with_alphabet(Alphabet alphabet) const {
  return {rows_, cols_, alphabet, entries_};
}

DenseMatrix DenseMatrix::transposed() const {
  std::vector<Symbol> out(entries_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[j * rows_ + i] = entries_[i * cols_ + j];
  }
  return {cols_, rows_, alphabet_, std::move(out)};
}

// ---- index types -----------------------------------------------------------

namespace {

void check_increasing(const std::vector<std::size_t>& v, std::size_t lo, std::size_t hi,
                      const char* what) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < lo || v[k] > hi) {
      throw InputError(std::string(what) + " value " + std::to_string(v[k]) + " outside [" +
                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (k > 0 && v[k] <= v[k - 1]) {
      throw InputError(std::string(what) + " list must be strictly increasing");
    }
  }
}

}  // namespace

void SubmatrixIndex::validate(std::size_t m, std::size_t n) const {
  if (rows.empty() || cols.empty()) throw InputError("submatrix index needs rows and columns");
  check_increasing(rows, 1, m, "row index");
  check_increasing(cols, 1, n, "column index");
}

std::vector<Cell> SubmatrixIndex::cells() const {
  std::vector<Cell> out;
  out.reserve(rows.size() * cols.size());
  for (const auto r : rows) {
    for (const auto c : cols) out.push_back({r, c});
  }
  return out;
}

void SeparatorSet::validate(std::size_t m, std::size_t n) const {
  if (!rows.empty()) check_increasing(rows, 1, m - 1, "row separator");
  if (!cols.empty()) check_increasing(cols, 1, n - 1, "column separator");
}

Reordering Reordering::identity(std::size_t s, std::size_t t) {
  Reordering r;
  r.row_perm.resize(s);
  r.col_perm.resize(t);
  std::iota(r.row_perm.begin(), r.row_perm.end(), std::size_t{1});
  std::iota(r.col_perm.begin(), r.col_perm.end(), std::size_t{1});
  return r;
}

std::vector<Reordering> Reordering::all(std::size_t s, std::size_t t) {
  std::vector<Reordering> out;
  Reordering base = identity(s, t);
  std::vector<std::size_t> rp = base.row_perm;
  do {
    std::vector<std::size_t> cp = base.col_perm;
    do {
      out.push_back({rp, cp});
    } while (std::next_permutation(cp.begin(), cp.end()));
  } while (std::next_permutation(rp.begin(), rp.end()));
  return out;
}

void Reordering::validate(std::size_t s, std::size_t t) const {
  auto check = [](const std::vector<std::size_t>& p, std::size_t k, const char* what) {
    if (p.size() != k) throw InputError(std::string(what) + " permutation has wrong length");
    std::vector<bool> seen(k + 1, false);
    for (const auto v : p) {
      if (v < 1 || v > k || seen[v]) throw InputError(std::string(what) + " is not a permutation");
      seen[v] = true;
    }
  };
  check(row_perm, s, "row");
  check(col_perm, t, "column");
}

Reordering compose(const Reordering& after, const Reordering& before) {
  if (after.row_perm.size() != before.row_perm.size() ||
      after.col_perm.size() != before.col_perm.size()) {
    throw InputError("compose: reordering shapes differ");
  }
  Reordering out;
  for (const auto v : before.row_perm) out.row_perm.push_back(after.row_perm[v - 1]);
  for (const auto v : before.col_perm) out.col_perm.push_back(after.col_perm[v - 1]);
  return out;
}

// ---- text formats ----------------------------------------------------------

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_uint(std::string_view tok, unsigned long long& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc{} && ptr == tok.data() + tok.size();
}

}  // namespace

DenseMatrix parse_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 1, "missing header line");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_ws(line);
  unsigned long long m = 0, n = 0, sigma = 0;
  if (header.size() != 3 || !parse_uint(header[0], m) || !parse_uint(header[1], n) ||
      !parse_uint(header[2], sigma) || m == 0 || n == 0 || sigma < 2 || sigma > 256) {
    throw ParseError(ParseErrorKind::kMalformedHeader, 1,
                     "header must be 'm n sigma' with m,n >= 1 and 2 <= sigma <= 256");
  }
  std::vector<Symbol> entries;
  entries.reserve(m * n);
  std::size_t rows_read = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty()) {
      // Blank lines are only tolerated after the last row.
      if (rows_read == m) continue;
      throw ParseError(ParseErrorKind::kRowLengthMismatch, line_no, "empty matrix row");
    }
    if (rows_read == m) {
      throw ParseError(ParseErrorKind::kRowCountMismatch, line_no,
                       "more than " + std::to_string(m) + " rows");
    }
    if (toks.size() != n) {
      throw ParseError(ParseErrorKind::kRowLengthMismatch, line_no,
                       "expected " + std::to_string(n) + " symbols, got " +
                           std::to_string(toks.size()));
    }
    for (const auto tok : toks) {
      unsigned long long v = 0;
      if (!parse_uint(tok, v)) {
        throw ParseError(ParseErrorKind::kMalformedSymbol, line_no,
                         "bad symbol '" + std::string(tok) + "'");
      }
      if (v >= sigma) {
        throw ParseError(ParseErrorKind::kSymbolOutOfRange, line_no,
                         "symbol " + std::to_string(v) + " exceeds alphabet " +
                             std::to_string(sigma));
      }
      entries.push_back(static_cast<Symbol>(v));
    }
    ++rows_read;
  }
  if (rows_read != m) {
    throw ParseError(ParseErrorKind::kRowCountMismatch, line_no,
                     "expected " + std::to_string(m) + " rows, got " + std::to_string(rows_read));
  }
  return {m, n, Alphabet(static_cast<unsigned>(sigma)), std::move(entries)};
}

DenseMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matrix(in);
}

std::string serialize_matrix(const DenseMatrix& matrix) {
  std::string out = std::to_string(matrix.rows()) + " " + std::to_string(matrix.cols()) + " " +
                    std::to_string(matrix.alphabet().size()) + "\n";
  for (std::size_t i = 1; i <= matrix.rows(); ++i) {
    for (std::size_t j = 1; j <= matrix.cols(); ++j) {
      if (j > 1) out += ' ';
      out += std::to_string(matrix(i, j));
    }
    out += '\n';
  }
  return out;
}

DenseMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  return parse_matrix(in);
}

void write_copies_jsonl(std::ostream& out, std::span<const SubmatrixIndex> copies) {
  for (const auto& c : copies) {
    nlohmann::json j = {{"rows", c.rows}, {"cols", c.cols}};
    out << j.dump() << '\n';
  }
}

std::vector<SubmatrixIndex> parse_copies_jsonl(std::istream& in) {
  std::vector<SubmatrixIndex> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SubmatrixIndex idx;
      idx.rows = j.at("rows").get<std::vector<std::size_t>>();
      idx.cols = j.at("cols").get<std::vector<std::size_t>>();
      out.push_back(std::move(idx));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(ParseErrorKind::kMalformedRecord, line_no, e.what());
    }
  }
  return out;
}

std::vector<SubmatrixIndex> parse_copies_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_copies_jsonl(in);
}

// ---- submatrix operations --------------------------------------------------

Pattern extract_submatrix(const DenseMatrix& matrix, const SubmatrixIndex& idx) {
  idx.validate(matrix.rows(), matrix.cols());
  std::vector<Symbol> entries;
  entries.reserve(idx.rows.size() * idx.cols.size());
  for (const auto r : idx.rows) {
    for (const auto c : idx.cols) entries.push_back(matrix(r, c));
  }
  return {idx.rows.size(), idx.cols.size(), matrix.alphabet(), std::move(entries)};
}

bool matches_at(const DenseMatrix& matrix, const SubmatrixIndex& idx, const Pattern& pattern) {
  if (idx.rows.size() != pattern.rows() || idx.cols.size() != pattern.cols()) {
    throw InputError("matches_at: index shape differs from pattern shape");
  }
  idx.validate(matrix.rows(), matrix.cols());
  for (std::size_t a = 1; a <= pattern.rows(); ++a) {
    for (std::size_t b = 1; b <= pattern.cols(); ++b) {
      if (matrix(idx.rows[a - 1], idx.cols[b - 1]) != pattern(a, b)) return false;
    }
  }
  return true;
}

Pattern fold_rows(const Pattern& pattern) {
  std::vector<Symbol> entries;
  std::size_t kept = 0;
  for (std::size_t i = 1; i <= pattern.rows(); ++i) {
    if (i > 1 && std::ranges::equal(pattern.row(i), pattern.row(i - 1))) continue;
    const auto r = pattern.row(i);
    entries.insert(entries.end(), r.begin(), r.end());
    ++kept;
  }
  return {kept, pattern.cols(), pattern.alphabet(), std::move(entries)};
}

Pattern fold(const Pattern& pattern) {
  return fold_rows(fold_rows(pattern).transposed()).transposed();
}

bool is_unfoldable(const Pattern& pattern) {
  for (std::size_t i = 2; i <= pattern.rows(); ++i) {
    if (std::ranges::equal(pattern.row(i), pattern.row(i - 1))) return false;
  }
  for (std::size_t j = 2; j <= pattern.cols(); ++j) {
    bool same = true;
    for (std::size_t i = 1; i <= pattern.rows() && same; ++i) {
      same = pattern(i, j) == pattern(i, j - 1);
    }
    if (same) return false;
  }
  return true;
}

bool is_separated(const SubmatrixIndex& idx, const SeparatorSet& sep) {
  if (sep.rows.size() + 1 != idx.rows.size() || sep.cols.size() + 1 != idx.cols.size()) {
    throw InputError("is_separated: need s-1 row and t-1 column separators");
  }
  for (std::size_t i = 0; i < sep.rows.size(); ++i) {
    if (!(idx.rows[i] <= sep.rows[i] && sep.rows[i] < idx.rows[i + 1])) return false;
  }
  for (std::size_t j = 0; j < sep.cols.size(); ++j) {
    if (!(idx.cols[j] <= sep.cols[j] && sep.cols[j] < idx.cols[j + 1])) return false;
  }
  return true;
}

Rational copy_width(const SubmatrixIndex& idx, Axis axis, std::size_t j, std::size_t m,
                    std::size_t n) {
  const auto& v = axis == Axis::kRow ? idx.rows : idx.cols;
  const std::size_t extent = axis == Axis::kRow ? m : n;
  if (j < 1 || j + 1 > v.size()) {
    throw InputError("copy_width: gap index " + std::to_string(j) + " out of range");
  }
  return {static_cast<std::int64_t>(v[j]) - static_cast<std::int64_t>(v[j - 1]),
          static_cast<std::int64_t>(extent)};
}

Pattern apply_reordering(const Pattern& pattern, const Reordering& sigma) {
  sigma.validate(pattern.rows(), pattern.cols());
  Pattern out = pattern;
  for (std::size_t a = 1; a <= pattern.rows(); ++a) {
    for (std::size_t b = 1; b <= pattern.cols(); ++b) {
      out.set(sigma.row_perm[a - 1], sigma.col_perm[b - 1], pattern(a, b));
    }
  }
  return out;
}

bool pairwise_disjoint(std::span<const SubmatrixIndex> copies) {
  std::set<Cell> seen;
  for (const auto& c : copies) {
    for (const auto& cell : c.cells()) {
      if (!seen.insert(cell).second) return false;
    }
  }
  return true;
}

bool verify_copy_set(const DenseMatrix& host, const CopySet& set) {
  for (const auto& c : set.copies) {
    if (c.rows.size() != set.pattern.rows() || c.cols.size() != set.pattern.cols()) return false;
    try {
      if (!matches_at(host, c, set.pattern)) return false;
    } catch (const InputError&) {
      return false;
    }
  }
  return !set.disjoint || pairwise_disjoint(set.copies);
}

}  // namespace removal
