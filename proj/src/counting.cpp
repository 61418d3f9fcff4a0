#include "removal/counting.hpp"

#include <algorithm>
#include <array>

#include "removal/errors.hpp"
#include "removal/rng.hpp"

namespace removal {

std::string CopyCount::str() const {
  if (value == 0) return "0";
  std::string out;
  unsigned __int128 v = value;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::ranges::reverse(out);
  return out;
}

CopyCount checked_add(CopyCount a, CopyCount b) {
  const unsigned __int128 sum = a.value + b.value;
  if (sum < a.value) throw CountOverflow("copy count exceeds 128-bit capacity");
  return {sum};
}

CopyCount checked_mul(CopyCount a, CopyCount b) {
  if (a.value != 0 && b.value > ~static_cast<unsigned __int128>(0) / a.value) {
    throw CountOverflow("copy count exceeds 128-bit capacity");
  }
  return {a.value * b.value};
}

CopyCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return {};
  k = std::min(k, n - k);
  CopyCount out{1};
  for (std::uint64_t i = 1; i <= k; ++i) {
    // out * (n-k+i) / i stays integral at every step.
    out = checked_mul(out, {n - k + i});
    out.value /= i;
  }
  return out;
}

IndexBounds IndexBounds::from_separators(const SeparatorSet& sep, std::size_t m, std::size_t n) {
  sep.validate(m, n);
  IndexBounds b;
  std::size_t prev = 0;
  for (const auto x : sep.rows) {
    b.rows.emplace_back(prev + 1, x);
    prev = x;
  }
  b.rows.emplace_back(prev + 1, m);
  prev = 0;
  for (const auto y : sep.cols) {
    b.cols.emplace_back(prev + 1, y);
    prev = y;
  }
  b.cols.emplace_back(prev + 1, n);
  return b;
}

namespace {

using Mask = std::uint32_t;

/// Enumerates row tuples (respecting bounds) in lexicographic order and hands
/// the visitor, for each tuple, the per-column bitmask of pattern columns the
/// host column can play (bit b-1 set iff host column agrees with pattern
/// column b on every chosen row and lies in column band b).
class RowTupleSweep {
 public:
  RowTupleSweep(const DenseMatrix& matrix, const Pattern& pattern, const IndexBounds& bounds)
      : m_(matrix), a_(pattern), s_(pattern.rows()), t_(pattern.cols()), n_(matrix.cols()) {
    row_lo_.assign(s_, 1);
    row_hi_.assign(s_, matrix.rows());
    if (!bounds.rows.empty()) {
      if (bounds.rows.size() != s_) throw InputError("row bounds do not match pattern rows");
      for (std::size_t a = 0; a < s_; ++a) {
        row_lo_[a] = std::max<std::size_t>(1, bounds.rows[a].first);
        row_hi_[a] = std::min(matrix.rows(), bounds.rows[a].second);
      }
    }
    // Columns outside band b can never play pattern column b.
    col_allow_.assign(n_ + 1, 0);
    for (std::size_t c = 1; c <= n_; ++c) {
      for (std::size_t b = 0; b < t_; ++b) {
        bool ok = true;
        if (!bounds.cols.empty()) {
          if (bounds.cols.size() != t_) throw InputError("column bounds do not match pattern");
          ok = c >= bounds.cols[b].first && c <= bounds.cols[b].second;
        }
        if (ok) col_allow_[c] |= Mask{1} << b;
      }
    }
    // sym_mask_[a][symbol]: pattern columns whose entry in row a is symbol.
    sym_mask_.assign(s_, std::array<Mask, 256>{});
    for (std::size_t a = 0; a < s_; ++a) {
      for (std::size_t b = 0; b < t_; ++b) sym_mask_[a][a_(a + 1, b + 1)] |= Mask{1} << b;
    }
    prefix_.assign(s_ + 1, std::vector<Mask>(n_ + 1, 0));
    prefix_[0] = col_allow_;
    rows_.assign(s_, 0);
  }

  template <class Visitor>
  void run(Visitor&& visit) {
    stop_ = false;
    recurse(0, 0, visit);
  }

 private:
  template <class Visitor>
  void recurse(std::size_t a, std::size_t prev, Visitor& visit) {
    if (a == s_) {
      if (!visit(rows_, prefix_[s_])) stop_ = true;
      return;
    }
    const std::size_t lo = std::max(row_lo_[a], prev + 1);
    // Leave room for the remaining s - a - 1 strictly larger rows.
    const std::size_t room = m_.rows() - (s_ - a - 1);
    const std::size_t hi = std::min(row_hi_[a], room);
    for (std::size_t r = lo; r <= hi && !stop_; ++r) {
      rows_[a] = r;
      const auto row = m_.row(r);
      const auto& sm = sym_mask_[a];
      const auto& src = prefix_[a];
      auto& dst = prefix_[a + 1];
      Mask any = 0;
      for (std::size_t c = 1; c <= n_; ++c) {
        dst[c] = src[c] & sm[row[c - 1]];
        any |= dst[c];
      }
      // Every pattern column needs a candidate host column.
      if (any != (t_ == 32 ? ~Mask{0} : (Mask{1} << t_) - 1)) continue;
      recurse(a + 1, r, visit);
    }
  }

  const DenseMatrix& m_;
  const Pattern& a_;
  std::size_t s_, t_, n_;
  std::vector<std::size_t> row_lo_, row_hi_;
  std::vector<Mask> col_allow_;
  std::vector<std::array<Mask, 256>> sym_mask_;
  std::vector<std::vector<Mask>> prefix_;
  std::vector<std::size_t> rows_;
  bool stop_ = false;
};

bool has(Mask mask, std::size_t b) { return (mask >> (b - 1)) & 1U; }

/// Number of increasing column tuples c_1 < ... < c_t with column c_b allowed
/// for position b.
unsigned __int128 count_column_tuples(const std::vector<Mask>& mask, std::size_t t) {
  std::array<unsigned __int128, 33> dp{};
  dp[0] = 1;
  for (std::size_t c = 1; c < mask.size(); ++c) {
    const Mask mk = mask[c];
    if (mk == 0) continue;
    for (std::size_t b = t; b >= 1; --b) {
      if (has(mk, b)) {
        const unsigned __int128 next = dp[b] + dp[b - 1];
        if (next < dp[b]) throw CountOverflow("copy count exceeds 128-bit capacity");
        dp[b] = next;
      }
    }
  }
  return dp[t];
}

/// Lexicographically first assignment of positions b_from..b_to to strictly
/// increasing columns inside [c_from, c_to].
std::optional<std::vector<std::size_t>> lex_first(const std::vector<Mask>& mask,
                                                  std::size_t b_from, std::size_t b_to,
                                                  std::size_t c_from, std::size_t c_to) {
  if (b_from > b_to) return std::vector<std::size_t>{};
  if (c_from > c_to) return std::nullopt;
  const std::size_t width = c_to - c_from + 2;
  const std::size_t k = b_to - b_from + 1;
  // can[q][x]: positions b_from+q .. b_to fit into columns >= c_from + x.
  std::vector<std::vector<char>> can(k + 1, std::vector<char>(width + 1, 0));
  for (std::size_t x = 0; x <= width; ++x) can[k][x] = 1;
  for (std::size_t q = k; q-- > 0;) {
    const std::size_t b = b_from + q;
    for (std::size_t x = width - 1; x-- > 0;) {
      const std::size_t c = c_from + x;
      can[q][x] = can[q][x + 1] || (has(mask[c], b) && can[q + 1][x + 1]);
    }
  }
  if (!can[0][0]) return std::nullopt;
  std::vector<std::size_t> out;
  std::size_t x = 0;
  for (std::size_t q = 0; q < k; ++q) {
    const std::size_t b = b_from + q;
    while (!(has(mask[c_from + x], b) && can[q + 1][x + 1])) ++x;
    out.push_back(c_from + x);
    ++x;
  }
  return out;
}

void check_pattern(const DenseMatrix& matrix, const Pattern& pattern, const Limits& limits) {
  if (pattern.rows() > limits.max_pattern_dim || pattern.cols() > limits.max_pattern_dim) {
    throw BudgetExceeded("pattern " + std::to_string(pattern.rows()) + "x" +
                         std::to_string(pattern.cols()) + " exceeds the size guardrail " +
                         std::to_string(limits.max_pattern_dim));
  }
  if (pattern.cols() > 32) throw BudgetExceeded("pattern wider than 32 columns");
  if (pattern.rows() > matrix.rows() || pattern.cols() > matrix.cols()) {
    throw InputError("pattern does not fit inside the host matrix");
  }
}

}  // namespace

void check_sweep_budget(const DenseMatrix& matrix, const Pattern& pattern, const Limits& limits) {
  check_pattern(matrix, pattern, limits);
  CopyCount work = binomial(matrix.rows(), pattern.rows());
  work = checked_mul(work, {static_cast<std::uint64_t>(matrix.cols()) * pattern.cols()});
  if (work.value > limits.count_work_budget) {
    throw BudgetExceeded("row-tuple sweep needs ~" + work.str() +
                         " steps, over the configured budget of " +
                         std::to_string(limits.count_work_budget));
  }
}

CopyCount count_copies_within(const DenseMatrix& matrix, const Pattern& pattern,
                              const IndexBounds& bounds, const Limits& limits) {
  check_sweep_budget(matrix, pattern, limits);
  CopyCount total;
  RowTupleSweep sweep(matrix, pattern, bounds);
  const std::size_t t = pattern.cols();
  sweep.run([&](const std::vector<std::size_t>&, const std::vector<Mask>& mask) {
    total = checked_add(total, {count_column_tuples(mask, t)});
    return true;
  });
  return total;
}

CopyCount count_copies(const DenseMatrix& matrix, const Pattern& pattern, const Limits& limits) {
  return count_copies_within(matrix, pattern, {}, limits);
}

CopyCount count_copies_in_strip(const DenseMatrix& strip, const Pattern& pattern,
                                const Limits& limits) {
  if (strip.rows() != pattern.rows()) {
    throw InputError("strip must have exactly as many rows as the pattern");
  }
  return count_copies(strip, pattern, limits);
}

DensityEstimate estimate_copy_density(const DenseMatrix& matrix, const Pattern& pattern,
                                      std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw InputError("estimate_copy_density needs at least one sample");
  if (pattern.rows() > matrix.rows() || pattern.cols() > matrix.cols()) {
    throw InputError("pattern does not fit inside the host matrix");
  }
  DensityEstimate est;
  est.samples = samples;
  est.seed = seed;
  for (std::uint64_t k = 0; k < samples; ++k) {
    CounterRng rng(seed, k);
    SubmatrixIndex idx{rng.subset(matrix.rows(), pattern.rows()),
                       rng.subset(matrix.cols(), pattern.cols())};
    if (matches_at(matrix, idx, pattern)) ++est.hits;
  }
  return est;
}

CopyCount count_separated_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                 const SeparatorSet& sep, const Limits& limits) {
  if (sep.rows.size() + 1 != pattern.rows() || sep.cols.size() + 1 != pattern.cols()) {
    throw InputError("separator counts must be s-1 and t-1");
  }
  return count_copies_within(matrix, pattern,
                             IndexBounds::from_separators(sep, matrix.rows(), matrix.cols()),
                             limits);
}

std::optional<WidestCopy> widest_copy_within(const DenseMatrix& matrix, const Pattern& pattern,
                                             Axis axis, std::size_t j, const IndexBounds& bounds,
                                             const Limits& limits) {
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();
  const std::size_t n = matrix.cols();
  const std::size_t len = axis == Axis::kRow ? s : t;
  if (j < 1 || j >= len) {
    throw InputError("widest_copy: gap index " + std::to_string(j) + " out of range");
  }
  check_sweep_budget(matrix, pattern, limits);

  std::optional<SubmatrixIndex> best;
  std::size_t best_gap = 0;
  RowTupleSweep sweep(matrix, pattern, bounds);
  sweep.run([&](const std::vector<std::size_t>& rows, const std::vector<Mask>& mask) {
    if (axis == Axis::kRow) {
      const std::size_t gap = rows[j] - rows[j - 1];
      if (best && gap <= best_gap) return true;
      auto cols = lex_first(mask, 1, t, 1, n);
      if (cols) {
        best = SubmatrixIndex{rows, *cols};
        best_gap = gap;
      }
      return true;
    }
    // Column gap: smallest column that can end a prefix at position j and
    // largest column that can start a suffix at position j+1.
    std::vector<char> pre_prev(n + 1, 1);  // pre[b-1][c]: 1..b-1 fit in columns <= c
    std::size_t min_e = 0;
    for (std::size_t b = 1; b <= j; ++b) {
      std::vector<char> pre(n + 1, 0);
      for (std::size_t c = 1; c <= n; ++c) {
        const bool here = has(mask[c], b) && (b == 1 || pre_prev[c - 1]);
        pre[c] = pre[c - 1] || here;
        if (b == j && here && min_e == 0) min_e = c;
      }
      pre_prev = std::move(pre);
    }
    if (min_e == 0) return true;
    std::vector<char> suf_next(n + 2, 1);  // suf[b+1][c]: b+1..t fit in columns >= c
    std::size_t max_s = 0;
    for (std::size_t b = t; b >= j + 1; --b) {
      std::vector<char> suf(n + 2, 0);
      for (std::size_t c = n; c >= 1; --c) {
        const bool here = has(mask[c], b) && (b == t || suf_next[c + 1]);
        suf[c] = suf[c + 1] || here;
        if (b == j + 1 && here && max_s == 0) max_s = c;
      }
      suf_next = std::move(suf);
    }
    if (max_s == 0 || max_s <= min_e) return true;
    const std::size_t gap = max_s - min_e;
    if (best && gap <= best_gap) return true;
    auto head = lex_first(mask, 1, j - 1, 1, min_e - 1);
    auto tail = lex_first(mask, j + 2, t, max_s + 1, n);
    std::vector<std::size_t> cols = *head;
    cols.push_back(min_e);
    cols.push_back(max_s);
    cols.insert(cols.end(), tail->begin(), tail->end());
    best = SubmatrixIndex{rows, std::move(cols)};
    best_gap = gap;
    return true;
  });
  if (!best) return std::nullopt;
  return WidestCopy{*best, copy_width(*best, axis, j, matrix.rows(), n)};
}

std::optional<WidestCopy> widest_copy(const DenseMatrix& matrix, const Pattern& pattern,
                                      Axis axis, std::size_t j, const Limits& limits) {
  return widest_copy_within(matrix, pattern, axis, j, {}, limits);
}

void for_each_copy(const DenseMatrix& matrix, const Pattern& pattern,
                   const std::function<bool(const SubmatrixIndex&)>& visit,
                   const Limits& limits) {
  check_sweep_budget(matrix, pattern, limits);
  const std::size_t t = pattern.cols();
  const std::size_t n = matrix.cols();
  std::uint64_t emitted = 0;
  RowTupleSweep sweep(matrix, pattern, {});
  sweep.run([&](const std::vector<std::size_t>& rows, const std::vector<Mask>& mask) {
    // Backtracking over columns in lexicographic order, pruned by a suffix
    // feasibility table.
    std::vector<std::vector<char>> can(t + 2, std::vector<char>(n + 2, 0));
    for (std::size_t c = 0; c <= n + 1; ++c) can[t + 1][c] = 1;
    for (std::size_t b = t; b >= 1; --b) {
      for (std::size_t c = n; c >= 1; --c) {
        can[b][c] = can[b][c + 1] || (has(mask[c], b) && can[b + 1][c + 1]);
      }
    }
    if (!can[1][1]) return true;
    SubmatrixIndex idx{rows, std::vector<std::size_t>(t, 0)};
    bool keep_going = true;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t b, std::size_t from) {
      if (!keep_going) return;
      if (b > t) {
        if (++emitted > limits.enumeration_budget) {
          throw BudgetExceeded("copy enumeration exceeded " +
                               std::to_string(limits.enumeration_budget) + " copies");
        }
        keep_going = visit(idx);
        return;
      }
      for (std::size_t c = from; c <= n && keep_going; ++c) {
        if (!can[b][c]) break;
        if (has(mask[c], b) && can[b + 1][c + 1]) {
          idx.cols[b - 1] = c;
          rec(b + 1, c + 1);
        }
      }
    };
    rec(1, 1);
    return keep_going;
  });
}

std::vector<SubmatrixIndex> enumerate_copies(const DenseMatrix& matrix, const Pattern& pattern,
                                             const Limits& limits) {
  std::vector<SubmatrixIndex> out;
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        out.push_back(idx);
        return true;
      },
      limits);
  return out;
}

std::optional<SubmatrixIndex> first_copy(const DenseMatrix& matrix, const Pattern& pattern,
                                         const Limits& limits) {
  std::optional<SubmatrixIndex> out;
  for_each_copy(
      matrix, pattern,
      [&](const SubmatrixIndex& idx) {
        out = idx;
        return false;
      },
      limits);
  return out;
}

}  // namespace removal
