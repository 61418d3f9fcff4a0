#include "removal/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "removal/bitset.hpp"
#include "removal/errors.hpp"
#include "removal/regularity.hpp"
#include "removal/rng.hpp"

namespace removal {
namespace {

std::int64_t as_i64(std::size_t v) { return static_cast<std::int64_t>(v); }

void require_valid_packing(const DenseMatrix& matrix, const Pattern& pattern,
                           const Packing& packing, const char* who) {
  if (!(packing.copy_set.pattern == pattern)) {
    throw InputError(std::string(who) + ": packing is for a different pattern");
  }
  for (const auto& c : packing.copy_set.copies) {
    c.validate(matrix.rows(), matrix.cols());
    if (c.rows.size() != pattern.rows() || c.cols.size() != pattern.cols() ||
        !matches_at(matrix, c, pattern)) {
      throw InputError(std::string(who) + ": packing contains a non-copy");
    }
  }
  if (!pairwise_disjoint(packing.copy_set.copies)) {
    throw InputError(std::string(who) + ": packing is not pairwise disjoint");
  }
}

Packing make_packing(const Pattern& pattern, std::vector<SubmatrixIndex> copies) {
  std::ranges::sort(copies);
  return Packing{CopySet{pattern, std::move(copies), true}, false};
}

std::vector<std::size_t>& line_of(SubmatrixIndex& idx, Axis axis) {
  return axis == Axis::kRow ? idx.rows : idx.cols;
}
const std::vector<std::size_t>& line_of(const SubmatrixIndex& idx, Axis axis) {
  return axis == Axis::kRow ? idx.rows : idx.cols;
}

/// Separation so far: for each axis, positions 1..p lie in their bands and
/// position p+1 (if any) is beyond the last separator.
bool induction_holds(std::span<const SubmatrixIndex> copies, const std::vector<std::size_t>& xs,
                     const std::vector<std::size_t>& ys) {
  auto axis_ok = [](const std::vector<std::size_t>& ids, const std::vector<std::size_t>& seps) {
    std::size_t prev = 0;
    for (std::size_t j = 0; j < seps.size(); ++j) {
      if (!(ids[j] > prev && ids[j] <= seps[j])) return false;
      prev = seps[j];
    }
    return seps.size() >= ids.size() || ids[seps.size()] > prev;
  };
  for (const auto& c : copies) {
    if (!axis_ok(c.rows, xs) || !axis_ok(c.cols, ys)) return false;
  }
  return pairwise_disjoint(copies);
}

}  // namespace

bool verify_separated_packing(const DenseMatrix& original, const SeparatedPacking& sp) {
  const auto& set = sp.packing.copy_set;
  if (!verify_copy_set(original, set) || !pairwise_disjoint(set.copies)) return false;
  try {
    sp.separators.validate(original.rows(), original.cols());
  } catch (const InputError&) {
    return false;
  }
  if (sp.separators.rows.size() + 1 != set.pattern.rows() ||
      sp.separators.cols.size() + 1 != set.pattern.cols()) {
    return false;
  }
  return std::ranges::all_of(
      set.copies, [&](const SubmatrixIndex& c) { return is_separated(c, sp.separators); });
}

// ---- strip removal ---------------------------------------------------------

StripBound strip_split_count(const DenseMatrix& strip, const Pattern& pattern,
                             const Packing& packing, std::size_t check_cap) {
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();
  if (strip.rows() != s) throw InputError("strip must have exactly as many rows as the pattern");
  require_valid_packing(strip, pattern, packing, "strip_split_count");
  const std::size_t p = packing.size();
  if (p < t) {
    throw InputError("strip packing has " + std::to_string(p) + " copies, needs at least " +
                     std::to_string(t));
  }
  const std::size_t g = p / t;

  StripBound out;
  std::vector<SubmatrixIndex> left = packing.copy_set.copies;
  for (std::size_t i = 0; i < t; ++i) {
    std::ranges::stable_sort(left, [i](const SubmatrixIndex& a, const SubmatrixIndex& b) {
      return a.cols[i] < b.cols[i];
    });
    out.witness.groups.emplace_back(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(g));
    left.erase(left.begin(), left.begin() + static_cast<std::ptrdiff_t>(g));
  }
  CopyCount bound = CopyCount::of(1);
  for (std::size_t i = 0; i < t; ++i) bound = checked_mul(bound, CopyCount::of(g));
  out.lower_bound = bound;

  std::vector<std::size_t> all_rows(s);
  std::iota(all_rows.begin(), all_rows.end(), 1);
  auto check = [&](const std::vector<std::size_t>& choice) {
    SubmatrixIndex idx{all_rows, std::vector<std::size_t>(t)};
    for (std::size_t i = 0; i < t; ++i) idx.cols[i] = out.witness.groups[i][choice[i]].cols[i];
    ++out.assembled_checked;
    const bool increasing = std::ranges::adjacent_find(idx.cols, std::greater_equal<>()) ==
                            idx.cols.end();
    if (!increasing || !matches_at(strip, idx, pattern)) out.all_checked_match = false;
  };
  std::vector<std::size_t> choice(t, 0);
  if (bound.value <= check_cap) {
    while (true) {
      check(choice);
      std::size_t i = t;
      while (i > 0 && ++choice[i - 1] == g) choice[--i] = 0;
      if (i == 0) break;
    }
  } else {
    CounterRng rng(0x5717, p);
    for (std::size_t k = 0; k < check_cap; ++k) {
      for (auto& c : choice) c = rng.uniform(g);
      check(choice);
    }
  }
  return out;
}

// ---- folding bound ---------------------------------------------------------

FoldingBoundReport folding_bound_check(const DenseMatrix& matrix, const Pattern& pattern,
                                       const Limits& limits) {
  if (matrix.rows() != matrix.cols()) throw InputError("folding_bound_check needs a square matrix");
  const std::size_t n = matrix.rows();
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();
  FoldingBoundReport r{.folded = fold_rows(pattern)};
  const std::size_t sp = r.folded.rows();
  r.folded_count = count_copies(matrix, r.folded, limits);
  r.actual_count = count_copies(matrix, pattern, limits);

  const double nd = static_cast<double>(n);
  r.eps_prime = r.folded_count.to_double() / std::pow(nd, static_cast<double>(sp + t));
  r.delta = r.eps_prime / (5.0 * static_cast<double>(s * sp));
  r.predicted = r.eps_prime * std::pow(r.delta, static_cast<double>(s)) *
                std::pow(nd, static_cast<double>(s + t)) / 2.0;
  try {
    if (!r.folded_count.fits_u64() || r.folded_count.value > INT64_MAX) {
      throw std::overflow_error("count too large");
    }
    Rational power(1);
    for (std::size_t k = 0; k < sp + t; ++k) power = power * Rational(as_i64(n));
    const Rational eps = Rational(static_cast<std::int64_t>(r.folded_count.value)) / power;
    const Rational delta = eps / Rational(as_i64(5 * s * sp));
    Rational predicted = eps / Rational(2);
    for (std::size_t k = 0; k < s; ++k) predicted = predicted * delta;
    for (std::size_t k = 0; k < s + t; ++k) predicted = predicted * Rational(as_i64(n));
    r.eps_prime_exact = eps;
    r.delta_exact = delta;
    r.predicted_exact = predicted;
  } catch (const std::overflow_error&) {
  }
  if (r.predicted_exact && r.actual_count.value <= INT64_MAX) {
    r.holds = Rational(static_cast<std::int64_t>(r.actual_count.value)) >= *r.predicted_exact;
  } else {
    r.holds = r.actual_count.to_double() >= r.predicted;
  }
  return r;
}

// ---- separator extraction --------------------------------------------------

std::string_view to_string(SeparationStatus status) {
  switch (status) {
    case SeparationStatus::kSeparated: return "separated";
    case SeparationStatus::kDensityBranch: return "density-branch";
    case SeparationStatus::kPackingExhausted: return "packing-exhausted";
  }
  return "?";
}

SeparationOutcome separator_extraction(const DenseMatrix& matrix, const Pattern& pattern,
                                       const Packing& packing, const SeparationParams& params) {
  require_valid_packing(matrix, pattern, packing, "separator_extraction");
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();

  SeparationOutcome out;
  std::vector<SubmatrixIndex> current = packing.copy_set.copies;
  if (current.empty()) {
    out.failed_step = 1;
    out.message = "empty packing";
    return out;
  }
  // Below this floor every threshold the procedure uses is already at its
  // limiting value (radius 0, at least one copy), so smaller deltas are
  // indistinguishable; the recurrence is clamped here instead of overflowing.
  const Rational floor_delta(1, as_i64(8 * std::max(m, n)));
  Rational delta = params.constant_delta.value_or(Rational(as_i64(current.size()), as_i64(m * n)));
  bool saturated = false;
  if (delta <= Rational(0) || delta > Rational(1)) {
    throw InputError("separator_extraction: delta must lie in (0, 1]");
  }

  std::vector<std::size_t> xs, ys;
  std::size_t step_no = 0;
  for (const Axis axis : {Axis::kRow, Axis::kCol}) {
    const std::size_t steps = (axis == Axis::kRow ? s : t) - 1;
    const std::size_t count = axis == Axis::kRow ? m : n;
    const std::size_t len = axis == Axis::kRow ? n : m;
    auto& seps = axis == Axis::kRow ? xs : ys;
    for (std::size_t i = 1; i <= steps; ++i) {
      ++step_no;
      SeparationStep step;
      step.axis = axis;
      step.index = i;
      step.delta = delta;
      step.delta_saturated = saturated;
      step.before = current.size();

      const auto cl = clustering(matrix, axis, delta / Rational(4), params.r_max);
      if (!cl) {
        out.status = SeparationStatus::kDensityBranch;
        out.failed_step = step_no;
        out.message = "no (" + (delta / Rational(4)).str() + ", " +
                      std::to_string(params.r_max) + ")-clustering of the " +
                      std::string(to_string(axis)) + "s";
        out.audit.push_back(step);
        return out;
      }
      step.clusters = cl->r();

      std::vector<std::size_t> carried(count + 1, 0);
      for (const auto& c : current) ++carried[line_of(c, axis)[i - 1]];
      const Rational threshold = delta * Rational(as_i64(len)) / Rational(2);
      auto good = [&](std::size_t line) { return Rational(as_i64(carried[line])) >= threshold; };
      for (std::size_t l = 1; l <= count; ++l) step.good_lines += good(l) && carried[l] > 0;

      std::vector<std::size_t> best;
      for (const auto& cluster : cl->clusters) {
        std::vector<std::size_t> g;
        for (const auto l : cluster) {
          if (carried[l] > 0 && good(l)) g.push_back(l);
        }
        if (g.size() > best.size()) best = std::move(g);
      }
      step.chosen_cluster_good = best.size();
      step.half = best.size() / 2;
      if (step.half == 0) {
        out.failed_step = step_no;
        out.message = "no cluster holds two good " + std::string(to_string(axis)) + "s";
        out.audit.push_back(step);
        return out;
      }
      // best is sorted; R1 = lowest half, R2 = highest half.
      const std::vector<std::size_t> r1(best.begin(), best.begin() + as_i64(step.half));
      const std::vector<std::size_t> r2(best.end() - as_i64(step.half), best.end());
      step.separator = r1.back();
      std::map<std::size_t, std::size_t> partner;
      for (std::size_t k = 0; k < step.half; ++k) partner[r2[k]] = r1[k];

      std::vector<SubmatrixIndex> next;
      for (const auto& c : current) {
        const auto it = partner.find(line_of(c, axis)[i - 1]);
        if (it == partner.end()) continue;
        SubmatrixIndex shifted = c;
        auto& ids = line_of(shifted, axis);
        ids[i - 1] = it->second;
        if (i >= 2 && ids[i - 2] >= ids[i - 1]) continue;
        if (matches_at(matrix, shifted, pattern)) next.push_back(std::move(shifted));
      }
      seps.push_back(step.separator);
      current = std::move(next);
      step.survivors = current.size();
      step.audit_ok = induction_holds(current, xs, ys);
      out.audit.push_back(step);
      if (current.empty()) {
        out.failed_step = step_no;
        out.message = "no shifted copy survived";
        return out;
      }

      if (!params.constant_delta) {
        try {
          delta = delta * delta / Rational(as_i64(20 * std::max<std::size_t>(cl->r(), 1)));
        } catch (const std::overflow_error&) {
          delta = Rational(0);
        }
        if (delta < floor_delta) {
          delta = floor_delta;
          saturated = true;
        }
      }
    }
  }

  out.status = SeparationStatus::kSeparated;
  out.result = SeparatedPacking{make_packing(pattern, std::move(current)), {xs, ys}};
  return out;
}

// ---- row-permutation repair ------------------------------------------------

std::string_view to_string(RepairBranch branch) {
  switch (branch) {
    case RepairBranch::kEdit: return "edit";
    case RepairBranch::kCopies: return "copies";
    case RepairBranch::kDensityBranch: return "density-branch";
  }
  return "?";
}

bool is_closed_under_row_permutations(std::span<const Pattern> family) {
  for (const auto& p : family) {
    if (!is_unfoldable(p)) return false;
    std::vector<std::size_t> order(p.rows());
    std::iota(order.begin(), order.end(), 1);
    do {
      std::vector<Symbol> e;
      for (const auto r : order) {
        const auto row = p.row(r);
        e.insert(e.end(), row.begin(), row.end());
      }
      const Pattern permuted(p.rows(), p.cols(), p.alphabet(), std::move(e));
      const bool present = std::ranges::any_of(family, [&](const Pattern& q) {
        return q.rows() == permuted.rows() && q.cols() == permuted.cols() &&
               std::ranges::equal(q.entries(), permuted.entries());
      });
      if (!present) return false;
    } while (std::ranges::next_permutation(order).found);
  }
  return true;
}

std::vector<Pattern> row_permutation_closure(std::span<const Pattern> family) {
  std::vector<Pattern> out;
  for (const auto& p : family) {
    std::vector<std::size_t> order(p.rows());
    std::iota(order.begin(), order.end(), 1);
    do {
      std::vector<Symbol> e;
      for (const auto r : order) {
        const auto row = p.row(r);
        e.insert(e.end(), row.begin(), row.end());
      }
      Pattern permuted(p.rows(), p.cols(), p.alphabet(), std::move(e));
      const bool seen = std::ranges::any_of(out, [&](const Pattern& q) {
        return q.rows() == permuted.rows() && q.cols() == permuted.cols() &&
               std::ranges::equal(q.entries(), permuted.entries());
      });
      if (!seen) out.push_back(std::move(permuted));
    } while (std::ranges::next_permutation(order).found);
  }
  return out;
}

std::vector<FamilyCopy> greedy_family_packing(const DenseMatrix& matrix,
                                              std::span<const Pattern> family,
                                              const Limits& limits) {
  std::vector<FamilyCopy> out;
  Bitset used(matrix.rows() * matrix.cols());
  auto id = [&](const Cell& c) { return (c.row - 1) * matrix.cols() + (c.col - 1); };
  for (std::size_t f = 0; f < family.size(); ++f) {
    const auto& p = family[f];
    if (p.rows() > matrix.rows() || p.cols() > matrix.cols()) continue;
    for_each_copy(
        matrix, p,
        [&](const SubmatrixIndex& idx) {
          const auto cells = idx.cells();
          if (std::ranges::any_of(cells, [&](const Cell& c) { return used.test(id(c)); })) {
            return true;
          }
          for (const auto& c : cells) used.set(id(c));
          out.push_back({f, idx});
          return true;
        },
        limits);
  }
  return out;
}

RepairOutcome row_perm_repair(const DenseMatrix& matrix, std::span<const Pattern> family,
                              const Rational& eps, std::size_t r_max, const Limits& limits) {
  if (family.empty()) throw InputError("row_perm_repair: empty family");
  for (const auto& p : family) {
    if (!is_unfoldable(p)) throw InputError("row_perm_repair: family member is foldable");
  }
  if (!is_closed_under_row_permutations(family)) {
    throw InputError("row_perm_repair: family is not closed under row permutations");
  }
  if (eps <= Rational(0) || eps > Rational(1)) throw InputError("eps must lie in (0, 1]");
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  std::size_t k = 0;
  for (const auto& p : family) k = std::max({k, p.rows(), p.cols()});

  RepairOutcome out;
  out.packing_threshold = eps * Rational(as_i64(n)) / Rational(as_i64(3 * k));
  out.edit_budget = static_cast<std::size_t>((eps * Rational(5, 6)).ceil_times(as_i64(m * n)));

  const auto cl = clustering(matrix, Axis::kRow, eps / Rational(6), r_max);
  if (!cl) return out;
  out.clusters = cl->r();

  // Large clusters hold at least eps*m/(6r) rows; each is represented by its
  // lowest row.
  const Rational large = eps * Rational(as_i64(m)) / Rational(as_i64(6 * cl->r()));
  std::vector<std::size_t> rep_of(m + 1, 0);
  for (const auto& cluster : cl->clusters) {
    if (Rational(as_i64(cluster.size())) < large) continue;
    out.representatives.push_back(cluster.front());
    for (const auto row : cluster) rep_of[row] = cluster.front();
  }
  std::ranges::sort(out.representatives);
  if (out.representatives.empty()) {
    throw InputError("row_perm_repair: no large cluster (eps too large for this matrix)");
  }

  std::vector<Symbol> q_entries;
  for (const auto row : out.representatives) {
    const auto r = matrix.row(row);
    q_entries.insert(q_entries.end(), r.begin(), r.end());
  }
  const DenseMatrix q(out.representatives.size(), n, matrix.alphabet(), std::move(q_entries));
  const auto q_packing = greedy_family_packing(q, family, limits);
  out.q_packing = q_packing.size();

  if (Rational(as_i64(q_packing.size())) > out.packing_threshold) {
    out.branch = RepairBranch::kCopies;
    for (const auto& fc : q_packing) {
      FamilyCopy mapped = fc;
      for (auto& r : mapped.copy.rows) r = out.representatives[r - 1];
      out.copies.push_back(std::move(mapped));
    }
    return out;
  }

  // Edit branch. Rows outside large clusters go to their nearest
  // representative (lowest on ties).
  for (std::size_t row = 1; row <= m; ++row) {
    if (rep_of[row] != 0) continue;
    std::size_t best = out.representatives.front();
    std::size_t best_d = SIZE_MAX;
    for (const auto rep : out.representatives) {
      const auto d = line_distance(matrix, Axis::kRow, row, rep);
      if (d < best_d) {
        best_d = d;
        best = rep;
      }
    }
    rep_of[row] = best;
  }
  std::vector<Symbol> w(m * n);
  for (std::size_t row = 1; row <= m; ++row) {
    const auto src = matrix.row(rep_of[row]);
    std::ranges::copy(src, w.begin() + as_i64((row - 1) * n));
  }

  std::vector<char> in_c(n + 2, 0);
  std::size_t remaining = 0;
  for (const auto& fc : q_packing) {
    for (const auto c : fc.copy.cols) {
      if (!in_c[c]) {
        in_c[c] = 1;
        ++remaining;
      }
    }
  }
  while (remaining > 0) {
    std::size_t col = 0, src = 0;
    for (std::size_t c = 1; c <= n && col == 0; ++c) {
      if (!in_c[c]) continue;
      if (c > 1 && !in_c[c - 1]) {
        col = c;
        src = c - 1;
      } else if (c < n && !in_c[c + 1]) {
        col = c;
        src = c + 1;
      }
    }
    if (col == 0) throw InputError("row_perm_repair: every column is hit, nothing to copy from");
    for (std::size_t row = 1; row <= m; ++row) w[(row - 1) * n + col - 1] = w[(row - 1) * n + src - 1];
    in_c[col] = 0;
    --remaining;
  }

  EditCertificate cert;
  for (std::size_t row = 1; row <= m; ++row) {
    for (std::size_t c = 1; c <= n; ++c) {
      const Symbol v = w[(row - 1) * n + c - 1];
      if (v != matrix(row, c)) cert.edits.push_back({row, c, v});
    }
  }
  const DenseMatrix edited(m, n, matrix.alphabet(), std::move(w));
  cert.free = std::ranges::all_of(family, [&](const Pattern& p) {
    return p.rows() > m || p.cols() > n || count_copies(edited, p, limits).value == 0;
  });
  out.branch = RepairBranch::kEdit;
  out.edits = std::move(cert);
  return out;
}

bool verify_repair(const DenseMatrix& matrix, std::span<const Pattern> family,
                   const RepairOutcome& outcome, const Limits& limits) {
  switch (outcome.branch) {
    case RepairBranch::kDensityBranch:
      return false;
    case RepairBranch::kEdit: {
      if (!outcome.edits || !outcome.copies.empty()) return false;
      const auto& edits = outcome.edits->edits;
      if (edits.size() > outcome.edit_budget) return false;
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& e : edits) {
        if (e.row < 1 || e.row > matrix.rows() || e.col < 1 || e.col > matrix.cols()) return false;
        if (!seen.insert({e.row, e.col}).second) return false;
      }
      const DenseMatrix edited = apply_edits(matrix, edits);
      return std::ranges::all_of(family, [&](const Pattern& p) {
        return p.rows() > matrix.rows() || p.cols() > matrix.cols() ||
               count_copies(edited, p, limits).value == 0;
      });
    }
    case RepairBranch::kCopies: {
      if (outcome.edits) return false;
      if (Rational(as_i64(outcome.copies.size())) <= outcome.packing_threshold) return false;
      std::vector<SubmatrixIndex> idx;
      for (const auto& fc : outcome.copies) {
        if (fc.member >= family.size()) return false;
        const auto& p = family[fc.member];
        if (fc.copy.rows.size() != p.rows() || fc.copy.cols.size() != p.cols()) return false;
        try {
          fc.copy.validate(matrix.rows(), matrix.cols());
        } catch (const InputError&) {
          return false;
        }
        if (!matches_at(matrix, fc.copy, p)) return false;
        for (const auto r : fc.copy.rows) {
          if (!std::ranges::binary_search(outcome.representatives, r)) return false;
        }
        idx.push_back(fc.copy);
      }
      return pairwise_disjoint(idx);
    }
  }
  return false;
}

// ---- augmented-alphabet iteration -----------------------------------------

AugmentedOutcome augmented_separator_iteration(const DenseMatrix& matrix, const Pattern& pattern,
                                               const Packing& packing,
                                               const Rational& width_threshold,
                                               const Limits& limits) {
  require_valid_packing(matrix, pattern, packing, "augmented_separator_iteration");
  const std::size_t m = matrix.rows();
  const std::size_t n = matrix.cols();
  const std::size_t s = pattern.rows();
  const std::size_t t = pattern.cols();
  if (matrix.alphabet().size() >= 256) throw InputError("no room for the extra symbol");
  const Alphabet big = matrix.alphabet().augmented();
  const auto alpha = static_cast<Symbol>(matrix.alphabet().size());

  auto keep_only = [&](const std::vector<SubmatrixIndex>& copies) {
    DenseMatrix out = DenseMatrix::filled(m, n, big, alpha);
    for (const auto& c : copies) {
      for (const auto& cell : c.cells()) out.set(cell.row, cell.col, matrix(cell.row, cell.col));
    }
    return out;
  };

  std::vector<SubmatrixIndex> collection = packing.copy_set.copies;
  AugmentedOutcome out{{make_packing(pattern, {}), {}}, keep_only(collection), {}, false};
  if (collection.empty()) {
    out.width_branch_failed = true;
    return out;
  }

  std::vector<std::size_t> xs, ys;
  for (const Axis axis : {Axis::kRow, Axis::kCol}) {
    const std::size_t steps = (axis == Axis::kRow ? s : t) - 1;
    const std::size_t extent = axis == Axis::kRow ? m : n;
    auto& seps = axis == Axis::kRow ? xs : ys;
    for (std::size_t i = 1; i <= steps; ++i) {
      AugmentedStep step;
      step.axis = axis;
      step.index = i;

      // Bands from the separators placed so far; later positions only need to
      // lie beyond the last separator.
      IndexBounds bounds;
      auto fill = [](std::vector<std::pair<std::size_t, std::size_t>>& b,
                     const std::vector<std::size_t>& sp, std::size_t positions, std::size_t end) {
        std::size_t prev = 0;
        for (std::size_t j = 0; j < positions; ++j) {
          if (j < sp.size()) {
            b.emplace_back(prev + 1, sp[j]);
            prev = sp[j];
          } else {
            b.emplace_back(prev + 1, end);
          }
        }
      };
      fill(bounds.rows, xs, s, m);
      fill(bounds.cols, ys, t, n);

      DenseMatrix work = out.final_matrix;
      std::map<std::pair<std::size_t, std::size_t>, std::size_t> owner;
      for (std::size_t c = 0; c < collection.size(); ++c) {
        for (const auto& cell : collection[c].cells()) owner[{cell.row, cell.col}] = c;
      }
      std::vector<char> blanked(collection.size(), 0);
      std::vector<SubmatrixIndex> wide;
      while (true) {
        const auto w = widest_copy_within(work, pattern, axis, i, bounds, limits);
        if (!w || w->width < width_threshold) break;
        std::set<std::size_t> hit;
        for (const auto& cell : w->copy.cells()) {
          const auto it = owner.find({cell.row, cell.col});
          if (it == owner.end() || blanked[it->second]) {
            throw std::logic_error("augmented iteration: copy uses an entry outside the collection");
          }
          hit.insert(it->second);
        }
        for (const auto c : hit) {
          blanked[c] = 1;
          for (const auto& dead : collection[c].cells()) work.set(dead.row, dead.col, alpha);
        }
        wide.push_back(w->copy);
      }
      step.collected = wide.size();

      // x separates a copy iff idx[i] <= x < idx[i+1].
      std::vector<long> diff(extent + 2, 0);
      for (const auto& c : wide) {
        const auto& ids = line_of(c, axis);
        ++diff[ids[i - 1]];
        --diff[ids[i]];
      }
      long run = 0, best = 0;
      std::size_t best_x = 0;
      for (std::size_t x = 1; x < extent; ++x) {
        run += diff[x];
        if (run > best) {
          best = run;
          best_x = x;
        }
      }
      std::vector<SubmatrixIndex> kept;
      for (const auto& c : wide) {
        const auto& ids = line_of(c, axis);
        if (ids[i - 1] <= best_x && best_x < ids[i]) kept.push_back(c);
      }
      step.separator = best_x;
      step.kept = kept.size();
      out.audit.push_back(step);
      if (kept.empty()) {
        out.width_branch_failed = true;
        out.separated = {make_packing(pattern, {}), {xs, ys}};
        return out;
      }
      seps.push_back(best_x);
      collection = std::move(kept);
      out.final_matrix = keep_only(collection);
    }
  }
  out.separated = {make_packing(pattern, collection), {xs, ys}};
  return out;
}

}  // namespace removal
