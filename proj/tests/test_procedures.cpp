#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "removal/constructions.hpp"
#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/instances.hpp"
#include "removal/procedures.hpp"

using namespace removal;

namespace {

const Pattern kI2 = DenseMatrix::from_rows({{1, 0}, {0, 1}});
const Pattern kB = DenseMatrix::from_rows({{0, 1}, {1, 0}});
const std::vector<double> kZero{1.0, 0.0};

bool family_copies_ok(const DenseMatrix& m, const std::vector<Pattern>& fam,
                      const std::vector<FamilyCopy>& copies) {
  std::vector<SubmatrixIndex> plain;
  for (const auto& c : copies) {
    if (c.member >= fam.size() || !matches_at(m, c.copy, fam[c.member])) return false;
    plain.push_back(c.copy);
  }
  return pairwise_disjoint(plain);
}

}  // namespace

TEST(Strip, SplitCountOnAlternatingStrip) {
  const auto strip = DenseMatrix::from_rows({{1, 0, 1, 0, 1, 0, 1, 0}});
  const Pattern a = DenseMatrix::from_rows({{1, 0}});
  const auto p = greedy_maximal_packing(strip, a);
  ASSERT_EQ(p.size(), 4u);
  const auto b = strip_split_count(strip, a, p);
  ASSERT_EQ(b.witness.groups.size(), 2u);
  EXPECT_EQ(b.witness.groups[0].size(), 2u);
  EXPECT_EQ(b.lower_bound, CopyCount::of(4));
  EXPECT_TRUE(b.all_checked_match);
  EXPECT_EQ(count_copies_in_strip(strip, a), CopyCount::of(10));
}

TEST(Strip, LowerBoundNeverExceedsTheCount) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto strip = random_binary(2, 40, 0.5, seed);
    const auto p = greedy_maximal_packing(strip, kI2);
    const auto b = strip_split_count(strip, kI2, p);
    EXPECT_TRUE(b.all_checked_match);
    EXPECT_LE(b.lower_bound, count_copies_in_strip(strip, kI2));
    // Groups are column-ordered: every column of group i precedes group i+1's.
    for (std::size_t g = 0; g + 1 < b.witness.groups.size(); ++g) {
      for (const auto& x : b.witness.groups[g]) {
        for (const auto& y : b.witness.groups[g + 1]) EXPECT_LT(x.cols[g], y.cols[g + 1]);
      }
    }
  }
}

TEST(Folding, AllOnesColumnPattern) {
  const auto ones = DenseMatrix::filled(10, 10, Alphabet(2), 1);
  const auto r = folding_bound_check(ones, DenseMatrix::from_rows({{1}, {1}}));
  EXPECT_EQ(r.folded, DenseMatrix::from_rows({{1}}));
  EXPECT_EQ(r.folded_count, CopyCount::of(100));
  EXPECT_EQ(r.actual_count, CopyCount::of(450));
  ASSERT_TRUE(r.predicted_exact);
  EXPECT_EQ(*r.predicted_exact, Rational(5));
  EXPECT_DOUBLE_EQ(r.predicted, 5.0);
  EXPECT_TRUE(r.holds);
}

TEST(Folding, BoundHoldsOnRandomSquareMatrices) {
  const Pattern a = DenseMatrix::from_rows({{1, 0}, {1, 0}, {0, 1}});
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto mat = random_binary(12, 12, 0.5, seed);
    const auto r = folding_bound_check(mat, a);
    EXPECT_EQ(r.actual_count.value, oracle::count(mat, a));
    EXPECT_TRUE(r.holds);
  }
  EXPECT_THROW((void)folding_bound_check(random_binary(4, 5, 0.5, 1), a), InputError);
}

TEST(Separation, BlowupInstancesSeparateAndVerify) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = blowup_instance(10, 60, 0.5, kI2, seed);
    const auto res = separator_extraction(inst.matrix, kI2, inst.packing);
    ASSERT_EQ(res.status, SeparationStatus::kSeparated) << res.message;
    ASSERT_TRUE(res.result);
    EXPECT_TRUE(verify_separated_packing(inst.matrix, *res.result));
    EXPECT_EQ(res.failed_step, 0u);
    EXPECT_EQ(res.audit.size(), 2u);
    for (const auto& st : res.audit) EXPECT_TRUE(st.audit_ok);
    // Each separated copy is also counted by the band-restricted count.
    EXPECT_GE(count_separated_copies(inst.matrix, kI2, res.result->separators).value,
              res.result->packing.size());
  }
}

TEST(Separation, SparsePlantingReportsExhaustion) {
  const auto inst = plant_disjoint_copies(60, 60, kI2, 180, kZero, 3);
  const auto res = separator_extraction(inst.matrix, kI2, inst.packing);
  EXPECT_NE(res.status, SeparationStatus::kSeparated);
  EXPECT_FALSE(res.result);
  EXPECT_GT(res.failed_step, 0u);
  EXPECT_FALSE(res.message.empty());
}

TEST(Separation, ChecksItsInput) {
  const auto id = DenseMatrix::identity(6);
  Packing bad{CopySet{kI2, {{{1, 2}, {1, 2}}, {{1, 3}, {1, 3}}}, true}, false};
  EXPECT_THROW((void)separator_extraction(id, kI2, bad), InputError);
  Packing wrong{CopySet{kI2, {{{1, 2}, {2, 3}}}, true}, false};
  EXPECT_THROW((void)separator_extraction(id, kI2, wrong), InputError);
}

TEST(Separation, CheckerRejectsUnseparatedCopies) {
  const auto id = DenseMatrix::identity(4);
  SeparatedPacking sp{Packing{CopySet{kI2, {{{1, 4}, {1, 4}}}, true}, false}, SeparatorSet{{2}, {2}}};
  EXPECT_TRUE(verify_separated_packing(id, sp));
  sp.separators = {{1}, {1}};
  EXPECT_TRUE(verify_separated_packing(id, sp));
  sp.separators = {{3}, {2}};
  EXPECT_TRUE(verify_separated_packing(id, sp));
  sp.separators = {{2}, {3}};
  EXPECT_TRUE(verify_separated_packing(id, sp));
  sp.separators = {{3}, {3}};
  EXPECT_TRUE(verify_separated_packing(id, sp));
  sp.packing.copy_set.copies = {{{1, 2}, {1, 2}}};
  EXPECT_FALSE(verify_separated_packing(id, sp));
}

TEST(Repair, FamilyClosure) {
  const std::vector<Pattern> fam{kI2, kB};
  EXPECT_TRUE(is_closed_under_row_permutations(fam));
  const std::vector<Pattern> half{kI2};
  EXPECT_FALSE(is_closed_under_row_permutations(half));
  EXPECT_EQ(row_permutation_closure(half).size(), 2u);
  const std::vector<Pattern> foldable{DenseMatrix::from_rows({{1, 0}, {1, 0}})};
  EXPECT_FALSE(is_closed_under_row_permutations(foldable));
  const auto id = DenseMatrix::identity(8);
  EXPECT_THROW((void)row_perm_repair(id, half, Rational(1, 4), 8), InputError);
  EXPECT_THROW((void)row_perm_repair(id, foldable, Rational(1, 4), 8), InputError);
  EXPECT_THROW((void)row_perm_repair(id, std::vector<Pattern>{}, Rational(1, 4), 8), InputError);
}

TEST(Repair, EveryBranchVerifies) {
  const std::vector<Pattern> fam{kI2, kB};
  int edits = 0, copies = 0;
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const auto mat = seed % 3 == 0   ? random_binary(24, 24, 0.5, seed)
                     : seed % 3 == 1 ? block_structured(24, 24, 3, 3, 0.02, seed).matrix
                                     : staircase(24, 24, seed);
    const Rational eps = seed % 2 ? Rational(1, 8) : Rational(1, 4);
    const auto res = row_perm_repair(mat, fam, eps, 24);
    ASSERT_NE(res.branch, RepairBranch::kDensityBranch);
    EXPECT_TRUE(verify_repair(mat, fam, res));
    EXPECT_EQ(res.edit_budget, static_cast<std::size_t>((Rational(5, 6) * eps).ceil_times(24 * 24)));
    if (res.branch == RepairBranch::kEdit) {
      ++edits;
      ASSERT_TRUE(res.edits);
      EXPECT_LE(res.edits->edits.size(), res.edit_budget);
      const auto fixed = apply_edits(mat, res.edits->edits);
      for (const auto& a : fam) EXPECT_EQ(oracle::count(fixed, a), 0u);
    } else {
      ++copies;
      EXPECT_TRUE(family_copies_ok(mat, fam, res.copies));
      EXPECT_GT(Rational(static_cast<std::int64_t>(res.copies.size())), res.packing_threshold);
      for (const auto& c : res.copies) {
        for (const auto r : c.copy.rows) {
          EXPECT_NE(std::ranges::find(res.representatives, r), res.representatives.end());
        }
      }
    }
  }
  EXPECT_GT(edits, 0);
  EXPECT_GT(copies, 0);
}

TEST(Repair, TamperedCertificatesAreRejected) {
  const std::vector<Pattern> fam{kI2, kB};
  const auto mat = staircase(24, 24, 1);
  auto res = row_perm_repair(mat, fam, Rational(1, 4), 24);
  ASSERT_EQ(res.branch, RepairBranch::kEdit);
  EXPECT_TRUE(verify_repair(mat, fam, res));
  // Staircases are already free; inject an edit that creates a copy.
  const auto noisy = random_binary(24, 24, 0.5, 2);
  res = row_perm_repair(noisy, fam, Rational(1, 4), 24);
  if (res.branch == RepairBranch::kCopies) {
    res.copies.push_back(res.copies.front());
    EXPECT_FALSE(verify_repair(noisy, fam, res));
  } else {
    res.edits->edits.clear();
    EXPECT_FALSE(verify_repair(noisy, fam, res));
  }
  RepairOutcome density;
  EXPECT_FALSE(verify_repair(noisy, fam, density));
}

TEST(Repair, GreedyFamilyPackingIsDisjoint) {
  const std::vector<Pattern> fam{kI2, kB};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto mat = random_binary(10, 10, 0.5, seed);
    const auto p = greedy_family_packing(mat, fam);
    EXPECT_TRUE(family_copies_ok(mat, fam, p));
    EXPECT_FALSE(p.empty());
  }
}

TEST(Augmented, BlowupInstancesSeparate) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = blowup_instance(6, 30, 0.5, kI2, seed);
    const auto r = augmented_separator_iteration(inst.matrix, kI2, inst.packing);
    EXPECT_EQ(r.final_matrix.alphabet().size(), 3u);
    ASSERT_FALSE(r.width_branch_failed);
    EXPECT_TRUE(verify_separated_packing(inst.matrix, r.separated));
    EXPECT_EQ(r.audit.size(), 2u);
    // Entries outside the kept copies are alpha.
    std::size_t non_alpha = 0;
    for (const auto v : r.final_matrix.entries()) non_alpha += v != 2 ? 1 : 0;
    EXPECT_EQ(non_alpha, 4 * r.separated.packing.size());
  }
}

TEST(Augmented, CopySharingAnOwnerTwiceIsHandled) {
  // A wide copy may reuse two cells of one collection copy; this instance
  // once tripped the ownership check.
  const auto inst = plant_disjoint_copies(12, 12, kI2, 8, kZero, 3);
  const auto r = augmented_separator_iteration(inst.matrix, kI2, inst.packing);
  if (!r.width_branch_failed) EXPECT_TRUE(verify_separated_packing(inst.matrix, r.separated));
}

TEST(Augmented, EmptyPackingFailsTheWidthBranch) {
  const auto id = DenseMatrix::identity(5);
  const auto r = augmented_separator_iteration(id, kI2, Packing{CopySet{kI2, {}, true}, false});
  EXPECT_TRUE(r.width_branch_failed);
  EXPECT_TRUE(r.separated.packing.copy_set.copies.empty());
}

TEST(Augmented, FrBaseMatrixSeparatesAtTheMiddle) {
  const auto inst = lower_bound_base(20, behrend_set(2));
  const auto r = augmented_separator_iteration(inst.base, lb_pattern_a(),
                                               Packing{inst.planted, false});
  ASSERT_FALSE(r.width_branch_failed);
  EXPECT_EQ(r.separated.packing.size(), inst.q);
  EXPECT_TRUE(verify_separated_packing(inst.base, r.separated));
}
