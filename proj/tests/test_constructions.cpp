#include <gtest/gtest.h>

#include <algorithm>

#include <sstream>

#include "oracles.hpp"
#include "removal/constructions.hpp"
#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/packing.hpp"
#include "removal/rng.hpp"

using namespace removal;

TEST(Behrend, SmallCases) {
  EXPECT_EQ(behrend_set(1).elements, (std::vector<std::size_t>{1}));
  EXPECT_EQ(behrend_set(2).elements, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(behrend_set(10).elements.size(), 4u);
}

TEST(Behrend, SetsAreSolutionFreeAndGrow) {
  std::size_t prev = 0;
  for (std::size_t m = 1; m <= 150; ++m) {
    const auto b = behrend_set(m);
    EXPECT_TRUE(oracle::solution_free(b.elements)) << "m = " << m;
    EXPECT_TRUE(std::ranges::is_sorted(b.elements));
    EXPECT_GE(b.elements.front(), 1u);
    EXPECT_LE(b.elements.back(), m);
    EXPECT_GE(b.elements.size(), prev);
    prev = b.elements.size();
  }
}

TEST(Behrend, VerifierAgreesWithQuadrupleSearch) {
  EXPECT_FALSE(verify_solution_free(std::vector<std::size_t>{1, 2, 3}));
  EXPECT_FALSE(verify_solution_free(std::vector<std::size_t>{1, 2, 4}));
  EXPECT_TRUE(verify_solution_free(std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(verify_solution_free(std::vector<std::size_t>{}));
  CounterRng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto xs = rng.subset(30, 1 + rng.uniform(6));
    EXPECT_EQ(verify_solution_free(xs), oracle::solution_free(xs));
  }
}

TEST(LowerBound, BaseMatrixTen) {
  const auto inst = lower_bound_base(10, BehrendSet{1, {1}, "given"});
  EXPECT_EQ(inst.q, 2u);
  EXPECT_EQ(inst.base.alphabet().size(), 3u);
  const std::vector<SubmatrixIndex> expected{{{1, 8}, {2, 9}}, {{2, 9}, {3, 10}}};
  EXPECT_EQ(inst.planted.copies, expected);
  EXPECT_EQ(oracle::copies(inst.base, lb_pattern_a()), expected);
  EXPECT_EQ(oracle::count(inst.base, lb_pattern_b()), 0u);
}

TEST(LowerBound, BaseMatrixTwenty) {
  const auto inst = lower_bound_base(20, behrend_set(2));
  EXPECT_EQ(inst.q, 8u);
  EXPECT_EQ(oracle::count(inst.base, lb_pattern_a()), 8u);
  EXPECT_EQ(oracle::count(inst.base, lb_pattern_b()), 0u);
  EXPECT_TRUE(verify_copy_set(inst.base, inst.planted));
}

TEST(LowerBound, RejectsBadInput) {
  EXPECT_THROW((void)lower_bound_base(15, behrend_set(1)), InputError);
  EXPECT_THROW((void)lower_bound_base(10, BehrendSet{1, {2}, "given"}), InputError);
  // {1, 2, 3} has a solution; the placements collide before any count.
  EXPECT_ANY_THROW((void)lower_bound_base(30, BehrendSet{3, {1, 2, 3}, "given"}));
}

TEST(Blowup, IndexingAndCounts) {
  const auto base = DenseMatrix::from_rows({{1, 0}, {0, 1}});
  const auto big = blowup(base, 4);
  EXPECT_EQ(big, DenseMatrix::from_rows({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}));
  EXPECT_THROW((void)blowup(base, 5), InputError);
  EXPECT_THROW((void)blowup(DenseMatrix::from_rows({{1, 0}}), 4), InputError);

  const auto inst = lower_bound_base(10, behrend_set(1));
  const auto n20 = blowup(inst.base, 20);
  EXPECT_EQ(count_copies(n20, lb_pattern_a()), CopyCount::of(32));
  EXPECT_EQ(oracle::count(n20, lb_pattern_a()), 32u);
  EXPECT_EQ(count_copies(n20, lb_pattern_b()).value, 0u);
  const auto packing = blowup_packing(inst.planted, 10, 20);
  EXPECT_EQ(packing.copies.size(), 8u);
  EXPECT_TRUE(verify_copy_set(n20, packing));
  EXPECT_EQ(exact_max_packing(n20, lb_pattern_a()).size(), 8u);
}

TEST(GapTable, FrozenRows) {
  const std::vector<std::size_t> ms{20, 10};
  const auto rows = gap_table(ms);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].m, 10u);
  EXPECT_EQ(rows[0].eps_hat, Rational(1, 50));
  EXPECT_EQ(rows[0].delta_hat, Rational(1, 5000));
  EXPECT_EQ(rows[0].ratio, Rational(1, 100));
  EXPECT_EQ(rows[1].eps_hat, Rational(1, 50));
  EXPECT_EQ(rows[1].delta_hat, Rational(1, 20000));
  EXPECT_EQ(rows[1].ratio, Rational(1, 400));
  std::ostringstream csv;
  write_gap_table_csv(csv, rows);
  EXPECT_EQ(csv.str(),
            "m,set_size,eps_hat,delta_hat,ratio,eps_hat_decimal,delta_hat_decimal,ratio_decimal\n"
            "10,1,1/50,1/5000,1/100,0.02,0.0002,0.01\n"
            "20,2,1/50,1/20000,1/400,0.02,5e-05,0.0025\n");
}

TEST(GapTable, DeltaTimesMSquaredIsEps) {
  std::vector<std::size_t> ms;
  for (std::size_t m = 10; m <= 300; m += 10) ms.push_back(m);
  for (const auto& r : gap_table(ms)) {
    const auto mm = static_cast<std::int64_t>(r.m);
    EXPECT_EQ(r.delta_hat * Rational(mm * mm), r.eps_hat);
    EXPECT_EQ(r.ratio, Rational(1, mm * mm));
  }
  const std::vector<std::size_t> bad{10, 25};
  EXPECT_THROW((void)gap_table(bad), InputError);
}
