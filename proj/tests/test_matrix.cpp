#include <gtest/gtest.h>

#include <algorithm>

#include <sstream>

#include "removal/errors.hpp"
#include "removal/instances.hpp"
#include "removal/matrix.hpp"
#include "removal/rational.hpp"
#include "removal/rng.hpp"

using namespace removal;

TEST(Rational, NormalizesAndCompares) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(3, -6).str(), "-1/2");
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(Rational(1, 50) / Rational(1, 5000), Rational(100));
  EXPECT_EQ(Rational::parse("0.25"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("7/21"), Rational(1, 3));
  EXPECT_EQ(Rational(1, 5).floor_times(128), 25);
  EXPECT_EQ(Rational(1, 5).ceil_times(128), 26);
  EXPECT_THROW((void)Rational::parse("x/2"), std::invalid_argument);
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(Matrix, ParseAndSerializeRoundTrip) {
  const std::string text = "2 3 3\n0 1 2\n2 1 0\n";
  const auto m = parse_matrix(text);
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m(1, 3), 2);
  EXPECT_EQ(m(2, 1), 2);
  EXPECT_EQ(serialize_matrix(m), text);
  EXPECT_EQ(parse_matrix(serialize_matrix(m)), m);
}

TEST(Matrix, ParseErrorsCarryKindAndLine) {
  auto kind_of = [](const std::string& text) {
    try {
      (void)parse_matrix(text);
    } catch (const ParseError& e) {
      return std::pair{e.kind(), e.line()};
    }
    return std::pair{ParseErrorKind::kMalformedRecord, std::size_t{0}};
  };
  EXPECT_EQ(kind_of("2 2\n0 1\n1 0\n").first, ParseErrorKind::kMalformedHeader);
  EXPECT_EQ(kind_of("2 2 2\n0 1\n1 2\n"), std::pair(ParseErrorKind::kSymbolOutOfRange, std::size_t{3}));
  EXPECT_EQ(kind_of("2 2 2\n0 1 1\n1 0\n"), std::pair(ParseErrorKind::kRowLengthMismatch, std::size_t{2}));
  EXPECT_EQ(kind_of("2 2 2\n0 1\n").first, ParseErrorKind::kRowCountMismatch);
  EXPECT_EQ(kind_of("2 2 2\n0 x\n1 0\n").first, ParseErrorKind::kMalformedSymbol);
}

TEST(Matrix, AlphabetBounds) {
  EXPECT_THROW(Alphabet(1), InputError);
  EXPECT_THROW(Alphabet(257), InputError);
  EXPECT_EQ(Alphabet(3).augmented().size(), 4u);
  EXPECT_THROW(DenseMatrix::from_rows({{0, 2}}), InputError);
}

TEST(Matrix, SubmatrixIndexValidation) {
  EXPECT_NO_THROW((SubmatrixIndex{{1, 3}, {2, 4}}.validate(3, 4)));
  EXPECT_THROW((SubmatrixIndex{{3, 1}, {2, 4}}.validate(3, 4)), InputError);
  EXPECT_THROW((SubmatrixIndex{{1, 1}, {2, 4}}.validate(3, 4)), InputError);
  EXPECT_THROW((SubmatrixIndex{{1, 4}, {2, 4}}.validate(3, 4)), InputError);
  EXPECT_THROW((SubmatrixIndex{{0, 1}, {2, 4}}.validate(3, 4)), InputError);
}

TEST(Matrix, ExtractAndMatch) {
  const auto id = DenseMatrix::identity(4);
  const SubmatrixIndex idx{{1, 4}, {1, 4}};
  EXPECT_EQ(extract_submatrix(id, idx), DenseMatrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_TRUE(matches_at(id, idx, DenseMatrix::from_rows({{1, 0}, {0, 1}})));
  EXPECT_FALSE(matches_at(id, {{1, 4}, {1, 3}}, DenseMatrix::from_rows({{1, 0}, {0, 1}})));
}

TEST(Matrix, FoldRemovesRepeatedRowsThenColumns) {
  const auto p = DenseMatrix::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(fold_rows(p), DenseMatrix::from_rows({{1, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(fold(p), DenseMatrix::from_rows({{1, 0}, {0, 1}}));
  EXPECT_FALSE(is_unfoldable(p));
  EXPECT_TRUE(is_unfoldable(DenseMatrix::from_rows({{1, 0}, {0, 1}})));
  // Non-adjacent equal rows are not folded.
  EXPECT_TRUE(is_unfoldable(DenseMatrix::from_rows({{1, 0}, {0, 1}, {1, 0}})));
}

TEST(Matrix, SeparatedUsesHalfOpenBands) {
  const SeparatorSet sep{{2}, {3}};
  EXPECT_TRUE(is_separated({{2, 3}, {3, 4}}, sep));
  EXPECT_FALSE(is_separated({{3, 4}, {3, 4}}, sep));
  EXPECT_FALSE(is_separated({{1, 2}, {3, 4}}, sep));
  EXPECT_FALSE(is_separated({{1, 3}, {4, 5}}, sep));
  EXPECT_THROW(SeparatorSet({3, 2}, {}).validate(5, 5), InputError);
  EXPECT_THROW(SeparatorSet({5}, {}).validate(5, 5), InputError);
}

TEST(Matrix, CopyWidth) {
  EXPECT_EQ(copy_width({{1, 4}, {1, 4}}, Axis::kRow, 1, 4, 4), Rational(3, 4));
  EXPECT_EQ(copy_width({{1, 2, 7}, {1, 5}}, Axis::kRow, 2, 10, 5), Rational(1, 2));
  EXPECT_EQ(copy_width({{1, 2}, {1, 5}}, Axis::kCol, 1, 10, 5), Rational(4, 5));
}

TEST(Matrix, ReorderingMovesRowsToImages) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {0, 1}}, 3);
  const Reordering swap_rows{{2, 1}, {1, 2}};
  EXPECT_EQ(apply_reordering(a, swap_rows), DenseMatrix::from_rows({{0, 1}, {1, 2}}, 3));
  const Reordering cyc{{2, 3, 1}, {1}};
  const auto col = DenseMatrix::from_rows({{0}, {1}, {2}}, 3);
  // out(sigma1(a), b) = in(a, b): row 1 lands at position 2.
  EXPECT_EQ(apply_reordering(col, cyc), DenseMatrix::from_rows({{2}, {0}, {1}}, 3));
  EXPECT_EQ(Reordering::all(2, 3).size(), 12u);
  EXPECT_EQ(Reordering::all(3, 3).size(), 36u);
}

TEST(Matrix, ComposeMatchesSequentialApplication) {
  const auto a = DenseMatrix::from_rows({{1, 0, 2}, {0, 2, 1}, {2, 1, 0}}, 3);
  for (const auto& x : Reordering::all(3, 3)) {
    for (const auto& y : {Reordering{{3, 1, 2}, {2, 3, 1}}, Reordering{{1, 3, 2}, {3, 2, 1}}}) {
      EXPECT_EQ(apply_reordering(a, compose(x, y)), apply_reordering(apply_reordering(a, y), x));
    }
  }
}

TEST(Matrix, DisjointnessAndCopySetVerification) {
  const auto id = DenseMatrix::identity(4);
  const auto i2 = DenseMatrix::from_rows({{1, 0}, {0, 1}});
  const std::vector<SubmatrixIndex> ok{{{1, 2}, {1, 2}}, {{3, 4}, {3, 4}}};
  const std::vector<SubmatrixIndex> clash{{{1, 2}, {1, 2}}, {{1, 3}, {1, 3}}};
  EXPECT_TRUE(pairwise_disjoint(ok));
  EXPECT_FALSE(pairwise_disjoint(clash));
  EXPECT_TRUE(verify_copy_set(id, {i2, ok, true}));
  EXPECT_FALSE(verify_copy_set(id, {i2, clash, true}));
  EXPECT_TRUE(verify_copy_set(id, {i2, clash, false}));
  EXPECT_FALSE(verify_copy_set(id, {i2, {{{1, 2}, {2, 3}}}, false}));
}

TEST(Matrix, CopiesJsonlRoundTrip) {
  const std::vector<SubmatrixIndex> cs{{{1, 5}, {2, 3}}, {{2, 4}, {1, 9}}};
  std::ostringstream out;
  write_copies_jsonl(out, cs);
  EXPECT_EQ(parse_copies_jsonl(out.str()), cs);
  EXPECT_THROW((void)parse_copies_jsonl(std::string_view("{\"rows\":[1]}\n")), ParseError);
}

TEST(Rng, StreamsAreReproducibleAndIndependent) {
  CounterRng a(42, 1), b(42, 1), c(42, 2);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    (void)c;
  }
  EXPECT_NE(CounterRng(42, 1).next(), CounterRng(42, 2).next());
  CounterRng r(7);
  for (int i = 0; i < 200; ++i) {
    const auto s = r.subset(20, 5);
    ASSERT_EQ(s.size(), 5u);
    EXPECT_TRUE(std::ranges::is_sorted(s));
    EXPECT_EQ(std::ranges::adjacent_find(s), s.end());
    EXPECT_GE(s.front(), 1u);
    EXPECT_LE(s.back(), 20u);
  }
}

TEST(Instances, StaircaseIsFreeOfBothDiagonals) {
  const auto m = staircase(30, 30, 5);
  for (std::size_t i = 1; i <= 30; ++i) {
    for (std::size_t j = 2; j <= 30; ++j) EXPECT_LE(m(i, j - 1), m(i, j));
  }
  const auto t = periodic_tiling(DenseMatrix::from_rows({{1, 0}, {0, 1}}), 5, 4);
  EXPECT_EQ(t, DenseMatrix::from_rows({{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1},
                                       {1, 0, 1, 0}}));
}

TEST(Instances, BlockStructuredClassesAreSurjective) {
  const auto b = block_structured(40, 30, 6, 5, 0.0, 9);
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_NE(std::ranges::find(b.row_class, k), b.row_class.end());
  for (std::size_t k = 1; k <= 5; ++k) EXPECT_NE(std::ranges::find(b.col_class, k), b.col_class.end());
  EXPECT_EQ(b.flipped, 0u);
  for (std::size_t i = 1; i <= 40; ++i) {
    for (std::size_t i2 = 1; i2 <= 40; ++i2) {
      if (b.row_class[i - 1] != b.row_class[i2 - 1]) continue;
      EXPECT_TRUE(std::ranges::equal(b.matrix.row(i), b.matrix.row(i2)));
    }
  }
}
