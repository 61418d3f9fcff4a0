#pragma once

// One-sided freeness tester: sample q random rows and q random columns and
// reject iff the sampled submatrix contains a family member.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "removal/config.hpp"
#include "removal/matrix.hpp"
#include "removal/procedures.hpp"
#include "removal/rational.hpp"

namespace removal {

struct TesterConfig {
  std::size_t q = 0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<Pattern> family;
};

struct TrialVerdict {
  bool reject = false;
  /// Present exactly when reject is set; coordinates are in the input matrix.
  std::optional<FamilyCopy> witness;
};

struct TesterResult {
  std::vector<TrialVerdict> trials;
  std::size_t rejections = 0;
  [[nodiscard]] Rational frequency() const {
    return {static_cast<std::int64_t>(rejections), static_cast<std::int64_t>(trials.size())};
  }
};

/// Trial k draws its rows and columns from CounterRng(derive_seed(seed, k)).
/// Every witness is re-checked with matches_at against the full matrix;
/// a mismatch is a logic error, never a silent reject.
[[nodiscard]] TesterResult freeness_tester(const DenseMatrix& matrix, const TesterConfig& cfg,
                                           const Limits& limits = {});

}  // namespace removal
