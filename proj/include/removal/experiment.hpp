#pragma once

// Declarative experiment runner. A spec is a line-based list of steps:
//
//   # comment
//   seed 42
//   gap-table m=10,20
//   lb-blowup m=10 n=20
//   count seeds=5 n=12 p=1/2 pattern=10/01
//   plant-pack n=20 target=5 pattern=I2
//   plant-test n=200 eps=1/20 q=2,8,32 trials=200 pattern=I2
//   repair-sweep seeds=20 n=32 eps=1/4 pattern=I2
//   separate-sweep seeds=5 n=60 density=1/20 pattern=I2 [base=10]
//
// Patterns are "I2", "B" (the anti-diagonal) or rows joined by '/'.
// Step k (1-based) runs on derive_seed(master, k), so output depends only
// on the spec text.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "removal/config.hpp"
#include "removal/matrix.hpp"

namespace removal {

struct ExperimentRow {
  std::string instance;
  std::size_t n = 0;
  std::string epsilon;
  std::optional<double> rejection_frequency;
  std::optional<double> copy_density;
  std::uint64_t seed = 0;
  std::string note;
};

struct ExperimentStep {
  std::size_t line = 0;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> args;
};

struct ExperimentSpec {
  std::uint64_t seed = 0;
  std::vector<ExperimentStep> steps;
};

/// Throws ParseError (with the offending line) on unknown steps, unknown or
/// missing keys, and malformed values.
[[nodiscard]] ExperimentSpec parse_experiment(std::istream& in);
[[nodiscard]] ExperimentSpec parse_experiment(std::string_view text);

/// "I2", "B", or rows such as "10/01".
[[nodiscard]] Pattern parse_pattern_literal(std::string_view text);

[[nodiscard]] std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec,
                                                        const Limits& limits = {});

inline constexpr std::string_view kExperimentCsvHeader =
    "instance,n,epsilon,rejection_frequency,copy_density,seed,note";

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

}  // namespace removal
