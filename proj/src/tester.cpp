#include "removal/tester.hpp"

#include <algorithm>
#include <stdexcept>

#include "removal/counting.hpp"
#include "removal/errors.hpp"
#include "removal/rng.hpp"

namespace removal {

TesterResult freeness_tester(const DenseMatrix& matrix, const TesterConfig& cfg,
                             const Limits& limits) {
  if (cfg.family.empty()) throw InputError("tester: family is empty");
  if (cfg.trials == 0) throw InputError("tester: trials must be >= 1");
  std::size_t dim = 0;
  for (const auto& p : cfg.family) dim = std::max({dim, p.rows(), p.cols()});
  if (cfg.q < dim) throw InputError("tester: q is smaller than a family member");
  if (cfg.q > std::min(matrix.rows(), matrix.cols())) {
    throw InputError("tester: q = " + std::to_string(cfg.q) + " exceeds min(m, n)");
  }

  TesterResult result;
  result.trials.reserve(cfg.trials);
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    CounterRng rng(derive_seed(cfg.seed, k));
    SubmatrixIndex sample{rng.subset(matrix.rows(), cfg.q), rng.subset(matrix.cols(), cfg.q)};
    const auto sub = extract_submatrix(matrix, sample);
    TrialVerdict verdict;
    for (std::size_t f = 0; f < cfg.family.size() && !verdict.reject; ++f) {
      auto hit = first_copy(sub, cfg.family[f], limits);
      if (!hit) continue;
      SubmatrixIndex w;
      for (const auto r : hit->rows) w.rows.push_back(sample.rows[r - 1]);
      for (const auto c : hit->cols) w.cols.push_back(sample.cols[c - 1]);
      if (!matches_at(matrix, w, cfg.family[f])) {
        throw std::logic_error("tester: witness does not match in the input matrix");
      }
      verdict.reject = true;
      verdict.witness = FamilyCopy{f, std::move(w)};
    }
    result.rejections += verdict.reject ? 1 : 0;
    result.trials.push_back(std::move(verdict));
  }
  return result;
}

}  // namespace removal
