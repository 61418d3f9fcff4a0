#include "removal/constructions.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "removal/counting.hpp"
#include "removal/errors.hpp"

namespace removal {
namespace {

/// Greedy solution-free sequence over 1, 2, 3, ...; the greedy set for [1, m]
/// is its prefix below m, so one shared sequence serves every m.
class GreedySequence {
 public:
  std::vector<std::size_t> up_to(std::size_t m) {
    std::lock_guard lock(mu_);
    while (scanned_ < m) extend(++scanned_);
    return {elems_.begin(), std::ranges::upper_bound(elems_, m)};
  }

 private:
  void extend(std::size_t x) {
    member_.resize(x + 1, 0);
    // x is the largest element, so it cannot be x4 of a non-trivial solution.
    for (const auto x4 : elems_) {
      const long target = 3L * static_cast<long>(x4);
      // Two copies of x and one y.
      const long y = target - 2L * static_cast<long>(x);
      if (y >= 1 && has(y)) return;
      // One copy of x plus y + z.
      for (const auto yy : elems_) {
        const long z = target - static_cast<long>(x) - static_cast<long>(yy);
        if (z >= 1 && has(z)) return;
      }
    }
    elems_.push_back(x);
    member_[x] = 1;
  }
  [[nodiscard]] bool has(long v) const {
    return static_cast<std::size_t>(v) < member_.size() && member_[static_cast<std::size_t>(v)];
  }

  std::mutex mu_;
  std::size_t scanned_ = 0;
  std::vector<std::size_t> elems_;
  std::vector<char> member_;
};

GreedySequence& greedy_sequence() {
  static GreedySequence g;
  return g;
}

}  // namespace

bool verify_solution_free(std::span<const std::size_t> xs) {
  if (xs.empty()) return true;
  const std::size_t top = *std::ranges::max_element(xs);
  std::vector<char> member(top + 1, 0);
  for (const auto x : xs) member[x] = 1;
  std::vector<std::size_t> v;
  for (std::size_t x = 0; x <= top; ++x) {
    if (member[x]) v.push_back(x);
  }
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a; b < v.size(); ++b) {
      for (std::size_t c = b; c < v.size(); ++c) {
        const std::size_t sum = v[a] + v[b] + v[c];
        if (sum % 3 != 0) continue;
        const std::size_t x4 = sum / 3;
        if (x4 <= top && member[x4] && !(v[a] == v[c] && v[a] == x4)) return false;
      }
    }
  }
  return true;
}

BehrendSet behrend_set(std::size_t m) {
  if (m < 1) throw InputError("behrend_set needs m >= 1");
  BehrendSet best{m, {1}, "singleton"};
  constexpr std::uint64_t kVectorCap = 2'000'000;
  for (std::size_t d = 2; d <= m; ++d) {
    const std::size_t base = 3 * d - 2;
    // Largest value with k digits is (d-1)(base^k - 1)/(base - 1), shifted by 1.
    std::uint64_t power = 1;  // base^(k-1)
    std::uint64_t vectors = 1;
    bool any_k = false;
    for (std::size_t k = 1;; ++k) {
      const std::uint64_t top = (d - 1) * ((power * base - 1) / (base - 1)) + 1;
      vectors *= d;
      if (top > m || vectors > kVectorCap) break;
      any_k = true;
      // One digit gives singleton shells only.
      if (k == 1) {
        power *= base;
        continue;
      }
      std::map<std::size_t, std::vector<std::size_t>> shells;
      for (std::uint64_t code = 0; code < vectors; ++code) {
        std::uint64_t rest = code;
        std::size_t value = 0, norm = 0, place = 1;
        for (std::size_t p = 0; p < k; ++p) {
          const std::size_t digit = rest % d;
          rest /= d;
          value += digit * place;
          norm += digit * digit;
          place *= base;
        }
        shells[norm].push_back(value + 1);
      }
      for (auto& [norm, values] : shells) {
        if (values.size() > best.elements.size()) {
          std::ranges::sort(values);
          best.elements = values;
          best.method = fmt::format("digits d={} k={} norm={}", d, k, norm);
        }
      }
      power *= base;
    }
    if (!any_k) break;
  }
  auto greedy = greedy_sequence().up_to(m);
  if (greedy.size() > best.elements.size()) {
    best.elements = std::move(greedy);
    best.method = "greedy";
  }
  if (!verify_solution_free(best.elements)) {
    throw std::logic_error("behrend_set produced a set with a non-trivial solution");
  }
  return best;
}

Pattern lb_pattern_a() { return DenseMatrix::from_rows({{1, 0}, {0, 1}}); }
Pattern lb_pattern_b() { return DenseMatrix::from_rows({{0, 1}, {1, 0}}); }

LowerBoundInstance lower_bound_base(std::size_t m, const BehrendSet& xs, bool verify,
                                  const Limits& limits) {
  if (m == 0 || m % 10 != 0) throw InputError("lower_bound_base: m must be a positive multiple of 10");
  for (const auto x : xs.elements) {
    if (x < 1 || x > m / 10) {
      throw InputError("lower_bound_base: element " + std::to_string(x) + " outside [1, " +
                       std::to_string(m / 10) + "]");
    }
  }
  DenseMatrix base = DenseMatrix::filled(m, m, Alphabet(3), 2);
  std::vector<char> written(m * m, 0);
  auto put = [&](std::size_t i, std::size_t j, Symbol v) {
    auto& w = written[(i - 1) * m + (j - 1)];
    if (w && base(i, j) != v) {
      throw std::logic_error("lower_bound_base: conflicting placements at (" + std::to_string(i) +
                             "," + std::to_string(j) + ")");
    }
    w = 1;
    base.set(i, j, v);
  };
  std::vector<SubmatrixIndex> copies;
  const std::size_t h = m / 2;
  for (std::size_t i = 1; i <= m / 5; ++i) {
    for (const auto x : xs.elements) {
      put(i, i + x, 1);
      put(h + i + 2 * x, h + i + 3 * x, 1);
      put(i, h + i + 3 * x, 0);
      put(h + i + 2 * x, i + x, 0);
      copies.push_back({{i, h + i + 2 * x}, {i + x, h + i + 3 * x}});
    }
  }
  std::ranges::sort(copies);
  LowerBoundInstance inst{m, xs, std::move(base), m * xs.elements.size() / 5,
                          CopySet{lb_pattern_a(), std::move(copies), true}};
  if (inst.planted.copies.size() != inst.q) throw std::logic_error("lower_bound_base: q mismatch");
  if (!verify_copy_set(inst.base, inst.planted)) {
    throw std::logic_error("lower_bound_base: planted copies do not verify");
  }
  const SeparatorSet mid{{h}, {h}};
  for (const auto& c : inst.planted.copies) {
    if (!is_separated(c, mid)) throw std::logic_error("lower_bound_base: copy not separated");
  }
  if (verify) {
    if (count_copies(inst.base, lb_pattern_a(), limits) != CopyCount::of(inst.q)) {
      throw std::logic_error("lower_bound_base: A-copy count differs from q");
    }
    if (count_copies(inst.base, lb_pattern_b(), limits).value != 0) {
      throw std::logic_error("lower_bound_base: base contains a B-copy");
    }
  }
  return inst;
}

DenseMatrix blowup(const DenseMatrix& base, std::size_t n) {
  const std::size_t m = base.rows();
  if (base.cols() != m) throw InputError("blowup needs a square base");
  if (n == 0 || n % m != 0) throw InputError("blowup: n must be a positive multiple of m");
  std::vector<Symbol> e(n * n);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t bi = (i * m + n - 1) / n;
    for (std::size_t j = 1; j <= n; ++j) e[(i - 1) * n + (j - 1)] = base(bi, (j * m + n - 1) / n);
  }
  return {n, n, base.alphabet(), std::move(e)};
}

CopySet blowup_packing(const CopySet& base_copies, std::size_t m, std::size_t n) {
  if (m == 0 || n % m != 0) throw InputError("blowup_packing: n must be a multiple of m");
  const std::size_t b = n / m;
  CopySet out{base_copies.pattern, {}, true};
  for (const auto& c : base_copies.copies) {
    for (std::size_t u = 1; u <= b; ++u) {
      for (std::size_t v = 1; v <= b; ++v) {
        SubmatrixIndex idx;
        for (const auto r : c.rows) idx.rows.push_back(b * (r - 1) + u);
        for (const auto col : c.cols) idx.cols.push_back(b * (col - 1) + v);
        out.copies.push_back(std::move(idx));
      }
    }
  }
  std::ranges::sort(out.copies);
  return out;
}

std::vector<GapRow> gap_table(std::span<const std::size_t> m_values) {
  std::vector<std::size_t> ms(m_values.begin(), m_values.end());
  std::ranges::sort(ms);
  std::vector<GapRow> rows;
  for (const auto m : ms) {
    if (m == 0 || m % 10 != 0) {
      throw InputError("gap_table: m = " + std::to_string(m) + " is not a positive multiple of 10");
    }
    const auto xs = behrend_set(m / 10);
    GapRow row;
    row.m = m;
    row.set_size = xs.elements.size();
    const auto size = static_cast<std::int64_t>(row.set_size);
    const auto mm = static_cast<std::int64_t>(m);
    row.eps_hat = Rational(size, 5 * mm);
    row.delta_hat = Rational(size, 5 * mm * mm * mm);
    row.ratio = row.delta_hat / row.eps_hat;
    rows.push_back(row);
  }
  return rows;
}

void write_gap_table_csv(std::ostream& out, std::span<const GapRow> rows) {
  out << "m,set_size,eps_hat,delta_hat,ratio,eps_hat_decimal,delta_hat_decimal,ratio_decimal\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{:.10g},{:.10g},{:.10g}\n", r.m, r.set_size,
                       r.eps_hat.str(), r.delta_hat.str(), r.ratio.str(), r.eps_hat.to_double(),
                       r.delta_hat.to_double(), r.ratio.to_double());
  }
}

}  // namespace removal
