#include "removal/instances.hpp"

#include <numeric>

#include "removal/constructions.hpp"
#include "removal/errors.hpp"
#include "removal/rng.hpp"

namespace removal {
namespace {

// A surjective random assignment of `count` items to `classes` labels.
std::vector<std::size_t> random_classes(std::size_t count, std::size_t classes, CounterRng& rng) {
  if (classes == 0 || classes > count) throw InputError("class count must be in [1, size]");
  std::vector<std::size_t> label(count);
  // First `classes` positions of a random permutation seed each class once.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = count; k > 1; --k) std::swap(order[k - 1], order[rng.uniform(k)]);
  for (std::size_t k = 0; k < count; ++k) {
    label[order[k]] = k < classes ? k + 1 : 1 + rng.uniform(classes);
  }
  return label;
}

}  // namespace

DenseMatrix random_binary(std::size_t m, std::size_t n, double p, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<Symbol> e(m * n);
  for (auto& x : e) x = rng.bernoulli(p) ? 1 : 0;
  return {m, n, Alphabet(2), std::move(e)};
}

BlockInstance block_structured(std::size_t m, std::size_t n, std::size_t r, std::size_t c,
                               double noise, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  auto rows = random_classes(m, r, rng);
  auto cols = random_classes(n, c, rng);
  std::vector<Symbol> block(r * c);
  for (auto& b : block) b = static_cast<Symbol>(rng.uniform(2));
  CounterRng flip(seed, 1);
  std::vector<Symbol> e(m * n);
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Symbol v = block[(rows[i] - 1) * c + (cols[j] - 1)];
      if (flip.bernoulli(noise)) {
        v ^= 1;
        ++flipped;
      }
      e[i * n + j] = v;
    }
  }
  return {DenseMatrix(m, n, Alphabet(2), std::move(e)), std::move(rows), std::move(cols), flipped};
}

DenseMatrix periodic_tiling(const Pattern& pattern, std::size_t m, std::size_t n) {
  const std::size_t s = pattern.rows(), t = pattern.cols();
  std::vector<Symbol> e(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) e[i * n + j] = pattern(i % s + 1, j % t + 1);
  }
  return {m, n, pattern.alphabet(), std::move(e)};
}

DenseMatrix staircase(std::size_t m, std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  std::vector<Symbol> e(m * n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = rng.uniform(n + 1);
    for (std::size_t j = a; j < n; ++j) e[i * n + j] = 1;
  }
  return {m, n, Alphabet(2), std::move(e)};
}

PlantedInstance blowup_instance(std::size_t base_m, std::size_t n, double p,
                                const Pattern& pattern, std::uint64_t seed) {
  if (base_m == 0 || n % base_m != 0) throw InputError("blowup_instance: base_m must divide n");
  const auto base = random_binary(base_m, base_m, p, seed);
  const auto packing = greedy_maximal_packing(base, pattern);
  return {blowup(base, n), Packing{blowup_packing(packing.copy_set, base_m, n), false}};
}

}  // namespace removal
