#include "removal/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace removal {

std::uint64_t CounterRng::uniform(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform: bound must be positive");
  // Lemire's multiply-shift with rejection of the biased low range.
  std::uint64_t x = next();
  __uint128_t product = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = next();
      product = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

std::vector<std::size_t> CounterRng::subset(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("subset: k exceeds n");
  std::vector<std::size_t> out;
  out.reserve(k);
  std::unordered_set<std::size_t> chosen;
  for (std::size_t j = n - k + 1; j <= n; ++j) {
    const std::size_t t = 1 + uniform(j);
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  std::ranges::sort(out);
  return out;
}

}  // namespace removal
