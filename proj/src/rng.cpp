#include "cwknn/rng.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "cwknn/error.hpp"

namespace cwknn {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m, SplitMix64& rng) {
  if (m > n) {
    throw Error(ErrorCode::InvalidArgument, "cannot draw " + std::to_string(m) + " of " + std::to_string(n));
  }
  std::vector<std::size_t> a(n);
  std::iota(a.begin(), a.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    std::swap(a[i], a[i + rng.below(n - i)]);
  }
  a.resize(m);
  return a;
}

}  // namespace cwknn
