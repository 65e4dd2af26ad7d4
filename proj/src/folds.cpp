// Licensed under the Apache License 2.0 (see LICENSE file).

#include <numeric>
#include <random>

#include "ytx/error.hpp"
#include "ytx/eval.hpp"

namespace ytx::eval {

namespace {

// Uniform draw in [0, bound) without modulo bias; independent of the
// standard library's distribution implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= reject_below) return x % bound;
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

FoldPlan make_fold_plan(std::size_t n, std::uint64_t seed) {
  if (n < 4) throw DataError("5x2 cross-validation needs at least 4 rows");
  FoldPlan plan;
  plan.seed = seed;
  const std::size_t first = (n + 1) / 2;
  for (std::size_t r = 0; r < kRepeats; ++r) {
    std::mt19937_64 rng(splitmix64(seed ^ static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[bounded(rng, i + 1)]);
    }
    std::vector<std::size_t> a(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(first));
    std::vector<std::size_t> b(perm.begin() + static_cast<std::ptrdiff_t>(first), perm.end());
    plan.folds.push_back({a, b});
    plan.folds.push_back({std::move(b), std::move(a)});
  }
  return plan;
}

}  // namespace ytx::eval
