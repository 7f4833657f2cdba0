#include <doctest.h>

#include <algorithm>
#include <functional>

#include "affperm/counting.hpp"
#include "affperm/error.hpp"
#include "affperm/patterns.hpp"
#include "affperm/random.hpp"

using namespace affperm;

namespace {

const AffinePermutation fig1 = AffinePermutation::validate({2, 7, -2, -1, 9, 6});
const AffinePermutation fig6 = AffinePermutation::validate({6, -2, -1, 1, 10, 12, 4, 5, 13, 7});

std::vector<AffinePermutation> all_bounded(int n) {
  std::vector<AffinePermutation> out;
  for_each_bounded(n, [&](const AffinePermutation& s) { out.push_back(s); });
  return out;
}

// Longest strictly decreasing subsequence starting at a, by plain recursion
// over the next entry (every later entry below sigma(a) within 2N positions).
int rank_by_recursion(const AffinePermutation& s, std::int64_t a) {
  int best = 1;
  const std::int64_t n = s.size();
  for (std::int64_t b = a + 1; b < a + 2 * n; ++b)
    if (s.at(b) < s.at(a)) best = std::max(best, 1 + rank_by_recursion(s, b));
  return best;
}

// Every m-subset of [1, end] with first index in [1, N], checked directly.
bool contains_by_subsets(const AffinePermutation& s, const OrdinaryPermutation& tau, std::int64_t end) {
  const int m = tau.size();
  std::vector<std::int64_t> pos;
  std::function<bool(std::int64_t)> go = [&](std::int64_t from) {
    if (static_cast<int>(pos.size()) == m) return is_occurrence(s, Occurrence{tau, pos});
    const std::int64_t top = pos.empty() ? s.size() : end;
    for (std::int64_t q = from; q <= top; ++q) {
      pos.push_back(q);
      if (go(q + 1)) return true;
      pos.pop_back();
    }
    return false;
  };
  return go(1);
}

}  // namespace

TEST_CASE("ordinary containment") {
  const auto pi = OrdinaryPermutation::parse("493125876");
  const auto occ = contains_ordinary(pi, OrdinaryPermutation::parse("4123"));
  REQUIRE(occ);
  CHECK(is_occurrence(pi, *occ));
  // 9 3 5 6 sits at positions 2 3 6 9.
  CHECK(is_occurrence(pi, Occurrence{OrdinaryPermutation::parse("4123"), {2, 3, 6, 9}}));
  CHECK_FALSE(is_occurrence(pi, Occurrence{OrdinaryPermutation::parse("4123"), {1, 3, 6, 9}}));

  CHECK_FALSE(contains_ordinary(pi, OrdinaryPermutation::parse("3142")));

  const auto one = contains_ordinary(pi, OrdinaryPermutation::parse("1"));
  REQUIRE(one);
  CHECK(one->positions == std::vector<std::int64_t>{1});
}

TEST_CASE("ranks") {
  CHECK(rank(fig6, 1) == 2);
  for (int a = 1; a <= 5; ++a) CHECK(rank(AffinePermutation::identity(5), a) == 1);
  for (int a = 1; a <= 10; ++a) CHECK(rank(fig6, a) == rank_by_recursion(fig6, a));
  CHECK(max_rank(fig1) >= 3);
  CHECK(max_rank(fig6) == 2);

  Rng rng(128);
  const auto pool = all_bounded(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& s = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
    const std::int64_t a = uniform_int(rng, -20, 20);
    REQUIRE(rank(s, a + s.size()) == rank(s, a));
    REQUIRE(rank(s, a) == rank_by_recursion(s, a));
  }
}

TEST_CASE("decreasing avoidance") {
  CHECK_FALSE(avoids_decreasing(fig1, 3));
  CHECK(avoids_decreasing(AffinePermutation::identity(4), 2));
  CHECK(avoids_decreasing(infinite_sum(OrdinaryPermutation::parse("21")), 3));
  CHECK_THROWS_AS(avoids_decreasing(AffinePermutation::validate({3, 0}), 3), Error);
}

TEST_CASE("affine containment") {
  const auto tau = OrdinaryPermutation::decreasing(3);
  const auto occ = contains_affine(fig1, tau);
  REQUIRE(occ);
  CHECK(is_occurrence(fig1, *occ));

  const auto witness = shortest_occurrence(fig1, tau);
  REQUIRE(witness);
  CHECK(witness->positions == std::vector<std::int64_t>{5, 6, 9});
  CHECK(fig1.at(5) == 9);
  CHECK(fig1.at(6) == 6);
  CHECK(fig1.at(9) == 4);

  CHECK(contains_affine(fig1, OrdinaryPermutation::parse("1")));
  CHECK(containment_window(6, 3) == 6 + 18 * 2);

  for (const auto& s : all_bounded(4)) {
    REQUIRE(contains_affine(s, tau).has_value() == !avoids_decreasing(s, 3));
  }
}

TEST_CASE("containment agrees with direct subset search") {
  const std::vector<OrdinaryPermutation> patterns{OrdinaryPermutation::parse("21"), OrdinaryPermutation::parse("132"),
                                                  OrdinaryPermutation::parse("231"), OrdinaryPermutation::parse("321")};
  for (int n = 2; n <= 3; ++n) {
    for (const auto& s : all_bounded(n)) {
      for (const auto& tau : patterns) {
        const bool fast = contains_affine(s, tau).has_value();
        REQUIRE(fast == contains_by_subsets(s, tau, containment_window(n, tau.size())));
      }
    }
  }
}

TEST_CASE("doubling the search window never finds more") {
  const std::vector<OrdinaryPermutation> patterns{
      OrdinaryPermutation::parse("321"), OrdinaryPermutation::parse("4321"), OrdinaryPermutation::parse("2143"),
      OrdinaryPermutation::parse("3142"), OrdinaryPermutation::parse("132")};
  auto same = [&](const AffinePermutation& s) {
    for (const auto& tau : patterns) {
      const auto w = containment_window(s.size(), tau.size());
      const bool base = contains_affine(s, tau).has_value();
      const bool doubled = contains_affine(s, tau, 2 * w).has_value();
      if (base != doubled) return false;
      if (base != shortest_occurrence(s, tau).has_value()) return false;
    }
    return true;
  };
  for (const auto& s : all_bounded(4)) REQUIRE(same(s));

  Rng rng(606);
  const auto pool = all_bounded(6);
  for (int trial = 0; trial < 200; ++trial) {
    const auto& s = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
    REQUIRE(same(s));
  }
}

TEST_CASE("avoidance dispatch") {
  for (const auto& s : all_bounded(4)) {
    REQUIRE(avoids(s, OrdinaryPermutation::parse("321")) == avoids_decreasing(s, 3));
    REQUIRE(avoids(s, OrdinaryPermutation::parse("2143")) == (s == AffinePermutation::identity(4)));
  }
}

TEST_CASE("increasing decomposition") {
  const auto part = decompose_increasing(fig6, 2);
  REQUIRE(part.blocks.size() == 2);
  CHECK(part.blocks[0] == std::vector<int>{1, 5, 6, 9});
  CHECK(part.blocks[1] == std::vector<int>{2, 3, 4, 7, 8, 10});
  CHECK(satisfies_increasing_invariant(fig6, part));

  const auto one = decompose_increasing(AffinePermutation::identity(4), 1);
  REQUIRE(one.blocks.size() == 1);
  CHECK(one.blocks[0] == std::vector<int>{1, 2, 3, 4});

  const auto split = decompose_increasing(AffinePermutation::identity(3), 2);
  REQUIRE(split.blocks.size() == 2);
  CHECK(split.blocks[0] == std::vector<int>{1});
  CHECK(split.blocks[1] == std::vector<int>{2, 3});

  CHECK_THROWS_AS(decompose_increasing(fig1, 2), Error);
  CHECK_THROWS_AS(decompose_increasing(AffinePermutation::identity(2), 3), Error);

  for (int n = 1; n <= 5; ++n) {
    for (const auto& s : all_bounded(n)) {
      const int r = max_rank(s);
      for (int k = r; k <= std::min(n, 3); ++k) {
        const auto p = decompose_increasing(s, k);
        REQUIRE(p.blocks.size() == static_cast<std::size_t>(k));
        REQUIRE(satisfies_increasing_invariant(s, p));
        std::vector<int> all;
        for (const auto& b : p.blocks) {
          REQUIRE(std::is_sorted(b.begin(), b.end()));
          all.insert(all.end(), b.begin(), b.end());
        }
        std::sort(all.begin(), all.end());
        for (int i = 0; i < n; ++i) REQUIRE(all[static_cast<std::size_t>(i)] == i + 1);
      }
    }
  }
}
