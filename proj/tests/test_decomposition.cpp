#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "affperm/counting.hpp"
#include "affperm/decomposition.hpp"
#include "affperm/error.hpp"
#include "affperm/patterns.hpp"
#include "affperm/sampling.hpp"

using namespace affperm;

namespace {

DecompTuple fig6_tuple() {
  return DecompTuple{{4, 6}, {{1, 5, 6, 9}, {2, 3, 4, 7, 8, 10}}, {{2, 3, 6, 10}, {1, 4, 5, 7, 8, 9}}, {2, -2}};
}

// Ordered set partitions of [N] with the given block sizes.
void for_each_partition(const std::vector<int>& n, const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  const int size = std::accumulate(n.begin(), n.end(), 0);
  std::vector<int> label(static_cast<std::size_t>(size));
  std::vector<int> left = n;
  std::function<void(int)> go = [&](int x) {
    if (x == size) {
      std::vector<std::vector<int>> blocks(n.size());
      for (int y = 0; y < size; ++y) blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(y)])].push_back(y + 1);
      visit(blocks);
      return;
    }
    for (std::size_t b = 0; b < n.size(); ++b) {
      if (left[b] == 0) continue;
      --left[b];
      label[static_cast<std::size_t>(x)] = static_cast<int>(b);
      go(x + 1);
      ++left[b];
    }
  };
  go(0);
}

void for_each_delta(const std::vector<int>& n, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> d(n.size());
  std::function<void(std::size_t, int)> go = [&](std::size_t i, int sum) {
    if (i == n.size()) {
      if (sum == 0) visit(d);
      return;
    }
    for (int v = -n[i]; v <= n[i]; ++v) {
      d[i] = v;
      go(i + 1, sum + v);
    }
  };
  go(0, 0);
}

// Every tuple of D_0(N) with k blocks of positive size.
void for_each_d0(int size, int k, const std::function<void(const DecompTuple&)>& visit) {
  for_each_composition(size, k, 1, [&](const std::vector<int>& n) {
    for_each_partition(n, [&](const std::vector<std::vector<int>>& G) {
      for_each_partition(n, [&](const std::vector<std::vector<int>>& H) {
        for_each_delta(n, [&](const std::vector<int>& d) { visit(DecompTuple{n, G, H, d}); });
      });
    });
  });
}

// Longest decreasing subsequence among positions [from, to]; no boundedness needed.
int longest_decreasing_in(const AffinePermutation& s, std::int64_t from, std::int64_t to) {
  std::vector<int> best(static_cast<std::size_t>(to - from + 1), 1);
  int top = 0;
  for (std::int64_t b = from; b <= to; ++b) {
    auto& lb = best[static_cast<std::size_t>(b - from)];
    for (std::int64_t a = from; a < b; ++a)
      if (s.at(a) > s.at(b)) lb = std::max(lb, best[static_cast<std::size_t>(a - from)] + 1);
    top = std::max(top, lb);
  }
  return top;
}

DecompTuple random_d0(Rng& rng, int size, int k) {
  std::vector<int> n(static_cast<std::size_t>(k), 1);
  for (int extra = size - k; extra > 0; --extra) ++n[static_cast<std::size_t>(uniform_int(rng, 0, k - 1))];
  auto random_partition = [&] {
    std::vector<int> perm(static_cast<std::size_t>(size));
    std::iota(perm.begin(), perm.end(), 1);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<int>> blocks;
    std::size_t at = 0;
    for (int ni : n) {
      std::vector<int> b(perm.begin() + static_cast<std::ptrdiff_t>(at), perm.begin() + static_cast<std::ptrdiff_t>(at + ni));
      std::sort(b.begin(), b.end());
      blocks.push_back(b);
      at += static_cast<std::size_t>(ni);
    }
    return blocks;
  };
  std::vector<int> d;
  for (;;) {
    d.clear();
    int sum = 0;
    for (int ni : n) {
      d.push_back(static_cast<int>(uniform_int(rng, -ni, ni)));
      sum += d.back();
    }
    if (sum == 0) break;
  }
  return DecompTuple{n, random_partition(), random_partition(), d};
}

}  // namespace

TEST_CASE("psi on the worked example") {
  const auto sigma = psi(fig6_tuple());
  CHECK(sigma.window() == std::vector<std::int64_t>{6, -2, -1, 1, 10, 12, 4, 5, 13, 7});
  CHECK(sigma.is_bounded());
  CHECK(avoids_decreasing(sigma, 3));
  CHECK(psi_inverse(sigma, 2) == fig6_tuple());
}

TEST_CASE("psi with zero shifts is an infinite sum") {
  const DecompTuple t{{2, 1}, {{1, 3}, {2}}, {{2, 3}, {1}}, {0, 0}};
  // sigma(1) = 2, sigma(3) = 3, sigma(2) = 1.
  CHECK(psi(t) == infinite_sum(OrdinaryPermutation::parse("213")));
}

TEST_CASE("psi can leave the bounded class") {
  const DecompTuple t{{1, 2}, {{1}, {2, 3}}, {{1}, {2, 3}}, {1, -1}};
  const auto sigma = psi(t);
  CHECK(sigma.window() == std::vector<std::int64_t>{4, 0, 2});
  CHECK_FALSE(sigma.is_bounded());
  CHECK_THROWS_AS(psi_inverse(sigma, 2), Error);
}

TEST_CASE("tuple validation") {
  auto bad = fig6_tuple();
  bad.delta = {5, -5};
  CHECK_THROWS_AS(validate_tuple(bad), Error);
  bad = fig6_tuple();
  bad.delta = {1, 0};
  CHECK_THROWS_AS(validate_tuple(bad), Error);
  bad = fig6_tuple();
  bad.G[0][0] = 2;
  CHECK_THROWS_AS(validate_tuple(bad), Error);
  bad = fig6_tuple();
  bad.n = {5, 5};
  CHECK_THROWS_AS(validate_tuple(bad), Error);
}

TEST_CASE("psi_inverse of the identity") {
  for (int n = 1; n <= 6; ++n) {
    const auto t = psi_inverse(AffinePermutation::identity(n), 1);
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    CHECK(t.G == std::vector<std::vector<int>>{all});
    CHECK(t.H == std::vector<std::vector<int>>{all});
    CHECK(t.delta == std::vector<int>{0});
  }
}

TEST_CASE("psi round trip on every bounded avoider") {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& sigma : enumerate_avoiders(n, OrdinaryPermutation::decreasing(3))) {
      REQUIRE(psi(psi_inverse(sigma, 2)) == sigma);
    }
  }
  for (const auto& sigma : enumerate_avoiders(5, OrdinaryPermutation::decreasing(4)))
    REQUIRE(psi(psi_inverse(sigma, 3)) == sigma);
}

TEST_CASE("D_0 images avoid and cover the avoiders") {
  for (int size = 2; size <= 4; ++size) {
    long tuples = 0;
    std::set<AffinePermutation> bounded_images;
    for_each_d0(size, 2, [&](const DecompTuple& t) {
      ++tuples;
      const auto sigma = psi(t);
      REQUIRE(longest_decreasing_in(sigma, 1, 8 * size) <= 2);
      if (sigma.is_bounded()) bounded_images.insert(sigma);
    });
    const auto all = enumerate_avoiders(size, OrdinaryPermutation::decreasing(3));
    CHECK(bounded_images == std::set<AffinePermutation>(all.begin(), all.end()));
    CHECK(BigInt(tuples) == 2 * upper_bound_avoiders(2, size));
  }
}

TEST_CASE("relabeling does not change the image") {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = random_d0(rng, 9, 3);
    const auto sigma = psi(t);
    std::vector<int> order{0, 1, 2};
    do {
      const auto r = relabel(t, order);
      REQUIRE(psi(r) == sigma);
      REQUIRE(equal_up_to_relabeling(r, t));
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("spacing and size conditions") {
  CHECK(in_seq_star_A({5, 10, 15}, 20, 1));
  CHECK_FALSE(in_seq_star_A({1, 2, 3}, 20, 1));
  CHECK(in_n_alpha({20, 20}, 0.1));
  CHECK(in_n_alpha({24, 16}, 0.1));
  CHECK_FALSE(in_n_alpha({25, 15}, 0.1));
  CHECK_THROWS_AS(validate_params({0.6, 1, 2}, 2), Error);
  CHECK_THROWS_AS(validate_params({0.1, 0, 2}, 2), Error);
}

TEST_CASE("Dom membership") {
  const DomParams p{0.1, 1, 2};
  std::vector<int> odd, even;
  for (int x = 1; x <= 40; ++x) (x % 2 ? odd : even).push_back(x);
  // The odd numbers sit within 1 of l*40/21; the even numbers drift past it.
  CHECK(in_seq_star_A(odd, 40, 1));
  CHECK_FALSE(in_seq_star_A(even, 40, 1));
  CHECK(delta_separated({20, 20}, {10, -10}, p));
  CHECK_FALSE(delta_separated({20, 20}, {7, -7}, p));

  const DecompTuple t{{20, 20}, {odd, even}, {odd, even}, {11, -11}};
  CHECK_FALSE(in_dom(t, p));
  const DomParams wide{0.1, 2.5, 2};
  CHECK(in_seq_star_A(even, 40, 2.5));
  CHECK(in_dom(t, wide));
  auto edge = t;
  edge.delta = {18, -18};
  CHECK_FALSE(in_dom(edge, wide));
}

TEST_CASE("W enumeration") {
  const DomParams p{0.1, 1, 2};
  const auto w = enumerate_W({20, 20}, p);
  CHECK(w.size() == 20);
  for (const auto& d : w) {
    CHECK(d[0] == -d[1]);
    CHECK(std::abs(d[0]) >= 8);
    CHECK(std::abs(d[0]) <= 17);
  }
  CHECK(std::is_sorted(w.begin(), w.end()));
  CHECK(enumerate_W({20, 20}, DomParams{0.1, 1, 20}).empty());
  CHECK_THROWS_AS(enumerate_W({20, 20}, p, 10), Error);
}

TEST_CASE("spaced partition counts match direct enumeration") {
  for (double A : {1.0, 1.5, 2.5}) {
    for (const std::vector<int>& n : {std::vector<int>{3, 3}, {4, 5}, {2, 3, 3}, {6, 6}}) {
      const int size = std::accumulate(n.begin(), n.end(), 0);
      long direct = 0;
      for_each_partition(n, [&](const std::vector<std::vector<int>>& blocks) {
        direct += std::all_of(blocks.begin(), blocks.end(), [&](const auto& b) { return in_seq_star_A(b, size, A); });
      });
      SpacedPartitionSampler sp(n, A);
      REQUIRE(sp.count() == direct);
    }
  }
}

TEST_CASE("spaced partition sampling is uniform") {
  const std::vector<int> n{4, 4};
  SpacedPartitionSampler sp(n, 2.0);
  std::vector<std::vector<std::vector<int>>> universe;
  for_each_partition(n, [&](const auto& blocks) {
    if (in_seq_star_A(blocks[0], 8, 2.0) && in_seq_star_A(blocks[1], 8, 2.0)) universe.push_back(blocks);
  });
  REQUIRE(sp.count() == static_cast<long>(universe.size()));
  REQUIRE(universe.size() >= 2);
  std::vector<long> counts(universe.size(), 0);
  Rng rng(31);
  for (int s = 0; s < 20000; ++s) {
    const auto draw = sp.sample(rng);
    const auto it = std::find(universe.begin(), universe.end(), draw);
    REQUIRE(it != universe.end());
    ++counts[static_cast<std::size_t>(it - universe.begin())];
  }
  CHECK(chi_square_from_counts(counts).p_value > 0.001);
}

TEST_CASE("Dom size and sampler") {
  const DomParams p{0.1, 2, 6};
  CHECK(dom_images_bounded(2, p));
  CHECK_FALSE(dom_images_bounded(2, DomParams{0.1, 1, 2}));
  CHECK_THROWS_AS(DomSampler(2, 40, DomParams{0.1, 1, 2}), Error);
  CHECK(dom_size(2, 40, DomParams{0.1, 1, 2}) == 0);

  DomSampler sampler(2, 40, p);
  CHECK(sampler.dom_size() == dom_size(2, 40, p));
  CHECK(sampler.dom_size() > 0);
  Rng rng(44);
  for (int s = 0; s < 50; ++s) {
    const auto t = sampler.sample(rng);
    REQUIRE(in_dom(t, p));
    const auto sigma = psi(t);
    REQUIRE(sigma.is_bounded());
    REQUIRE(decode_by_strips(sigma, 2) == canonical(t));
  }
}

TEST_CASE("k-factorial check") {
  const auto r = verify_k_factorial(2, DomParams{0.1, 2, 6}, 40, 100, 7);
  CHECK(r.passed);
  CHECK(r.samples == 100);
  CHECK_THROWS_AS(verify_k_factorial(2, DomParams{0.1, 1, 2}, 40, 10, 7), Error);
  const auto one = verify_k_factorial(1, DomParams{0.5, 2, 1}, 12, 20, 3);
  CHECK(one.passed);
}
