#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "affperm/core.hpp"
#include "affperm/counting.hpp"
#include "affperm/error.hpp"
#include "affperm/random.hpp"

using namespace affperm;

namespace {

ErrorKind kind_of(std::initializer_list<std::int64_t> w) {
  try {
    AffinePermutation::validate(w);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("window was accepted");
  return ErrorKind::InvalidParams;
}

const AffinePermutation fig1 = AffinePermutation::validate({2, 7, -2, -1, 9, 6});

}  // namespace

TEST_CASE("validate accepts genuine windows") {
  CHECK(fig1.size() == 6);
  CHECK(AffinePermutation::validate({1, 2, 3}) == AffinePermutation::identity(3));
  CHECK(AffinePermutation::validate({0, 3}).window() == std::vector<std::int64_t>{0, 3});
}

TEST_CASE("validate names the broken invariant") {
  CHECK(kind_of({2, 4}) == ErrorKind::DuplicateResidue);
  CHECK(kind_of({1, 2, 4}) == ErrorKind::DuplicateResidue);
  CHECK(kind_of({4, 1, 3}) == ErrorKind::DuplicateResidue);
  CHECK(kind_of({3, 2, 4}) == ErrorKind::BadSum);
  CHECK(kind_of({}) == ErrorKind::EmptyWindow);

  // Residues and centering are fine, but the entries do not fit in 64 bits.
  std::vector<BigInt> huge{BigInt(1) << 80, 3 - (BigInt(1) << 80)};
  try {
    AffinePermutation::validate(std::span<const BigInt>(huge));
    FAIL("oversized window was accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WindowOverflow);
  }
}

TEST_CASE("boundedness") {
  CHECK(fig1.is_bounded());
  CHECK_FALSE(AffinePermutation::validate({3, 0}).is_bounded());
  for (int n = 1; n <= 6; ++n) CHECK(AffinePermutation::identity(n).is_bounded());
}

TEST_CASE("evaluate extends the window periodically") {
  CHECK(fig1.evaluate(7) == 8);
  CHECK(fig1.evaluate(0) == 0);
  CHECK(fig1.evaluate(-5) == -4);
  CHECK(evaluate(AffinePermutation::identity(4), BigInt(-123456789)) == -123456789);

  const BigInt far = 6 * (BigInt(1) << 100);
  CHECK(fig1.evaluate(far + 2) == far + 7);
  CHECK(fig1.evaluate(1 - far) == 2 - far);

  Rng rng(73);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::int64_t i = uniform_int(rng, -1000000000, 1000000000);
    REQUIRE(fig1.evaluate(i + 6) - fig1.evaluate(i) == 6);
    REQUIRE(fig1.evaluate(i) == fig1.at(i));
  }
}

TEST_CASE("infinite sums of ordinary permutations") {
  CHECK(infinite_sum(OrdinaryPermutation::parse("132")).window() == std::vector<std::int64_t>{1, 3, 2});
  const auto s = infinite_sum(OrdinaryPermutation::parse("321"));
  CHECK(s.window() == std::vector<std::int64_t>{3, 2, 1});
  CHECK(s.is_bounded());

  for (int n = 1; n <= 5; ++n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    std::set<AffinePermutation> images;
    do {
      const auto sigma = infinite_sum(OrdinaryPermutation(v));
      CHECK(sigma.is_bounded());
      images.insert(sigma);
    } while (std::next_permutation(v.begin(), v.end()));
    CHECK(images.size() == static_cast<std::size_t>(to_long_double(factorial(n))));
  }
}

TEST_CASE("ordinary permutation parsing") {
  CHECK(OrdinaryPermutation::parse("4123").values() == std::vector<int>{4, 1, 2, 3});
  CHECK(OrdinaryPermutation::parse("10,2,3,4,5,6,7,8,9,1").size() == 10);
  CHECK(OrdinaryPermutation::decreasing(3).to_string() == "321");
  CHECK(OrdinaryPermutation::decreasing(3).is_decreasing());
  CHECK_FALSE(OrdinaryPermutation::parse("132").is_decreasing());
  CHECK_THROWS_AS(OrdinaryPermutation::parse("122"), Error);
  CHECK_THROWS_AS(OrdinaryPermutation({0, 1}), Error);
}

TEST_CASE("every enumerated bounded permutation satisfies the invariants") {
  for (int n = 1; n <= 4; ++n) {
    for_each_bounded(n, [&](const AffinePermutation& s) {
      const auto& w = s.window();
      std::set<std::int64_t> residues;
      std::int64_t sum = 0;
      for (auto x : w) {
        residues.insert(((x % n) + n) % n);
        sum += x;
      }
      REQUIRE(residues.size() == static_cast<std::size_t>(n));
      REQUIRE(sum == n * (n + 1) / 2);
      REQUIRE(s.is_bounded());
    });
  }
}
