#include <doctest.h>

#include <cmath>
#include <numeric>

#include "affperm/error.hpp"
#include "affperm/measures.hpp"

using namespace affperm;

namespace {

const double kSqrt2 = std::sqrt(2.0);

DiscreteMeasure random_measure(Rng& rng, std::size_t atoms) {
  std::vector<DiamondPoint> pts;
  std::vector<double> w;
  for (std::size_t a = 0; a < atoms; ++a) {
    const double x = uniform_real(rng, 0, 1);
    pts.push_back({x, x + uniform_real(rng, -1, 1)});
    w.push_back(uniform_real(rng, 0.1, 1));
  }
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= s;
  // Renormalize the last weight so the total is 1 to the last bit.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return DiscreteMeasure(pts, w);
}

}  // namespace

TEST_CASE("diamond membership") {
  CHECK(in_diamond({0, -1}));
  CHECK(in_diamond({1, 2}));
  CHECK_FALSE(in_diamond({0.5, 1.6}));
  CHECK_FALSE(in_diamond({-0.1, 0}));
  CHECK(distance({0, -1}, {1, 2}) == doctest::Approx(kDiamondDiameter));
}

TEST_CASE("measure validation") {
  CHECK_THROWS_AS(DiscreteMeasure({{0, 0}}, {0.5}), Error);
  CHECK_THROWS_AS(DiscreteMeasure({{0, 0}, {1, 1}}, {1.0}), Error);
  CHECK_THROWS_AS(DiscreteMeasure({{0, 0}, {1, 1}}, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(DiscreteMeasure::dirac({0.2, 1.5}), Error);
  CHECK_THROWS_AS(SlopeOneMixture({1.5}), Error);
  CHECK_THROWS_AS(SlopeOneMixture(std::vector<double>{}), Error);
  CHECK(DiscreteMeasure::uniform({{0, 0}, {1, 1}, {0.5, 0.5}}).has_uniform_weights());
}

TEST_CASE("empirical measures") {
  const auto id = empirical_measure(AffinePermutation::identity(4));
  REQUIRE(id.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(id.atoms()[i].x == doctest::Approx((i + 1) / 4.0));
    CHECK(id.atoms()[i].y == doctest::Approx((i + 1) / 4.0));
    CHECK(id.weights()[i] == doctest::Approx(0.25));
  }
  const auto fig1 = empirical_measure(AffinePermutation::validate({2, 7, -2, -1, 9, 6}));
  bool found = false;
  for (const auto& a : fig1.atoms()) found |= std::abs(a.x - 2.0 / 6) < 1e-15 && std::abs(a.y - 7.0 / 6) < 1e-15;
  CHECK(found);
  CHECK_THROWS_AS(empirical_measure(AffinePermutation::validate({3, 0})), Error);
}

TEST_CASE("discretized segment mixtures") {
  const auto d = discretize(SlopeOneMixture({0.0}), 2);
  REQUIRE(d.size() == 2);
  CHECK(d.atoms()[0].x == doctest::Approx(0.25));
  CHECK(d.atoms()[0].y == doctest::Approx(0.25));
  CHECK(d.atoms()[1].x == doctest::Approx(0.75));
  CHECK(d.weights()[1] == doctest::Approx(0.5));

  const auto three = discretize(SlopeOneMixture({0.5, -0.2, -0.3}), 10);
  CHECK(three.size() == 30);
  CHECK(three.weights()[7] == doctest::Approx(1.0 / 30));
  CHECK(SlopeOneMixture({0.5, -0.2, -0.3}).in_q0());
  CHECK_FALSE(SlopeOneMixture({0.5, -0.2}).in_q0());

  for (double a : {-0.5, 0.0, 0.3}) {
    for (double b : {-0.5, 0.0, 0.3}) {
      const double w = wass1(discretize(SlopeOneMixture({a}), 50), discretize(SlopeOneMixture({b}), 50)).distance;
      CHECK(w == doctest::Approx(std::abs(a - b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("wass1 basics") {
  CHECK(wass1(DiscreteMeasure::dirac({0, 0}), DiscreteMeasure::dirac({0.3, 0.7})).distance ==
        doctest::Approx(std::hypot(0.3, 0.7)));
  const DiscreteMeasure mu({{0, 0}, {1, 1}}, {0.5, 0.5});
  const DiscreteMeasure nu({{0, 1}, {1, 0}}, {0.5, 0.5});
  const auto r = wass1(mu, nu);
  CHECK(r.distance == doctest::Approx(1.0));
  CHECK(r.certificate.certified());

  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_measure(rng, static_cast<std::size_t>(uniform_int(rng, 1, 12)));
    CHECK(wass1(m, m).distance == doctest::Approx(0.0).epsilon(1e-12).scale(1));
  }
}

TEST_CASE("wass1 is a metric on random instances") {
  Rng rng(100);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_measure(rng, 6);
    const auto b = random_measure(rng, 9);
    const auto c = random_measure(rng, 4);
    const double ab = wass1(a, b).distance;
    const double ba = wass1(b, a).distance;
    const double ac = wass1(a, c).distance;
    const double cb = wass1(c, b).distance;
    CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
    CHECK(ab <= ac + cb + 1e-10);
    CHECK(ab <= kDiamondDiameter + 1e-12);
    CHECK(wass1(a, b).certificate.certified());
  }
}

TEST_CASE("reweighting bound") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<DiscreteMeasure> parts;
    for (int p = 0; p < 3; ++p) parts.push_back(random_measure(rng, 4));
    std::vector<double> a(3), b(3);
    for (auto& x : a) x = uniform_real(rng, 0.1, 1);
    for (auto& x : b) x = uniform_real(rng, 0.1, 1);
    const double sa = std::accumulate(a.begin(), a.end(), 0.0);
    const double sb = std::accumulate(b.begin(), b.end(), 0.0);
    double l1 = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      a[i] /= sa;
      b[i] /= sb;
      l1 += std::abs(a[i] - b[i]);
    }
    const double w = wass1(mixture(a, parts), mixture(b, parts)).distance;
    CHECK(w <= kDiamondDiameter * l1 + 1e-9);
  }
}

TEST_CASE("Q_0 sampling") {
  Rng rng(102);
  CHECK(sample_q0(1, rng).intercepts() == std::vector<double>{0.0});
  for (int s = 0; s < 1000; ++s) {
    const auto z = sample_q0(2, rng).intercepts();
    REQUIRE(z[0] == -z[1]);
    REQUIRE(std::abs(z[0]) <= 1);
  }
  for (int s = 0; s < 1000; ++s) {
    const auto m = sample_q0(4, rng);
    REQUIRE(m.in_q0());
    for (double z : m.intercepts()) REQUIRE(std::abs(z) <= 1);
  }
  // Rejection keeps 3/4 of [-1, 1]^2 at k = 3, and the first intercept has
  // density proportional to 2 - |z|, so P(|z_1| <= 1/2) = 7/12.
  int inner = 0;
  double mean_first = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    const double z1 = sample_q0(3, rng).intercepts()[0];
    inner += std::abs(z1) <= 0.5;
    mean_first += z1;
  }
  CHECK(std::abs(static_cast<double>(inner) / trials - 7.0 / 12) < 0.01);
  CHECK(std::abs(mean_first / trials) < 0.01);
}

TEST_CASE("distance to segment mixtures") {
  for (int n : {4, 10, 25}) {
    const int m = 10 * n;
    const double w = wass1_to_mixture(empirical_measure(AffinePermutation::identity(n)), SlopeOneMixture({0.0}), m);
    CHECK(w <= kSqrt2 / n + kSqrt2 / (2 * m));
  }
  const double self = wass1_to_mixture(discretize(SlopeOneMixture({0.5}), 40), SlopeOneMixture({0.5}), 40);
  CHECK(self <= kSqrt2 / 80 + 1e-12);
}

TEST_CASE("Wass_2 plug-in estimate") {
  Rng rng(103);
  std::vector<AffinePermutation> perms(5, AffinePermutation::identity(6));
  std::vector<SlopeOneMixture> lines(5, SlopeOneMixture({0.0}));
  const double same = wass2_between(perms, lines, 60);
  CHECK(same == doctest::Approx(wass1_to_mixture(empirical_measure(perms[0]), lines[0], 60)));
  CHECK_THROWS_AS(wass2_between(perms, {lines[0]}, 60), Error);

  for (int n : {3, 6, 12}) {
    const auto est = wass2_estimate(1, n, 5, SamplerChoice::Auto, 10 * n, 11);
    CHECK(est.value <= kSqrt2 / n + kSqrt2 / (20 * n) + 1e-12);
  }
  const auto a = wass2_estimate(2, 5, 8, SamplerChoice::Exact, 50, 12);
  const auto b = wass2_estimate(2, 5, 8, SamplerChoice::Exact, 50, 12, 2);
  CHECK(a.exact_sampler);
  CHECK(a.value == b.value);
  CHECK(a.value > 0);
  CHECK_FALSE(wass2_estimate(2, 8, 4, SamplerChoice::Mcmc, 80, 13).exact_sampler);
}
