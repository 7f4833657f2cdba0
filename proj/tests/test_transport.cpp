#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "affperm/random.hpp"
#include "affperm/transport.hpp"

using namespace affperm;

namespace {

Matrix random_costs(Rng& rng, std::size_t r, std::size_t c, bool integral) {
  Matrix m(r, c);
  for (auto& x : m.data) x = integral ? static_cast<double>(uniform_int(rng, 0, 9)) : uniform_real(rng, 0, 5);
  return m;
}

double best_matching_by_permutations(const Matrix& c) {
  std::vector<std::size_t> p(c.rows);
  std::iota(p.begin(), p.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0;
    for (std::size_t i = 0; i < c.rows; ++i) s += c(i, p[i]);
    best = std::min(best, s);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

// Supply and demand in units of 1/L become L unit atoms per side; the optimal
// transport cost is then the optimal matching of the copies.
double transport_by_copies(const std::vector<int>& supply_units, const std::vector<int>& demand_units, const Matrix& c) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < supply_units.size(); ++i) rows.insert(rows.end(), static_cast<std::size_t>(supply_units[i]), i);
  for (std::size_t j = 0; j < demand_units.size(); ++j) cols.insert(cols.end(), static_cast<std::size_t>(demand_units[j]), j);
  Matrix expanded(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) expanded(a, b) = c(rows[a], cols[b]);
  return best_matching_by_permutations(expanded) / static_cast<double>(rows.size());
}

std::vector<int> random_units(Rng& rng, std::size_t parts, int total) {
  std::vector<int> u(parts, 1);
  for (int extra = total - static_cast<int>(parts); extra > 0; --extra)
    ++u[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(parts) - 1))];
  return u;
}

std::vector<double> as_weights(const std::vector<int>& units, int total) {
  std::vector<double> w;
  for (int u : units) w.push_back(static_cast<double>(u) / total);
  return w;
}

}  // namespace

TEST_CASE("assignment matches exhaustive search") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 7));
    const Matrix c = random_costs(rng, n, n, trial % 2 == 0);
    const auto r = solve_assignment(c);
    REQUIRE(r.cost == doctest::Approx(best_matching_by_permutations(c)).epsilon(1e-12));
    std::vector<int> cols = r.column_of_row;
    std::sort(cols.begin(), cols.end());
    for (std::size_t j = 0; j < n; ++j) REQUIRE(cols[j] == static_cast<int>(j));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) REQUIRE(r.row_potential[i] + r.col_potential[j] <= c(i, j) + 1e-9);
      const auto j = static_cast<std::size_t>(r.column_of_row[i]);
      REQUIRE(r.row_potential[i] + r.col_potential[j] == doctest::Approx(c(i, j)));
    }
  }
}

TEST_CASE("assignment on tiny cases") {
  Matrix c(2, 2);
  c(0, 0) = 1;
  c(0, 1) = 0;
  c(1, 0) = 0;
  c(1, 1) = 1;
  const auto r = solve_assignment(c);
  CHECK(r.cost == 0);
  CHECK(r.column_of_row == std::vector<int>{1, 0});
  CHECK(solve_assignment(Matrix(1, 1, 3.5)).cost == 3.5);
}

TEST_CASE("transport matches the expanded matching") {
  Rng rng(6);
  for (int trial = 0; trial < 150; ++trial) {
    const int total = static_cast<int>(uniform_int(rng, 2, 7));
    const auto rows = static_cast<std::size_t>(uniform_int(rng, 1, total));
    const auto cols = static_cast<std::size_t>(uniform_int(rng, 1, total));
    const auto su = random_units(rng, rows, total);
    const auto du = random_units(rng, cols, total);
    const Matrix c = random_costs(rng, rows, cols, trial % 3 == 0);
    const auto supply = as_weights(su, total);
    const auto demand = as_weights(du, total);
    const auto r = solve_transport(supply, demand, c);
    REQUIRE(r.cost == doctest::Approx(transport_by_copies(su, du, c)).epsilon(1e-12));
    const auto cert = certify(supply, demand, c, r.flow, r.supply_potential, r.demand_potential);
    REQUIRE(cert.certified());
    REQUIRE(cert.primal == doctest::Approx(cert.dual).epsilon(1e-12));
  }
}

TEST_CASE("transport marginals on larger inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 30 + static_cast<std::size_t>(trial), n = 50;
    std::vector<double> supply(m), demand(n);
    for (auto& x : supply) x = uniform_real(rng, 0.1, 1);
    for (auto& x : demand) x = uniform_real(rng, 0.1, 1);
    const double s = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double d = std::accumulate(demand.begin(), demand.end(), 0.0);
    for (auto& x : supply) x /= s;
    for (auto& x : demand) x /= d;
    const Matrix c = random_costs(rng, m, n, trial % 2 == 0);
    const auto r = solve_transport(supply, demand, c);
    const auto cert = certify(supply, demand, c, r.flow, r.supply_potential, r.demand_potential);
    REQUIRE(cert.certified());
    for (double f : r.flow.data) REQUIRE(f >= 0);
  }
}

TEST_CASE("equal uniform transport agrees with assignment") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 25;
    const Matrix c = random_costs(rng, n, n, false);
    const std::vector<double> w(n, 1.0 / n);
    CHECK(solve_transport(w, w, c).cost == doctest::Approx(solve_assignment(c).cost / n).epsilon(1e-10));
  }
}

TEST_CASE("certificate detects a bad plan") {
  const std::vector<double> w{0.5, 0.5};
  Matrix c(2, 2);
  c(0, 0) = 0;
  c(0, 1) = 1;
  c(1, 0) = 1;
  c(1, 1) = 0;
  Matrix wrong(2, 2, 0.25);
  const auto cert = certify(w, w, c, wrong, {0, 0}, {0, 0});
  CHECK_FALSE(cert.certified());
  CHECK(cert.slackness_violation == doctest::Approx(1.0));
}
