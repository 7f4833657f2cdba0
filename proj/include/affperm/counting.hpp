#pragma once

// Exact and asymptotic enumeration of bounded affine permutations and of the
// avoiders of decreasing patterns.

#include <functional>
#include <string>
#include <vector>

#include "affperm/bigint.hpp"
#include "affperm/core.hpp"

namespace affperm {

/// Size cap for brute-force enumeration: AFFPERM_CAP if set, else 7.
int brute_force_cap();

/// Floating estimate of a count. `log_value` is the natural log; `value` is
/// exp(log_value) in extended precision.
struct AsymptoticEstimate {
  long double value = 0;
  long double log_value = 0;
  std::string formula_id;
};

/// a(m, j): permutations of size m with exactly j excedances. a(0,0) = 1.
BigInt eulerian(int m, int j);

/// |bounded affine permutations of size N| from the Eulerian-number formula.
BigInt exact_total(int n);

/// Visits every bounded affine permutation of size N, each exactly once.
/// `first_values`, if non-empty, restricts pi(1) for partitioning the sweep.
void for_each_bounded(int n, const std::function<void(const AffinePermutation&)>& visit,
                      const std::vector<int>& first_values = {});

/// Counts by enumeration. Throws CapExceeded above brute_force_cap().
BigInt brute_total(int n, int workers = 1);
BigInt brute_avoiders(int n, const OrdinaryPermutation& tau, int workers = 1);

AsymptoticEstimate asymptotic_total(int n);

/// Z(n_1..n_k): integer vectors with |Delta_i| <= n_i summing to 0.
BigInt z_count(const std::vector<int>& parts);

/// Closed form for Z(n, ..., n) with k parts.
BigInt z_andre(int k, int n);

/// Limit of Z(n..n)/n^(k-1).
Rational z_star(int k);

double z_limit_ratio(int k, int n);

/// Sum over n_i >= 0, sum n_i = N of multinomial(N; n)^2.
BigInt multinomial_sq_sum(int k, int n);

AsymptoticEstimate asymptotic_rs(int k, int n);

/// (1/k!) * sum over n_i >= 1 of multinomial(N; n)^2 * Z(n). Exact; the
/// divisibility by k! is checked.
BigInt upper_bound_avoiders(int k, int n);

AsymptoticEstimate asymptotic_avoiders(int k, int n);

double a_m_constant(int m);

struct TailBoundReport {
  BigInt lhs;
  long double rhs = 0;
  bool holds = false;
};

TailBoundReport tail_bound_check(int k, int n, double alpha);

/// brute_avoiders(N, tau)^(1/N) for each N.
std::vector<double> growth_rate_diagnostic(const OrdinaryPermutation& tau, const std::vector<int>& sizes);

/// Calls visit for every composition of `total` into k parts, each >= min_part.
void for_each_composition(int total, int k, int min_part,
                          const std::function<void(const std::vector<int>&)>& visit);

}  // namespace affperm
