#pragma once

// Pattern containment for ordinary and bounded affine permutations, and the
// rank decomposition of a decreasing-pattern avoider into periodic increasing
// subsequences.

#include <cstdint>
#include <optional>
#include <vector>

#include "affperm/core.hpp"

namespace affperm {

struct Occurrence {
  OrdinaryPermutation pattern;
  /// Strictly increasing; for affine permutations these may lie outside [1, N].
  std::vector<std::int64_t> positions;
};

/// Blocks of a partition of [N]; each block sorted ascending.
struct IncreasingPartition {
  int k = 0;
  std::vector<std::vector<int>> blocks;
};

std::optional<Occurrence> contains_ordinary(const OrdinaryPermutation& pi,
                                            const OrdinaryPermutation& tau);

/// True iff the values of `values` at `positions` are order-isomorphic to tau.
bool is_occurrence(const OrdinaryPermutation& pi, const Occurrence& occ);
bool is_occurrence(const AffinePermutation& sigma, const Occurrence& occ);

/// Last index searched by contains_affine: N + 3N(m-1).
std::int64_t containment_window(int size, int pattern_size);

/// Depth-first search over index subsets whose first index is in [1, N] and
/// whose indices all lie in [1, window_end]. window_end defaults to
/// containment_window(N, |tau|). Requires a bounded sigma.
std::optional<Occurrence> contains_affine(const AffinePermutation& sigma,
                                          const OrdinaryPermutation& tau,
                                          std::optional<std::int64_t> window_end = std::nullopt);

/// Longest decreasing run sigma(a) > sigma(a_2) > ... starting at position a.
/// An occurrence of minimal index span (last - first), ties broken by the
/// smallest first index; absent iff contains_affine is.
std::optional<Occurrence> shortest_occurrence(const AffinePermutation& sigma, const OrdinaryPermutation& tau);

int rank(const AffinePermutation& sigma, std::int64_t a);

/// rank(sigma, a) for a = 1..N.
std::vector<int> ranks(const AffinePermutation& sigma);

/// Length of the longest decreasing subsequence anywhere in sigma.
int max_rank(const AffinePermutation& sigma);

/// True iff sigma avoids m (m-1) ... 1, i.e. every rank is at most m-1.
bool avoids_decreasing(const AffinePermutation& sigma, int m);

/// sigma avoids tau; dispatches to the rank test when tau is decreasing.
bool avoids(const AffinePermutation& sigma, const OrdinaryPermutation& tau);

/// Canonical partition of [N] into k periodic increasing blocks: rank classes,
/// empty classes dropped, the largest block split (first element into a new
/// block) until there are k, blocks sorted by minimum element.
IncreasingPartition decompose_increasing(const AffinePermutation& sigma, int k);

/// sigma(g_1) < ... < sigma(g_n) < sigma(g_1 + N) for every block.
bool satisfies_increasing_invariant(const AffinePermutation& sigma, const IncreasingPartition& part);

}  // namespace affperm
