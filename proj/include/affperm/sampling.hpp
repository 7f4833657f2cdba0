#pragma once

// Uniform generation of pattern-avoiding bounded affine permutations.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "affperm/core.hpp"
#include "affperm/random.hpp"

namespace affperm {

struct McmcConfig {
  long steps = 1;
  long burn_in = 0;
  long thin = 1;
  std::uint64_t seed = 0;
  double swap_prob = 0.8;
  /// Probability of a block transfer instead of a swap or shift. Only used
  /// when the pattern is decreasing, where the block decomposition exists.
  double transfer_prob = 0.1;
  /// Probability of a rotation sigma(x) -> sigma(x + 1) - 1 or its inverse.
  double rotate_prob = 0.05;

  /// burn_in = 50 N^2, thin = N^2, steps enough for `count` samples.
  static McmcConfig defaults(int n, long count, std::uint64_t seed);
};

/// Throws Error(InvalidParams) on a malformed config.
void validate_config(const McmcConfig& cfg);

/// Every bounded sigma of size N avoiding tau, lexicographic by window.
std::vector<AffinePermutation> enumerate_avoiders(int n, const OrdinaryPermutation& tau);

/// Uniform draw from enumerate_avoiders(N, tau); the universe is cached per (N, tau).
AffinePermutation sample_exact(int n, const OrdinaryPermutation& tau, Rng& rng);

/// Metropolis chain started at the identity. `steps` counts post-burn-in
/// steps; a state is emitted every `thin` steps after burn-in. Proposals are
/// value swaps, shift pairs and rotations, plus block transfers for
/// decreasing patterns.
std::vector<AffinePermutation> mcmc_sample(int n, const OrdinaryPermutation& tau, const McmcConfig& cfg);

/// One window proposal of the chain. Indices are 0-based; a rotation uses
/// i = +1 or -1 as its direction.
struct Move {
  enum class Kind { Swap, Shift, Rotate };
  Kind kind = Kind::Swap;
  int i = 0;
  int j = 0;
};

/// Value swap, shift pair (sigma(i) += N, sigma(j) -= N), or rotation
/// sigma(x) -> sigma(x + i) - i, applied to a window in place.
void apply_move(std::vector<std::int64_t>& window, const Move& move);
/// The move undoing `move`.
Move inverse_move(const Move& move);

/// Block transfer for a (k+1)...1 avoider: in the canonical decomposition
/// psi_inverse(sigma, k), add 1 to Delta_from and subtract 1 from Delta_to.
/// Absent unless the result is a valid tuple whose image is bounded and has
/// that same tuple as its canonical decomposition, which makes the move its
/// own inverse with from and to exchanged.
std::optional<AffinePermutation> transfer_move(const AffinePermutation& sigma, int k, int from, int to);

/// Breadth-first search over the move graph from the identity.
std::set<std::vector<std::int64_t>> reachable_from_identity(int n, const OrdinaryPermutation& tau);

struct ChiSquareResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
};

/// Pearson test of `samples` against the uniform law on `universe`.
/// Throws Error(SampleOutsideUniverse).
ChiSquareResult chi_square_uniformity(const std::vector<AffinePermutation>& samples,
                                      const std::vector<AffinePermutation>& universe);

/// Counts per universe element for an already tallied sample.
ChiSquareResult chi_square_from_counts(const std::vector<long>& counts);

}  // namespace affperm
