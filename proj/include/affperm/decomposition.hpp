#pragma once

// The Psi correspondence between (n, G, H, Delta) tuples and affine
// permutations avoiding (k+1)...1, plus the restricted domains used for the
// lower bound (D_1, Dom) and the Delta set W.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affperm/bigint.hpp"
#include "affperm/core.hpp"
#include "affperm/random.hpp"

namespace affperm {

/// A member of D_0(N): block sizes n, two partitions G and H of [N] with
/// |G_i| = |H_i| = n_i (blocks sorted ascending), and shifts with
/// |Delta_i| <= n_i summing to zero.
struct DecompTuple {
  std::vector<int> n;
  std::vector<std::vector<int>> G;
  std::vector<std::vector<int>> H;
  std::vector<int> delta;

  int k() const noexcept { return static_cast<int>(n.size()); }
  int size() const noexcept;

  bool operator==(const DecompTuple&) const = default;
};

/// Throws Error(InvalidTuple) naming the first violated D_0 condition.
void validate_tuple(const DecompTuple& t);

/// Periodic extensions g_{i,j+t n_i} = g_{i,j} + tN (i is 0-based, j any integer).
std::int64_t g_ext(const DecompTuple& t, int i, std::int64_t j);
std::int64_t h_ext(const DecompTuple& t, int i, std::int64_t j);

/// sigma(g_{i,j}) = h_{i,j+Delta_i}. The result is affine and avoids
/// (k+1)...1 but need not be bounded.
AffinePermutation psi(const DecompTuple& t);

/// Canonical preimage of a bounded avoider: G from decompose_increasing.
DecompTuple psi_inverse(const AffinePermutation& sigma, int k);

/// Applies the same subscript permutation to n, G, H and Delta:
/// block i of the result is block order[i] of t.
DecompTuple relabel(const DecompTuple& t, const std::vector<int>& order);

/// Blocks ordered by ascending minimum of G_i.
DecompTuple canonical(const DecompTuple& t);

bool equal_up_to_relabeling(const DecompTuple& a, const DecompTuple& b);

struct DomParams {
  double alpha = 0;
  double A = 0;
  double B = 0;
};

/// Throws Error(InvalidParams) unless 0 < alpha < 1/k and A, B > 0.
void validate_params(const DomParams& p, int k);

/// Elements x(1) < ... < x(w) of S satisfy |x(l) - l N/(w+1)| < A.
bool in_seq_star_A(const std::vector<int>& sorted_set, int n, double A);

/// |n_i - N/k| <= alpha N for every i.
bool in_n_alpha(const std::vector<int>& n, double alpha);

/// |Delta_i N/n_i - Delta_j N/n_j| > 4(2A + 2k/(1 - k alpha)) for all i != j.
bool delta_separated(const std::vector<int>& n, const std::vector<int>& delta, const DomParams& p);

double strip_half_width(int k, const DomParams& p);

bool in_d1(const DecompTuple& t, const DomParams& p);
bool in_dom(const DecompTuple& t, const DomParams& p);

/// kB/(1 + k alpha) >= 2A + 2k/(1 - k alpha): every Dom image is bounded.
bool dom_images_bounded(int k, const DomParams& p);

/// All Delta with sum 0, |Delta_i| < n_i - B, and the Dom separation,
/// sorted lexicographically. Throws CapExceeded if k * max(n_i) > cap.
std::vector<std::vector<int>> enumerate_W(const std::vector<int>& n, const DomParams& p,
                                          std::int64_t cap = 200000);

/// Counts and uniformly samples tuples (G_1..G_k) in V**A(n): partitions of
/// [N] whose blocks all lie in Seq*A.
class SpacedPartitionSampler {
 public:
  SpacedPartitionSampler(std::vector<int> n, double A);

  const BigInt& count() const noexcept { return total_; }
  std::vector<std::vector<int>> sample(Rng& rng) const;

 private:
  std::size_t state_index(const std::vector<int>& filled) const;
  bool admissible(int block, int slot, int x) const;

  std::vector<int> n_;
  int size_ = 0;
  double A_ = 0;
  std::vector<std::size_t> stride_;
  // ways_[x][s]: completions from element x + 1 with filled counts s.
  std::vector<std::vector<BigInt>> ways_;
  BigInt total_;
};

/// Exact uniform sampler over Dom(N, alpha, A, B) for k blocks.
class DomSampler {
 public:
  /// Throws Error(EmptyDomain) when Dom has no element.
  DomSampler(int k, int n, const DomParams& p);

  const BigInt& dom_size() const noexcept { return total_; }
  DecompTuple sample(Rng& rng) const;

 private:
  struct Shape {
    std::vector<int> n;
    SpacedPartitionSampler partitions;
    std::vector<std::vector<int>> deltas;
    BigInt weight;
  };

  int k_;
  int size_;
  DomParams params_;
  std::vector<Shape> shapes_;
  BigInt total_;
};

/// |Dom(N, alpha, A, B)| = sum over n of |V**A(n)|^2 |W(n)|.
BigInt dom_size(int k, int n, const DomParams& p);

/// Decodes a Psi image of a Dom tuple by clustering plot points on y - x.
/// Valid whenever the strips are separated (always for Dom images), whether
/// or not the image is bounded.
DecompTuple decode_by_strips(const AffinePermutation& sigma, int k);

struct KFactorialReport {
  bool passed = false;
  int samples = 0;
  int distinct_images = 0;
  std::string detail;
};

/// Checks on sampled Dom tuples that all k! relabelings share one image,
/// that decoding recovers the tuple up to relabeling, and that tuples with
/// distinct unordered block structure have distinct images.
/// Throws Error(EmptyDomain) if Dom is empty.
KFactorialReport verify_k_factorial(int k, const DomParams& p, int n, int sample_size,
                                    std::uint64_t seed);

}  // namespace affperm
