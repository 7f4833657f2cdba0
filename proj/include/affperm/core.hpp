#pragma once

// Affine and bounded affine permutations.
//
// An affine permutation of size N is stored by its window sigma(1..N). All
// other values follow from sigma(i + tN) = sigma(i) + tN and are computed on
// demand.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "affperm/bigint.hpp"

namespace affperm {

/// A permutation of [m] in one-line notation (values 1..m).
class OrdinaryPermutation {
 public:
  /// Throws Error(NotAPermutation) unless `values` is a bijection on 1..m.
  explicit OrdinaryPermutation(std::vector<int> values);

  /// Parses "4321" (single digits) or "10,2,3,..." (comma separated).
  static OrdinaryPermutation parse(const std::string& text);

  static OrdinaryPermutation identity(int m);
  /// m (m-1) ... 1
  static OrdinaryPermutation decreasing(int m);

  int size() const noexcept { return static_cast<int>(values_.size()); }
  /// 1-based.
  int operator()(int i) const { return values_[static_cast<std::size_t>(i - 1)]; }
  const std::vector<int>& values() const noexcept { return values_; }

  bool is_decreasing() const noexcept;
  std::string to_string() const;

  auto operator<=>(const OrdinaryPermutation&) const = default;

 private:
  std::vector<int> values_;
};

class AffinePermutation {
 public:
  /// Validates the residue and centering invariants. Throws Error with kind
  /// EmptyWindow, DuplicateResidue, BadSum or WindowOverflow.
  static AffinePermutation validate(std::span<const BigInt> window);
  static AffinePermutation validate(std::span<const std::int64_t> window);
  static AffinePermutation validate(std::initializer_list<std::int64_t> window) {
    return validate(std::span<const std::int64_t>(window.begin(), window.size()));
  }

  static AffinePermutation identity(int size);

  int size() const noexcept { return static_cast<int>(window_.size()); }
  const std::vector<std::int64_t>& window() const noexcept { return window_; }

  /// sigma(i) for any integer i.
  BigInt evaluate(const BigInt& i) const;

  /// Fast path for indices whose image fits in 64 bits.
  std::int64_t at(std::int64_t i) const noexcept {
    const std::int64_t n = size();
    std::int64_t t = (i - 1) / n;
    if ((i - 1) % n < 0) --t;
    return window_[static_cast<std::size_t>(i - 1 - t * n)] + t * n;
  }

  /// |sigma(i) - i| < N for all i.
  bool is_bounded() const noexcept;

  std::string to_string() const;

  auto operator<=>(const AffinePermutation&) const = default;

 private:
  explicit AffinePermutation(std::vector<std::int64_t> window) : window_(std::move(window)) {}

  std::vector<std::int64_t> window_;
};

/// The periodic extension of pi; its window is pi's one-line notation.
AffinePermutation infinite_sum(const OrdinaryPermutation& pi);

bool is_bounded(const AffinePermutation& sigma);
BigInt evaluate(const AffinePermutation& sigma, const BigInt& i);

}  // namespace affperm
