#include "affperm/patterns.hpp"

#include <algorithm>
#include <limits>

#include "affperm/error.hpp"

namespace affperm {

namespace {

void require_bounded(const AffinePermutation& sigma, const char* op) {
  if (!sigma.is_bounded()) {
    throw Error(ErrorKind::UnboundedInput, std::string(op) + " requires |sigma(i) - i| < N for all i; got " +
                                               sigma.to_string());
  }
}

// Depth-first search for an occurrence of tau. `value(p)` gives the entry at
// position p; the first position ranges over [first_lo, first_hi] and every
// position is at most `last`. `span_hint(lb, ub)` narrows the candidate range
// for the next entry given that its value must lie strictly in (lb, ub).
template <class ValueAt, class Narrow>
bool search(const OrdinaryPermutation& tau, ValueAt value, std::int64_t first_lo, std::int64_t first_hi,
            std::int64_t last, Narrow narrow, std::vector<std::int64_t>& pos, std::vector<std::int64_t>& vals) {
  const std::size_t t = pos.size();
  const int m = tau.size();
  if (t == static_cast<std::size_t>(m)) return true;

  std::int64_t lb = std::numeric_limits<std::int64_t>::min();
  std::int64_t ub = std::numeric_limits<std::int64_t>::max();
  const int want = tau.values()[t];
  for (std::size_t s = 0; s < t; ++s) {
    if (tau.values()[s] < want) lb = std::max(lb, vals[s]);
    else ub = std::min(ub, vals[s]);
  }

  std::int64_t lo = t == 0 ? first_lo : pos.back() + 1;
  std::int64_t hi = t == 0 ? first_hi : last;
  narrow(lb, ub, lo, hi);
  for (std::int64_t q = lo; q <= hi; ++q) {
    const std::int64_t v = value(q);
    if (v <= lb || v >= ub) continue;
    pos.push_back(q);
    vals.push_back(v);
    if (search(tau, value, first_lo, first_hi, last, narrow, pos, vals)) return true;
    pos.pop_back();
    vals.pop_back();
  }
  return false;
}

// Boundedness: q - N < sigma(q) < q + N. A value below ub needs q < ub + N - 1,
// a value above lb needs q > lb - N + 1.
auto bounded_narrow(std::int64_t n) {
  return [n](std::int64_t lb, std::int64_t ub, std::int64_t& lo, std::int64_t& hi) {
    if (ub != std::numeric_limits<std::int64_t>::max()) hi = std::min(hi, ub + n - 2);
    if (lb != std::numeric_limits<std::int64_t>::min()) lo = std::max(lo, lb - n + 2);
  };
}

template <class ValueAt>
bool order_isomorphic(const OrdinaryPermutation& tau, const std::vector<std::int64_t>& positions, ValueAt value) {
  if (positions.size() != static_cast<std::size_t>(tau.size())) return false;
  for (std::size_t a = 1; a < positions.size(); ++a)
    if (positions[a] <= positions[a - 1]) return false;
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      const bool pattern_less = tau.values()[a] < tau.values()[b];
      const bool value_less = value(positions[a]) < value(positions[b]);
      if (pattern_less != value_less) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<Occurrence> contains_ordinary(const OrdinaryPermutation& pi, const OrdinaryPermutation& tau) {
  const int n = pi.size();
  if (tau.size() > n) return std::nullopt;
  auto value = [&](std::int64_t p) -> std::int64_t { return pi(static_cast<int>(p)); };
  auto narrow = [](std::int64_t, std::int64_t, std::int64_t&, std::int64_t&) {};
  std::vector<std::int64_t> pos, vals;
  if (!search(tau, value, 1, n, n, narrow, pos, vals)) return std::nullopt;
  return Occurrence{tau, pos};
}

bool is_occurrence(const OrdinaryPermutation& pi, const Occurrence& occ) {
  for (auto p : occ.positions)
    if (p < 1 || p > pi.size()) return false;
  return order_isomorphic(occ.pattern, occ.positions,
                          [&](std::int64_t p) -> std::int64_t { return pi(static_cast<int>(p)); });
}

bool is_occurrence(const AffinePermutation& sigma, const Occurrence& occ) {
  return order_isomorphic(occ.pattern, occ.positions, [&](std::int64_t p) { return sigma.at(p); });
}

std::int64_t containment_window(int size, int pattern_size) {
  const std::int64_t n = size;
  return n + 3 * n * (pattern_size - 1);
}

std::optional<Occurrence> contains_affine(const AffinePermutation& sigma, const OrdinaryPermutation& tau,
                                          std::optional<std::int64_t> window_end) {
  require_bounded(sigma, "contains_affine");
  const std::int64_t n = sigma.size();
  const std::int64_t last = window_end.value_or(containment_window(sigma.size(), tau.size()));
  auto value = [&](std::int64_t p) { return sigma.at(p); };
  const auto narrow = bounded_narrow(n);
  std::vector<std::int64_t> pos, vals;
  if (!search(tau, value, 1, n, last, narrow, pos, vals)) return std::nullopt;
  return Occurrence{tau, pos};
}

std::optional<Occurrence> shortest_occurrence(const AffinePermutation& sigma, const OrdinaryPermutation& tau) {
  require_bounded(sigma, "shortest_occurrence");
  const std::int64_t n = sigma.size();
  const std::int64_t window = containment_window(sigma.size(), tau.size());
  auto value = [&](std::int64_t p) { return sigma.at(p); };
  const auto narrow = bounded_narrow(n);
  std::optional<Occurrence> best;
  std::vector<std::int64_t> pos, vals;
  for (std::int64_t first = 1; first <= n; ++first) {
    // Lower the last allowed index until no occurrence starting at `first` fits.
    std::int64_t hi = best ? first + (best->positions.back() - best->positions.front()) - 1 : window;
    while (search(tau, value, first, first, hi, narrow, pos, vals)) {
      best = Occurrence{tau, pos};
      hi = pos.back() - 1;
      pos.clear();
      vals.clear();
    }
    pos.clear();
    vals.clear();
  }
  return best;
}

int rank(const AffinePermutation& sigma, std::int64_t a) {
  require_bounded(sigma, "rank");
  // A decreasing run a = a_1 < ... < a_r has a_r < a + 2N.
  const std::int64_t len = 2 * static_cast<std::int64_t>(sigma.size());
  std::vector<std::int64_t> vals(static_cast<std::size_t>(len));
  for (std::int64_t q = 0; q < len; ++q) vals[static_cast<std::size_t>(q)] = sigma.at(a + q);
  std::vector<int> best(static_cast<std::size_t>(len), 1);
  for (std::int64_t q = len - 1; q >= 0; --q) {
    for (std::int64_t r = q + 1; r < len; ++r) {
      if (vals[static_cast<std::size_t>(r)] < vals[static_cast<std::size_t>(q)])
        best[static_cast<std::size_t>(q)] = std::max(best[static_cast<std::size_t>(q)], best[static_cast<std::size_t>(r)] + 1);
    }
  }
  return best[0];
}

std::vector<int> ranks(const AffinePermutation& sigma) {
  require_bounded(sigma, "ranks");
  const std::size_t n = static_cast<std::size_t>(sigma.size());
  const std::size_t len = 3 * n - 1;  // positions 1 .. 3N-1
  std::vector<std::int64_t> vals(len);
  for (std::size_t q = 0; q < len; ++q) vals[q] = sigma.at(static_cast<std::int64_t>(q) + 1);
  std::vector<int> best(len, 1);
  for (std::size_t q = len; q-- > 0;) {
    for (std::size_t r = q + 1; r < len; ++r)
      if (vals[r] < vals[q]) best[q] = std::max(best[q], best[r] + 1);
  }
  best.resize(n);
  return best;
}

int max_rank(const AffinePermutation& sigma) {
  require_bounded(sigma, "max_rank");
  // Every decreasing subsequence translates to one starting in [1, N], which
  // then lies in [1, 3N). Patience sorting on negated values.
  const std::int64_t len = 3 * static_cast<std::int64_t>(sigma.size()) - 1;
  std::vector<std::int64_t> tails;
  for (std::int64_t q = 1; q <= len; ++q) {
    const std::int64_t v = -sigma.at(q);
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) tails.push_back(v);
    else *it = v;
  }
  return static_cast<int>(tails.size());
}

bool avoids_decreasing(const AffinePermutation& sigma, int m) { return max_rank(sigma) <= m - 1; }

bool avoids(const AffinePermutation& sigma, const OrdinaryPermutation& tau) {
  if (tau.is_decreasing()) return avoids_decreasing(sigma, tau.size());
  return !contains_affine(sigma, tau).has_value();
}

IncreasingPartition decompose_increasing(const AffinePermutation& sigma, int k) {
  require_bounded(sigma, "decompose_increasing");
  const int n = sigma.size();
  if (n < k) {
    throw Error(ErrorKind::SizeTooSmall,
                "decompose_increasing needs N >= k (N = " + std::to_string(n) + ", k = " + std::to_string(k) + ")");
  }
  const std::vector<int> r = ranks(sigma);
  std::vector<std::vector<int>> classes(static_cast<std::size_t>(k));
  for (int i = 0; i < n; ++i) {
    const int ri = r[static_cast<std::size_t>(i)];
    if (ri > k) {
      throw Error(ErrorKind::TooManyRanks, "position " + std::to_string(i + 1) + " has rank " + std::to_string(ri) +
                                               " > k = " + std::to_string(k) + "; sigma contains " +
                                               OrdinaryPermutation::decreasing(k + 1).to_string());
    }
    classes[static_cast<std::size_t>(ri - 1)].push_back(i + 1);
  }
  std::vector<std::vector<int>> blocks;
  for (auto& c : classes)
    if (!c.empty()) blocks.push_back(std::move(c));
  while (static_cast<int>(blocks.size()) < k) {
    std::size_t pick = 0;
    for (std::size_t b = 1; b < blocks.size(); ++b) {
      if (blocks[b].size() > blocks[pick].size() ||
          (blocks[b].size() == blocks[pick].size() && blocks[b].front() < blocks[pick].front()))
        pick = b;
    }
    const int first = blocks[pick].front();
    blocks[pick].erase(blocks[pick].begin());
    blocks.push_back({first});
  }
  std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return IncreasingPartition{k, std::move(blocks)};
}

bool satisfies_increasing_invariant(const AffinePermutation& sigma, const IncreasingPartition& part) {
  const int n = sigma.size();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  int covered = 0;
  if (static_cast<int>(part.blocks.size()) != part.k) return false;
  for (const auto& block : part.blocks) {
    if (block.empty()) return false;
    for (std::size_t j = 0; j < block.size(); ++j) {
      const int g = block[j];
      if (g < 1 || g > n || seen[static_cast<std::size_t>(g)]) return false;
      if (j > 0 && (block[j - 1] >= g || sigma.at(block[j - 1]) >= sigma.at(g))) return false;
      seen[static_cast<std::size_t>(g)] = true;
      ++covered;
    }
    if (sigma.at(block.back()) >= sigma.at(block.front() + static_cast<std::int64_t>(n))) return false;
  }
  return covered == n;
}

}  // namespace affperm
