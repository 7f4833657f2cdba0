#include "affperm/sampling.hpp"

#include <algorithm>
#include <deque>
#include <mutex>

#include <boost/math/special_functions/gamma.hpp>

#include "affperm/counting.hpp"
#include "affperm/decomposition.hpp"
#include "affperm/error.hpp"
#include "affperm/patterns.hpp"

namespace affperm {

namespace {

bool window_bounded(const std::vector<std::int64_t>& w) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t d = w[static_cast<std::size_t>(i)] - (i + 1);
    if (d >= n || -d >= n) return false;
  }
  return true;
}

bool entry_bounded(const std::vector<std::int64_t>& w, int i) {
  const std::int64_t n = static_cast<std::int64_t>(w.size());
  const std::int64_t d = w[static_cast<std::size_t>(i)] - (i + 1);
  return d < n && -d < n;
}

Move propose(Rng& rng, int n, const McmcConfig& cfg) {
  Move m;
  if (uniform_real(rng, 0.0, 1.0) < cfg.rotate_prob) {
    m.kind = Move::Kind::Rotate;
    m.i = uniform_int(rng, 0, 1) == 0 ? 1 : -1;
    return m;
  }
  m.kind = uniform_real(rng, 0.0, 1.0) < cfg.swap_prob ? Move::Kind::Swap : Move::Kind::Shift;
  m.i = static_cast<int>(uniform_int(rng, 0, n - 1));
  m.j = static_cast<int>(uniform_int(rng, 0, n - 2));
  if (m.j >= m.i) ++m.j;
  if (m.kind == Move::Kind::Swap && m.i > m.j) std::swap(m.i, m.j);
  return m;
}

}  // namespace

McmcConfig McmcConfig::defaults(int n, long count, std::uint64_t seed) {
  McmcConfig c;
  const long nn = static_cast<long>(n) * n;
  c.burn_in = 50 * nn;
  c.thin = nn;
  c.steps = std::max(1L, count) * nn;
  c.seed = seed;
  return c;
}

void validate_config(const McmcConfig& cfg) {
  if (cfg.steps < 1) throw Error(ErrorKind::InvalidParams, "steps must be >= 1");
  if (cfg.burn_in < 0) throw Error(ErrorKind::InvalidParams, "burn_in must be >= 0");
  if (cfg.thin < 1) throw Error(ErrorKind::InvalidParams, "thin must be >= 1");
  if (!(cfg.swap_prob >= 0.0 && cfg.swap_prob <= 1.0)) throw Error(ErrorKind::InvalidParams, "swap_prob must lie in [0, 1]");
  if (!(cfg.transfer_prob >= 0.0 && cfg.transfer_prob <= 1.0)) {
    throw Error(ErrorKind::InvalidParams, "transfer_prob must lie in [0, 1]");
  }
  if (!(cfg.rotate_prob >= 0.0 && cfg.rotate_prob <= 1.0)) throw Error(ErrorKind::InvalidParams, "rotate_prob must lie in [0, 1]");
}

std::vector<AffinePermutation> enumerate_avoiders(int n, const OrdinaryPermutation& tau) {
  const int cap = brute_force_cap();
  if (n > cap) {
    throw Error(ErrorKind::CapExceeded, "enumerate_avoiders at N = " + std::to_string(n) + " exceeds the cap " +
                                            std::to_string(cap) + " (set AFFPERM_CAP)");
  }
  std::vector<AffinePermutation> out;
  for_each_bounded(n, [&](const AffinePermutation& s) {
    if (avoids(s, tau)) out.push_back(s);
  });
  std::sort(out.begin(), out.end(), [](const AffinePermutation& a, const AffinePermutation& b) { return a.window() < b.window(); });
  return out;
}

AffinePermutation sample_exact(int n, const OrdinaryPermutation& tau, Rng& rng) {
  static std::mutex lock;
  static std::map<std::pair<int, std::vector<int>>, std::vector<AffinePermutation>> cache;
  const std::vector<AffinePermutation>* universe = nullptr;
  {
    std::lock_guard<std::mutex> guard(lock);
    auto key = std::make_pair(n, tau.values());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, enumerate_avoiders(n, tau)).first;
    universe = &it->second;
  }
  if (universe->empty()) throw Error(ErrorKind::EmptyDomain, "no bounded permutation of size " + std::to_string(n) + " avoids " + tau.to_string());
  return (*universe)[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(universe->size()) - 1))];
}

void apply_move(std::vector<std::int64_t>& window, const Move& move) {
  const auto n = static_cast<std::int64_t>(window.size());
  switch (move.kind) {
    case Move::Kind::Swap:
      std::swap(window[static_cast<std::size_t>(move.i)], window[static_cast<std::size_t>(move.j)]);
      break;
    case Move::Kind::Shift:
      window[static_cast<std::size_t>(move.i)] += n;
      window[static_cast<std::size_t>(move.j)] -= n;
      break;
    case Move::Kind::Rotate:
      if (move.i > 0) {
        const std::int64_t first = window.front();
        std::rotate(window.begin(), window.begin() + 1, window.end());
        window.back() = first + n;
        for (auto& v : window) v -= 1;
      } else {
        const std::int64_t last = window.back();
        std::rotate(window.rbegin(), window.rbegin() + 1, window.rend());
        window.front() = last - n;
        for (auto& v : window) v += 1;
      }
      break;
  }
}

Move inverse_move(const Move& move) {
  switch (move.kind) {
    case Move::Kind::Swap:
      return move;
    case Move::Kind::Shift:
      return Move{Move::Kind::Shift, move.j, move.i};
    case Move::Kind::Rotate:
      return Move{Move::Kind::Rotate, -move.i, 0};
  }
  return move;
}

std::vector<AffinePermutation> mcmc_sample(int n, const OrdinaryPermutation& tau, const McmcConfig& cfg) {
  validate_config(cfg);
  if (n < 1) throw Error(ErrorKind::InvalidParams, "N must be >= 1");
  Rng rng(cfg.seed);
  AffinePermutation state = AffinePermutation::identity(n);
  std::vector<std::int64_t> window = state.window();
  const int k = tau.is_decreasing() && tau.size() >= 3 ? tau.size() - 1 : 0;
  const double transfer_prob = k >= 2 && n >= k ? cfg.transfer_prob : 0.0;
  std::vector<AffinePermutation> out;
  out.reserve(static_cast<std::size_t>(cfg.steps / cfg.thin));
  const long total = cfg.burn_in + cfg.steps;
  for (long step = 1; step <= total; ++step) {
    if (n >= 2) {
      if (transfer_prob > 0.0 && uniform_real(rng, 0.0, 1.0) < transfer_prob) {
        const int from = static_cast<int>(uniform_int(rng, 0, k - 1));
        int to = static_cast<int>(uniform_int(rng, 0, k - 2));
        if (to >= from) ++to;
        if (auto next = transfer_move(state, k, from, to)) {
          state = std::move(*next);
          window = state.window();
        }
      } else {
        const Move move = propose(rng, n, cfg);
        apply_move(window, move);
        // Conjugating by the index shift preserves boundedness and every
        // pattern, so rotations are always accepted.
        const bool rotation = move.kind == Move::Kind::Rotate;
        bool accept = rotation || (entry_bounded(window, move.i) && entry_bounded(window, move.j));
        if (rotation) {
          state = AffinePermutation::validate(std::span<const std::int64_t>(window));
        } else if (accept) {
          // validate re-checks the residue set and the centering sum.
          AffinePermutation candidate = AffinePermutation::validate(std::span<const std::int64_t>(window));
          accept = avoids(candidate, tau);
          if (accept) state = std::move(candidate);
        }
        if (!accept) apply_move(window, inverse_move(move));
      }
    }
    const long post = step - cfg.burn_in;
    if (post > 0 && post % cfg.thin == 0) out.push_back(state);
  }
  return out;
}

std::optional<AffinePermutation> transfer_move(const AffinePermutation& sigma, int k, int from, int to) {
  DecompTuple t = psi_inverse(sigma, k);
  auto& df = t.delta.at(static_cast<std::size_t>(from));
  auto& dt = t.delta.at(static_cast<std::size_t>(to));
  if (from == to || df + 1 > t.n[static_cast<std::size_t>(from)] || dt - 1 < -t.n[static_cast<std::size_t>(to)]) {
    return std::nullopt;
  }
  ++df;
  --dt;
  AffinePermutation image = psi(t);
  if (!image.is_bounded() || psi_inverse(image, k) != t) return std::nullopt;
  return image;
}

std::set<std::vector<std::int64_t>> reachable_from_identity(int n, const OrdinaryPermutation& tau) {
  const int k = tau.is_decreasing() && tau.size() >= 3 && n >= tau.size() - 1 ? tau.size() - 1 : 0;
  std::set<std::vector<std::int64_t>> seen;
  std::deque<std::vector<std::int64_t>> queue;
  const auto start = AffinePermutation::identity(n).window();
  seen.insert(start);
  queue.push_back(start);
  auto visit = [&](const std::vector<std::int64_t>& w) {
    if (seen.insert(w).second) queue.push_back(w);
  };
  while (!queue.empty()) {
    std::vector<std::int64_t> w = std::move(queue.front());
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (auto kind : {Move::Kind::Swap, Move::Kind::Shift}) {
          if (kind == Move::Kind::Swap && i > j) continue;
          const Move m{kind, i, j};
          apply_move(w, m);
          if (window_bounded(w) && !seen.count(w) && avoids(AffinePermutation::validate(std::span<const std::int64_t>(w)), tau)) {
            visit(w);
          }
          apply_move(w, inverse_move(m));
        }
      }
    }
    for (int dir : {1, -1}) {
      auto r = w;
      apply_move(r, Move{Move::Kind::Rotate, dir, 0});
      visit(r);
    }
    if (k >= 2) {
      const AffinePermutation sigma = AffinePermutation::validate(std::span<const std::int64_t>(w));
      for (int from = 0; from < k; ++from)
        for (int to = 0; to < k; ++to)
          if (from != to)
            if (auto next = transfer_move(sigma, k, from, to)) visit(next->window());
    }
  }
  return seen;
}

ChiSquareResult chi_square_from_counts(const std::vector<long>& counts) {
  ChiSquareResult r;
  if (counts.empty()) throw Error(ErrorKind::InvalidParams, "chi-square needs a non-empty universe");
  long total = 0;
  for (long c : counts) total += c;
  r.dof = static_cast<int>(counts.size()) - 1;
  if (total == 0 || r.dof == 0) return r;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  for (long c : counts) r.statistic += (c - expected) * (c - expected) / expected;
  r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2.0);
  return r;
}

ChiSquareResult chi_square_uniformity(const std::vector<AffinePermutation>& samples,
                                      const std::vector<AffinePermutation>& universe) {
  if (universe.empty()) throw Error(ErrorKind::InvalidParams, "chi-square needs a non-empty universe");
  std::map<std::vector<std::int64_t>, std::size_t> index;
  for (std::size_t u = 0; u < universe.size(); ++u) index.emplace(universe[u].window(), u);
  std::vector<long> counts(universe.size(), 0);
  for (const auto& s : samples) {
    auto it = index.find(s.window());
    if (it == index.end()) throw Error(ErrorKind::SampleOutsideUniverse, "sample " + s.to_string() + " is not in the universe");
    ++counts[it->second];
  }
  return chi_square_from_counts(counts);
}

}  // namespace affperm
