#include "affperm/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "affperm/error.hpp"
#include "affperm/patterns.hpp"

namespace affperm {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

AsymptoticEstimate from_log(long double log_value, std::string id) {
  return AsymptoticEstimate{std::exp(log_value), log_value, std::move(id)};
}

void require_positive(int n, const char* what) {
  if (n < 1) throw Error(ErrorKind::InvalidParams, std::string(what) + " must be >= 1, got " + std::to_string(n));
}

void check_cap(int n) {
  const int cap = brute_force_cap();
  if (n > cap) {
    throw Error(ErrorKind::CapExceeded, "brute-force enumeration at N = " + std::to_string(n) +
                                            " exceeds the cap " + std::to_string(cap) + " (set AFFPERM_CAP)");
  }
}

// Shift vectors for a fixed pi: sigma(i) = pi(i) + N d_i, d_i in {-1, 0, 1}
// restricted to bounded entries, with sum d_i = 0.
void shifts(int n, const std::vector<int>& pi, std::size_t i, int sum, std::vector<std::int64_t>& window,
            const std::function<void(const AffinePermutation&)>& visit) {
  const std::size_t remaining = static_cast<std::size_t>(n) - i;
  if (i == static_cast<std::size_t>(n)) {
    if (sum == 0) visit(AffinePermutation::validate(std::span<const std::int64_t>(window)));
    return;
  }
  for (int d = -1; d <= 1; ++d) {
    const int s = sum + d;
    if (std::abs(s) > static_cast<int>(remaining) - 1) continue;
    const std::int64_t v = pi[i] + static_cast<std::int64_t>(n) * d;
    const std::int64_t pos = static_cast<std::int64_t>(i) + 1;
    if (v - pos >= n || pos - v >= n) continue;
    window[i] = v;
    shifts(n, pi, i + 1, s, window, visit);
  }
}

void sweep_first_value(int n, int first, const std::function<void(const AffinePermutation&)>& visit) {
  std::vector<int> rest;
  for (int v = 1; v <= n; ++v)
    if (v != first) rest.push_back(v);
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::vector<std::int64_t> window(static_cast<std::size_t>(n));
  do {
    pi[0] = first;
    std::copy(rest.begin(), rest.end(), pi.begin() + 1);
    shifts(n, pi, 0, 0, window, visit);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

// Runs the sweep split by pi(1) over `workers` threads; `count` is evaluated
// per permutation and results are summed.
BigInt parallel_count(int n, int workers, const std::function<bool(const AffinePermutation&)>& count) {
  workers = std::max(1, std::min(workers, n));
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
  auto job = [&](int w) {
    std::uint64_t local = 0;
    for (int first = 1 + w; first <= n; first += workers)
      sweep_first_value(n, first, [&](const AffinePermutation& s) { local += count(s) ? 1 : 0; });
    partial[static_cast<std::size_t>(w)] = local;
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(job, w);
    for (auto& t : threads) t.join();
  }
  BigInt total = 0;
  for (auto p : partial) total += p;
  return total;
}

void compositions(int total, int k, int min_part, std::vector<int>& parts,
                  const std::function<void(const std::vector<int>&)>& visit) {
  const int placed = static_cast<int>(parts.size());
  if (placed == k - 1) {
    if (total >= min_part) {
      parts.push_back(total);
      visit(parts);
      parts.pop_back();
    }
    return;
  }
  const int left = k - placed - 1;
  for (int p = min_part; total - p >= left * min_part; ++p) {
    parts.push_back(p);
    compositions(total - p, k, min_part, parts, visit);
    parts.pop_back();
  }
}

}  // namespace

int brute_force_cap() {
  if (const char* env = std::getenv("AFFPERM_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 64) return static_cast<int>(v);
  }
  return 7;
}

BigInt eulerian(int m, int j) {
  if (m < 0) return 0;
  if (m == 0) return j == 0 ? 1 : 0;
  if (j < 0 || j > m - 1) return 0;
  std::vector<BigInt> row{1};  // a(0, .)
  for (int r = 1; r <= m; ++r) {
    std::vector<BigInt> next(static_cast<std::size_t>(r), 0);
    for (int c = 0; c < r; ++c) {
      BigInt v = 0;
      if (c < static_cast<int>(row.size())) v += BigInt(c + 1) * row[static_cast<std::size_t>(c)];
      if (c >= 1 && c - 1 < static_cast<int>(row.size())) v += BigInt(r - c) * row[static_cast<std::size_t>(c - 1)];
      next[static_cast<std::size_t>(c)] = v;
    }
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(j)];
}

BigInt exact_total(int n) {
  require_positive(n, "N");
  BigInt total = 0;
  for (int m = 0; m <= n; ++m) {
    BigInt inner = 0;
    for (int j = 0; j <= n; ++j) {
      const BigInt c = binomial(m, n - j);
      if (c == 0) continue;
      inner += c * eulerian(m, j);
    }
    const BigInt term = binomial(n, m) * inner;
    if ((n - m) % 2 == 0) total += term;
    else total -= term;
  }
  return total;
}

void for_each_bounded(int n, const std::function<void(const AffinePermutation&)>& visit,
                      const std::vector<int>& first_values) {
  require_positive(n, "N");
  if (first_values.empty()) {
    for (int f = 1; f <= n; ++f) sweep_first_value(n, f, visit);
  } else {
    for (int f : first_values)
      if (f >= 1 && f <= n) sweep_first_value(n, f, visit);
  }
}

BigInt brute_total(int n, int workers) {
  require_positive(n, "N");
  check_cap(n);
  return parallel_count(n, workers, [](const AffinePermutation&) { return true; });
}

BigInt brute_avoiders(int n, const OrdinaryPermutation& tau, int workers) {
  require_positive(n, "N");
  check_cap(n);
  return parallel_count(n, workers, [&](const AffinePermutation& s) { return avoids(s, tau); });
}

AsymptoticEstimate asymptotic_total(int n) {
  require_positive(n, "N");
  const long double nn = n;
  const long double lv = 0.5L * std::log(3.0L / (2.0L * kPi * std::exp(1.0L) * nn)) + nn * std::log(2.0L) +
                         std::lgamma(nn + 1.0L);
  return from_log(lv, "total-asymptotic");
}

BigInt z_count(const std::vector<int>& parts) {
  std::vector<BigInt> poly{1};
  long total = 0;
  for (int p : parts) {
    if (p < 0) throw Error(ErrorKind::InvalidParams, "z_count parts must be >= 0, got " + std::to_string(p));
    const std::size_t width = 2 * static_cast<std::size_t>(p) + 1;
    std::vector<BigInt> next(poly.size() + width - 1, 0);
    // Multiplying by 1 + x + ... + x^{2p} is a sliding-window sum.
    BigInt window = 0;
    for (std::size_t d = 0; d < next.size(); ++d) {
      if (d < poly.size()) window += poly[d];
      if (d >= width && d - width < poly.size()) window -= poly[d - width];
      next[d] = window;
    }
    poly = std::move(next);
    total += p;
  }
  return poly[static_cast<std::size_t>(total)];
}

BigInt z_andre(int k, int n) {
  require_positive(k, "k");
  if (n < 0) throw Error(ErrorKind::InvalidParams, "n must be >= 0");
  // k * (k+b-1)! / (j! (k-j)! b!) = C(k, j) * C(k+b-1, k-1) with b = kn - j(2n+1).
  BigInt total = 0;
  for (int j = 0; j <= k; ++j) {
    const long b = static_cast<long>(k) * n - static_cast<long>(j) * (2 * n + 1);
    if (b < 0) break;
    const BigInt term = binomial(k, j) * binomial(static_cast<int>(k + b - 1), k - 1);
    if (j % 2 == 0) total += term;
    else total -= term;
  }
  return total;
}

Rational z_star(int k) {
  require_positive(k, "k");
  BigInt sum = 0;
  for (int j = 0; 2 * j <= k; ++j) {
    const BigInt term = binomial(k, j) * ipow(BigInt(k - 2 * j), static_cast<unsigned>(k - 1));
    if (j % 2 == 0) sum += term;
    else sum -= term;
  }
  return Rational(sum, factorial(k - 1));
}

double z_limit_ratio(int k, int n) {
  require_positive(n, "n");
  const long double lv = log_of(z_andre(k, n)) - static_cast<long double>(k - 1) * std::log(static_cast<long double>(n));
  return static_cast<double>(std::exp(lv));
}

BigInt multinomial_sq_sum(int k, int n) {
  if (k < 0 || n < 0) throw Error(ErrorKind::InvalidParams, "multinomial_sq_sum needs k, N >= 0");
  // S_k(m) = sum_j C(m, j)^2 S_{k-1}(m - j).
  std::vector<BigInt> s(static_cast<std::size_t>(n) + 1, 0);
  s[0] = 1;
  for (int level = 1; level <= k; ++level) {
    std::vector<BigInt> next(s.size(), 0);
    for (int m = 0; m <= n; ++m) {
      for (int j = 0; j <= m; ++j) {
        const BigInt c = binomial(m, j);
        next[static_cast<std::size_t>(m)] += c * c * s[static_cast<std::size_t>(m - j)];
      }
    }
    s = std::move(next);
  }
  return s[static_cast<std::size_t>(n)];
}

AsymptoticEstimate asymptotic_rs(int k, int n) {
  if (k < 2) throw Error(ErrorKind::InvalidParams, "asymptotic_rs needs k >= 2");
  require_positive(n, "N");
  const long double kk = k, nn = n;
  const long double lv = (2.0L * nn + kk / 2.0L) * std::log(kk) + (1.0L - kk) / 2.0L * std::log(4.0L * kPi * nn);
  return from_log(lv, "richmond-shallit");
}

BigInt upper_bound_avoiders(int k, int n) {
  require_positive(k, "k");
  if (n < k) {
    throw Error(ErrorKind::SizeTooSmall,
                "upper_bound_avoiders needs N >= k (N = " + std::to_string(n) + ", k = " + std::to_string(k) + ")");
  }
  BigInt sum = 0;
  for_each_composition(n, k, 1, [&](const std::vector<int>& parts) {
    const BigInt m = multinomial(n, parts);
    sum += m * m * z_count(parts);
  });
  const BigInt kf = factorial(k);
  if (sum % kf != 0) throw std::logic_error("upper_bound_avoiders: k! does not divide the tuple count");
  return sum / kf;
}

AsymptoticEstimate asymptotic_avoiders(int k, int n) {
  require_positive(k, "k");
  require_positive(n, "N");
  const long double kk = k, nn = n;
  const Rational zs = z_star(k);
  const long double log_zs = log_of(numerator(zs)) - log_of(denominator(zs));
  const long double lv = 2.0L * nn * std::log(kk) + (kk - 1.0L) / 2.0L * std::log(nn / (4.0L * kPi)) + log_zs -
                         kk / 2.0L * std::log(kk) - std::lgamma(kk);
  return from_log(lv, "avoiders-asymptotic");
}

double a_m_constant(int m) {
  if (m < 2) throw Error(ErrorKind::InvalidParams, "a_m_constant needs m >= 2");
  BigInt sum = 0;
  for (int j = 0; 2 * j <= m - 1; ++j) {
    const BigInt term = binomial(m - 1, j) * ipow(BigInt(m - 2 * j - 1), static_cast<unsigned>(m - 2));
    if (j % 2 == 0) sum += term;
    else sum -= term;
  }
  const long double mm = m;
  const long double log_den = (mm - 2.0L) / 2.0L * std::log(4.0L * kPi) + (mm - 1.0L) / 2.0L * std::log(mm - 1.0L) +
                              2.0L * std::lgamma(mm - 1.0L);
  return static_cast<double>(std::exp(log_of(sum) - log_den));
}

TailBoundReport tail_bound_check(int k, int n, double alpha) {
  require_positive(k, "k");
  require_positive(n, "N");
  if (!(alpha > 0.0 && alpha < 1.0 / k)) {
    throw Error(ErrorKind::InvalidParams, "tail_bound_check needs 0 < alpha < 1/k, got " + std::to_string(alpha));
  }
  const BigInt count = binomial(n + k - 1, k - 1);
  if (count > 5000000) {
    throw Error(ErrorKind::CapExceeded, "tail_bound_check: " + to_string(count) + " compositions exceed 5e6");
  }
  const double threshold = static_cast<double>(k) * alpha * n;
  TailBoundReport report;
  for_each_composition(n, k, 0, [&](const std::vector<int>& parts) {
    const bool outside = std::any_of(parts.begin(), parts.end(), [&](int p) {
      return std::abs(static_cast<double>(k) * p - n) > threshold;
    });
    if (!outside) return;
    const BigInt m = multinomial(n, parts);
    report.lhs += m * m;
  });
  const long double log_rhs = std::log(4.0L) + (2.0L * n + 2.0L) * std::log(static_cast<long double>(k)) -
                              4.0L * n * static_cast<long double>(alpha) * alpha;
  report.rhs = std::exp(log_rhs);
  report.holds = report.lhs == 0 || log_of(report.lhs) <= log_rhs;
  return report;
}

std::vector<double> growth_rate_diagnostic(const OrdinaryPermutation& tau, const std::vector<int>& sizes) {
  for (int n : sizes) check_cap(n);
  std::vector<double> out;
  for (int n : sizes) {
    const BigInt c = brute_avoiders(n, tau);
    out.push_back(c == 0 ? 0.0 : static_cast<double>(std::exp(log_of(c) / n)));
  }
  return out;
}

void for_each_composition(int total, int k, int min_part,
                          const std::function<void(const std::vector<int>&)>& visit) {
  if (k <= 0) {
    if (total == 0 && k == 0) visit({});
    return;
  }
  std::vector<int> parts;
  parts.reserve(static_cast<std::size_t>(k));
  compositions(total, k, min_part, parts, visit);
}

}  // namespace affperm
