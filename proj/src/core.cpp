#include "affperm/core.hpp"

#include <limits>
#include <sstream>

#include "affperm/error.hpp"

namespace affperm {

namespace {

constexpr std::int64_t kWindowLimit = std::int64_t{1} << 60;

std::string join(const std::vector<int>& v, const char* sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? sep : "") << v[i];
  return os.str();
}

}  // namespace

OrdinaryPermutation::OrdinaryPermutation(std::vector<int> values) : values_(std::move(values)) {
  const int m = size();
  if (m == 0) throw Error(ErrorKind::NotAPermutation, "empty pattern");
  std::vector<bool> seen(static_cast<std::size_t>(m) + 1, false);
  for (int i = 0; i < m; ++i) {
    const int v = values_[static_cast<std::size_t>(i)];
    if (v < 1 || v > m || seen[static_cast<std::size_t>(v)]) {
      throw Error(ErrorKind::NotAPermutation,
                  "values must be a bijection on 1.." + std::to_string(m) + " (bad entry at position " +
                      std::to_string(i + 1) + ")");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

OrdinaryPermutation OrdinaryPermutation::parse(const std::string& text) {
  std::vector<int> values;
  if (text.find(',') != std::string::npos) {
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(ErrorKind::NotAPermutation, "cannot parse pattern entry '" + item + "'");
      }
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw Error(ErrorKind::NotAPermutation, "cannot parse pattern '" + text + "'");
      values.push_back(c - '0');
    }
  }
  return OrdinaryPermutation(std::move(values));
}

OrdinaryPermutation OrdinaryPermutation::identity(int m) {
  std::vector<int> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = i + 1;
  return OrdinaryPermutation(std::move(v));
}

OrdinaryPermutation OrdinaryPermutation::decreasing(int m) {
  std::vector<int> v(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = m - i;
  return OrdinaryPermutation(std::move(v));
}

bool OrdinaryPermutation::is_decreasing() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] != size() - static_cast<int>(i)) return false;
  return true;
}

std::string OrdinaryPermutation::to_string() const {
  return join(values_, size() > 9 ? "," : "");
}

AffinePermutation AffinePermutation::validate(std::span<const BigInt> window) {
  std::vector<std::int64_t> values;
  values.reserve(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (window[i] >= kWindowLimit || window[i] <= -kWindowLimit) {
      throw Error(ErrorKind::WindowOverflow,
                  "entry at index " + std::to_string(i + 1) + " exceeds the supported magnitude 2^60");
    }
    values.push_back(window[i].convert_to<std::int64_t>());
  }
  return validate(std::span<const std::int64_t>(values));
}

AffinePermutation AffinePermutation::validate(std::span<const std::int64_t> window) {
  if (window.empty()) throw Error(ErrorKind::EmptyWindow, "window must be non-empty");
  const auto n = static_cast<std::int64_t>(window.size());
  std::vector<int> owner(window.size(), 0);
  BigInt sum = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t v = window[static_cast<std::size_t>(i)];
    if (v >= kWindowLimit || v <= -kWindowLimit) {
      throw Error(ErrorKind::WindowOverflow,
                  "entry at index " + std::to_string(i + 1) + " exceeds the supported magnitude 2^60");
    }
    const auto r = static_cast<std::size_t>(((v % n) + n) % n);
    if (owner[r] != 0) {
      throw Error(ErrorKind::DuplicateResidue, "residue invariant violated: indices " + std::to_string(owner[r]) +
                                                   " and " + std::to_string(i + 1) + " are congruent mod " +
                                                   std::to_string(n));
    }
    owner[r] = static_cast<int>(i + 1);
    sum += v;
  }
  const BigInt expected = BigInt(n) * (n + 1) / 2;
  if (sum != expected) {
    throw Error(ErrorKind::BadSum, "centering invariant violated: sum over indices 1.." + std::to_string(n) +
                                       " is " + sum.str() + ", expected " + expected.str());
  }
  return AffinePermutation(std::vector<std::int64_t>(window.begin(), window.end()));
}

AffinePermutation AffinePermutation::identity(int size) {
  std::vector<std::int64_t> w(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) w[static_cast<std::size_t>(i)] = i + 1;
  return AffinePermutation(std::move(w));
}

BigInt AffinePermutation::evaluate(const BigInt& i) const {
  const BigInt n = size();
  BigInt shifted = i - 1;
  BigInt t = shifted / n;  // truncates toward zero
  if (shifted % n < 0) t -= 1;
  const BigInt r = shifted - t * n;
  return BigInt(window_[r.convert_to<std::size_t>()]) + t * n;
}

bool AffinePermutation::is_bounded() const noexcept {
  const std::int64_t n = size();
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t d = window_[static_cast<std::size_t>(i)] - (i + 1);
    if (d >= n || d <= -n) return false;
  }
  return true;
}

std::string AffinePermutation::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < window_.size(); ++i) os << (i ? "," : "") << window_[i];
  os << ']';
  return os.str();
}

AffinePermutation infinite_sum(const OrdinaryPermutation& pi) {
  std::vector<std::int64_t> w(pi.values().begin(), pi.values().end());
  return AffinePermutation::validate(std::span<const std::int64_t>(w));
}

bool is_bounded(const AffinePermutation& sigma) { return sigma.is_bounded(); }

BigInt evaluate(const AffinePermutation& sigma, const BigInt& i) { return sigma.evaluate(i); }

}  // namespace affperm
