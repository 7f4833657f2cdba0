#include "affperm/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "affperm/counting.hpp"
#include "affperm/error.hpp"
#include "affperm/patterns.hpp"

namespace affperm {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t residue(std::int64_t v, std::int64_t size) { return v - floor_div(v - 1, size) * size; }

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string join(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

void check_partition(const std::vector<std::vector<int>>& blocks, const std::vector<int>& n, int size,
                     const char* name) {
  if (blocks.size() != n.size()) {
    throw Error(ErrorKind::InvalidTuple, std::string(name) + " has " + std::to_string(blocks.size()) +
                                             " blocks, expected k = " + std::to_string(n.size()));
  }
  std::vector<bool> seen(static_cast<std::size_t>(size) + 1, false);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (static_cast<int>(b.size()) != n[i]) {
      throw Error(ErrorKind::InvalidTuple, std::string(name) + "_" + std::to_string(i + 1) + " has " +
                                               std::to_string(b.size()) + " elements, expected n_" +
                                               std::to_string(i + 1) + " = " + std::to_string(n[i]));
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] < 1 || b[j] > size) {
        throw Error(ErrorKind::InvalidTuple, std::string(name) + " element " + std::to_string(b[j]) +
                                                 " lies outside [1, " + std::to_string(size) + "]");
      }
      if (j > 0 && b[j] <= b[j - 1]) {
        throw Error(ErrorKind::InvalidTuple, std::string(name) + "_" + std::to_string(i + 1) +
                                                 " is not sorted strictly ascending: " + join(b));
      }
      if (seen[static_cast<std::size_t>(b[j])]) {
        throw Error(ErrorKind::InvalidTuple,
                    std::string(name) + " is not a partition: " + std::to_string(b[j]) + " appears twice");
      }
      seen[static_cast<std::size_t>(b[j])] = true;
    }
  }
}

// Completes a tuple from blocks G by reading the values of sigma on them.
DecompTuple tuple_from_blocks(const AffinePermutation& sigma, std::vector<std::vector<int>> blocks) {
  const std::int64_t size = sigma.size();
  DecompTuple t;
  for (auto& g : blocks) {
    std::sort(g.begin(), g.end());
    const int ni = static_cast<int>(g.size());
    std::vector<int> h;
    for (int x : g) h.push_back(static_cast<int>(residue(sigma.at(x), size)));
    std::sort(h.begin(), h.end());
    // sigma(g_{i,1}) = r + tN with r = h_{i,p}: it equals h_{i, p + t n_i}.
    const std::int64_t v = sigma.at(g.front());
    const std::int64_t tshift = floor_div(v - 1, size);
    const int r = static_cast<int>(v - tshift * size);
    const auto pos = std::lower_bound(h.begin(), h.end(), r) - h.begin();
    const std::int64_t d = pos + tshift * ni;
    t.n.push_back(ni);
    t.G.push_back(std::move(g));
    t.H.push_back(std::move(h));
    t.delta.push_back(static_cast<int>(d));
  }
  return t;
}

double separation_threshold(int k, const DomParams& p) { return 4.0 * (2.0 * p.A + 2.0 * k / (1.0 - k * p.alpha)); }

void w_rec(const std::vector<int>& n, const DomParams& p, std::size_t i, int sum, std::vector<int>& cur,
           std::vector<std::vector<int>>& out) {
  const std::size_t k = n.size();
  if (i + 1 == k) {
    const int last = -sum;
    if (!(std::abs(last) < n[i] - p.B)) return;
    cur.push_back(last);
    if (delta_separated(n, cur, p)) out.push_back(cur);
    cur.pop_back();
    return;
  }
  const int lim = static_cast<int>(std::ceil(n[i] - p.B)) - 1;
  for (int d = -lim; d <= lim; ++d) {
    if (!(std::abs(d) < n[i] - p.B)) continue;
    cur.push_back(d);
    w_rec(n, p, i + 1, sum + d, cur, out);
    cur.pop_back();
  }
}

struct ShapeData {
  std::vector<int> n;
  std::vector<std::vector<int>> deltas;
};

std::vector<ShapeData> dom_shapes(int k, int size, const DomParams& p) {
  std::vector<ShapeData> shapes;
  for_each_composition(size, k, 1, [&](const std::vector<int>& n) {
    if (!in_n_alpha(n, p.alpha)) return;
    auto w = enumerate_W(n, p);
    if (!w.empty()) shapes.push_back(ShapeData{n, std::move(w)});
  });
  return shapes;
}

}  // namespace

int DecompTuple::size() const noexcept { return std::accumulate(n.begin(), n.end(), 0); }

void validate_tuple(const DecompTuple& t) {
  const std::size_t k = t.n.size();
  if (k == 0) throw Error(ErrorKind::InvalidTuple, "k must be >= 1");
  for (std::size_t i = 0; i < k; ++i) {
    if (t.n[i] < 1) {
      throw Error(ErrorKind::InvalidTuple, "n_" + std::to_string(i + 1) + " = " + std::to_string(t.n[i]) + " is not positive");
    }
  }
  const int size = t.size();
  check_partition(t.G, t.n, size, "G");
  check_partition(t.H, t.n, size, "H");
  if (t.delta.size() != k) {
    throw Error(ErrorKind::InvalidTuple, "delta has " + std::to_string(t.delta.size()) + " entries, expected " + std::to_string(k));
  }
  long sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (std::abs(t.delta[i]) > t.n[i]) {
      throw Error(ErrorKind::InvalidTuple, "|Delta_" + std::to_string(i + 1) + "| = " + std::to_string(std::abs(t.delta[i])) +
                                               " exceeds n_" + std::to_string(i + 1) + " = " + std::to_string(t.n[i]));
    }
    sum += t.delta[i];
  }
  if (sum != 0) throw Error(ErrorKind::InvalidTuple, "sum of Delta is " + std::to_string(sum) + ", expected 0");
}

std::int64_t g_ext(const DecompTuple& t, int i, std::int64_t j) {
  const std::int64_t ni = t.n[static_cast<std::size_t>(i)];
  const std::int64_t q = floor_div(j - 1, ni);
  return t.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1 - q * ni)] + q * t.size();
}

std::int64_t h_ext(const DecompTuple& t, int i, std::int64_t j) {
  const std::int64_t ni = t.n[static_cast<std::size_t>(i)];
  const std::int64_t q = floor_div(j - 1, ni);
  return t.H[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1 - q * ni)] + q * t.size();
}

AffinePermutation psi(const DecompTuple& t) {
  validate_tuple(t);
  std::vector<std::int64_t> window(static_cast<std::size_t>(t.size()));
  for (int i = 0; i < t.k(); ++i) {
    for (int j = 1; j <= t.n[static_cast<std::size_t>(i)]; ++j) {
      const int g = t.G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
      window[static_cast<std::size_t>(g - 1)] = h_ext(t, i, j + t.delta[static_cast<std::size_t>(i)]);
    }
  }
  try {
    return AffinePermutation::validate(std::span<const std::int64_t>(window));
  } catch (const Error& e) {
    throw std::logic_error(std::string("psi produced an invalid window: ") + e.what());
  }
}

DecompTuple psi_inverse(const AffinePermutation& sigma, int k) {
  IncreasingPartition part = decompose_increasing(sigma, k);
  DecompTuple t = tuple_from_blocks(sigma, std::move(part.blocks));
  validate_tuple(t);
  return t;
}

DecompTuple relabel(const DecompTuple& t, const std::vector<int>& order) {
  DecompTuple r;
  for (int o : order) {
    const auto i = static_cast<std::size_t>(o);
    r.n.push_back(t.n.at(i));
    r.G.push_back(t.G.at(i));
    r.H.push_back(t.H.at(i));
    r.delta.push_back(t.delta.at(i));
  }
  return r;
}

DecompTuple canonical(const DecompTuple& t) {
  std::vector<int> order(t.n.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return t.G[static_cast<std::size_t>(a)].front() < t.G[static_cast<std::size_t>(b)].front();
  });
  return relabel(t, order);
}

bool equal_up_to_relabeling(const DecompTuple& a, const DecompTuple& b) {
  if (a.n.size() != b.n.size()) return false;
  for (const auto& g : a.G)
    if (g.empty()) return a == b;
  for (const auto& g : b.G)
    if (g.empty()) return a == b;
  return canonical(a) == canonical(b);
}

void validate_params(const DomParams& p, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidParams, "k must be >= 1");
  if (!(p.alpha > 0.0 && p.alpha < 1.0 / k)) {
    throw Error(ErrorKind::InvalidParams, "alpha must lie in (0, 1/k), got " + std::to_string(p.alpha));
  }
  if (!(p.A > 0.0)) throw Error(ErrorKind::InvalidParams, "A must be positive, got " + std::to_string(p.A));
  if (!(p.B > 0.0)) throw Error(ErrorKind::InvalidParams, "B must be positive, got " + std::to_string(p.B));
}

bool in_seq_star_A(const std::vector<int>& sorted_set, int n, double A) {
  const double w1 = static_cast<double>(sorted_set.size()) + 1.0;
  for (std::size_t l = 0; l < sorted_set.size(); ++l) {
    const double target = static_cast<double>(l + 1) * n / w1;
    if (!(std::abs(sorted_set[l] - target) < A)) return false;
  }
  return true;
}

bool in_n_alpha(const std::vector<int>& n, double alpha) {
  const double size = std::accumulate(n.begin(), n.end(), 0.0);
  const double k = static_cast<double>(n.size());
  // Compare k n_i - N against k alpha N, with slack for the decimal alpha.
  const double bound = k * alpha * size * (1.0 + 1e-12);
  return std::all_of(n.begin(), n.end(), [&](int ni) { return std::abs(k * ni - size) <= bound; });
}

bool delta_separated(const std::vector<int>& n, const std::vector<int>& delta, const DomParams& p) {
  const int k = static_cast<int>(n.size());
  const double size = std::accumulate(n.begin(), n.end(), 0.0);
  const double threshold = separation_threshold(k, p);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double a = delta[static_cast<std::size_t>(i)] * size / n[static_cast<std::size_t>(i)];
      const double b = delta[static_cast<std::size_t>(j)] * size / n[static_cast<std::size_t>(j)];
      if (!(std::abs(a - b) > threshold)) return false;
    }
  }
  return true;
}

double strip_half_width(int k, const DomParams& p) { return 2.0 * (p.A + k / (1.0 - k * p.alpha)); }

bool in_d1(const DecompTuple& t, const DomParams& p) {
  const int size = t.size();
  if (!in_n_alpha(t.n, p.alpha)) return false;
  for (int i = 0; i < t.k(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (!(std::abs(t.delta[ui]) < t.n[ui] - p.B)) return false;
    if (!in_seq_star_A(t.G[ui], size, p.A) || !in_seq_star_A(t.H[ui], size, p.A)) return false;
  }
  return true;
}

bool in_dom(const DecompTuple& t, const DomParams& p) { return in_d1(t, p) && delta_separated(t.n, t.delta, p); }

bool dom_images_bounded(int k, const DomParams& p) {
  return k * p.B / (1.0 + k * p.alpha) >= 2.0 * p.A + 2.0 * k / (1.0 - k * p.alpha);
}

std::vector<std::vector<int>> enumerate_W(const std::vector<int>& n, const DomParams& p, std::int64_t cap) {
  if (n.empty()) return {};
  const std::int64_t work = static_cast<std::int64_t>(n.size()) * *std::max_element(n.begin(), n.end());
  if (work > cap) {
    throw Error(ErrorKind::CapExceeded, "enumerate_W: k * max(n_i) = " + std::to_string(work) + " exceeds " + std::to_string(cap));
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  w_rec(n, p, 0, 0, cur, out);
  return out;
}

SpacedPartitionSampler::SpacedPartitionSampler(std::vector<int> n, double A) : n_(std::move(n)), A_(A) {
  size_ = std::accumulate(n_.begin(), n_.end(), 0);
  const std::size_t k = n_.size();
  stride_.assign(k, 1);
  std::size_t states = 1;
  for (std::size_t b = 0; b < k; ++b) {
    stride_[b] = states;
    states *= static_cast<std::size_t>(n_[b]) + 1;
  }
  ways_.assign(static_cast<std::size_t>(size_) + 1, std::vector<BigInt>(states, 0));
  std::vector<int> full(n_);
  ways_[static_cast<std::size_t>(size_)][state_index(full)] = 1;
  std::vector<int> filled(k, 0);
  for (int placed = size_ - 1; placed >= 0; --placed) {
    auto& row = ways_[static_cast<std::size_t>(placed)];
    const auto& next = ways_[static_cast<std::size_t>(placed) + 1];
    for (std::size_t s = 0; s < states; ++s) {
      int sum = 0;
      std::size_t rest = s;
      for (std::size_t b = 0; b < k; ++b) {
        filled[b] = static_cast<int>(rest % (static_cast<std::size_t>(n_[b]) + 1));
        rest /= static_cast<std::size_t>(n_[b]) + 1;
        sum += filled[b];
      }
      if (sum != placed) continue;
      BigInt total = 0;
      for (std::size_t b = 0; b < k; ++b) {
        if (filled[b] < n_[b] && admissible(static_cast<int>(b), filled[b] + 1, placed + 1))
          total += next[s + stride_[b]];
      }
      row[s] = std::move(total);
    }
  }
  total_ = ways_[0][0];
}

std::size_t SpacedPartitionSampler::state_index(const std::vector<int>& filled) const {
  std::size_t s = 0;
  for (std::size_t b = 0; b < filled.size(); ++b) s += static_cast<std::size_t>(filled[b]) * stride_[b];
  return s;
}

bool SpacedPartitionSampler::admissible(int block, int slot, int x) const {
  const double target = static_cast<double>(slot) * size_ / (n_[static_cast<std::size_t>(block)] + 1.0);
  return std::abs(x - target) < A_;
}

std::vector<std::vector<int>> SpacedPartitionSampler::sample(Rng& rng) const {
  if (total_ == 0) throw Error(ErrorKind::EmptyDomain, "no partition of [N] with every block in Seq*A");
  const std::size_t k = n_.size();
  std::vector<std::vector<int>> blocks(k);
  std::vector<int> filled(k, 0);
  std::size_t s = 0;
  for (int placed = 0; placed < size_; ++placed) {
    const auto& next = ways_[static_cast<std::size_t>(placed) + 1];
    BigInt r = uniform_below(rng, ways_[static_cast<std::size_t>(placed)][s]);
    for (std::size_t b = 0; b < k; ++b) {
      if (filled[b] >= n_[b] || !admissible(static_cast<int>(b), filled[b] + 1, placed + 1)) continue;
      const BigInt& w = next[s + stride_[b]];
      if (r < w) {
        blocks[b].push_back(placed + 1);
        ++filled[b];
        s += stride_[b];
        break;
      }
      r -= w;
    }
  }
  return blocks;
}

DomSampler::DomSampler(int k, int n, const DomParams& p) : k_(k), size_(n), params_(p) {
  validate_params(p, k);
  for (auto& sd : dom_shapes(k, n, p)) {
    SpacedPartitionSampler sp(sd.n, p.A);
    if (sp.count() == 0) continue;
    BigInt weight = sp.count() * sp.count() * BigInt(sd.deltas.size());
    total_ += weight;
    shapes_.push_back(Shape{std::move(sd.n), std::move(sp), std::move(sd.deltas), std::move(weight)});
  }
  if (total_ == 0) {
    throw Error(ErrorKind::EmptyDomain, "Dom(N=" + std::to_string(n) + ", alpha=" + format_param(p.alpha) +
                                            ", A=" + format_param(p.A) + ", B=" + format_param(p.B) +
                                            ") is empty for k = " + std::to_string(k));
  }
}

DecompTuple DomSampler::sample(Rng& rng) const {
  BigInt r = uniform_below(rng, total_);
  const Shape* shape = &shapes_.back();
  for (const auto& sh : shapes_) {
    if (r < sh.weight) {
      shape = &sh;
      break;
    }
    r -= sh.weight;
  }
  DecompTuple t;
  t.n = shape->n;
  t.G = shape->partitions.sample(rng);
  t.H = shape->partitions.sample(rng);
  t.delta = shape->deltas[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(shape->deltas.size()) - 1))];
  return t;
}

BigInt dom_size(int k, int n, const DomParams& p) {
  validate_params(p, k);
  BigInt total = 0;
  for (const auto& sd : dom_shapes(k, n, p)) {
    SpacedPartitionSampler sp(sd.n, p.A);
    total += sp.count() * sp.count() * BigInt(sd.deltas.size());
  }
  return total;
}

DecompTuple decode_by_strips(const AffinePermutation& sigma, int k) {
  const int size = sigma.size();
  if (size < k) {
    throw Error(ErrorKind::SizeTooSmall, "decode_by_strips needs N >= k (N = " + std::to_string(size) + ")");
  }
  std::vector<std::pair<std::int64_t, int>> offsets;
  for (int i = 1; i <= size; ++i) offsets.emplace_back(sigma.at(i) - i, i);
  std::sort(offsets.begin(), offsets.end());
  // Cut at the k - 1 widest gaps in y - x.
  std::vector<std::pair<std::int64_t, std::size_t>> gaps;
  for (std::size_t j = 1; j < offsets.size(); ++j) gaps.emplace_back(offsets[j].first - offsets[j - 1].first, j);
  std::sort(gaps.begin(), gaps.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::size_t> cuts;
  for (int c = 0; c < k - 1; ++c) cuts.push_back(gaps[static_cast<std::size_t>(c)].second);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(offsets.size());
  std::vector<std::vector<int>> blocks;
  std::size_t start = 0;
  for (std::size_t end : cuts) {
    std::vector<int> block;
    for (std::size_t j = start; j < end; ++j) block.push_back(offsets[j].second);
    blocks.push_back(std::move(block));
    start = end;
  }
  return canonical(tuple_from_blocks(sigma, std::move(blocks)));
}

KFactorialReport verify_k_factorial(int k, const DomParams& p, int n, int sample_size, std::uint64_t seed) {
  DomSampler sampler(k, n, p);
  Rng rng(seed);
  KFactorialReport report;
  report.passed = true;
  std::map<std::vector<std::int64_t>, DecompTuple> images;
  auto fail = [&](const std::string& why) {
    if (report.passed) report.detail = why;
    report.passed = false;
  };
  for (int s = 0; s < sample_size; ++s) {
    const DecompTuple t = sampler.sample(rng);
    ++report.samples;
    if (!in_dom(t, p)) {
      fail("sample " + std::to_string(s) + " is not in Dom");
      continue;
    }
    const AffinePermutation sigma = psi(t);
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    int preimages = 0;
    do {
      const DecompTuple r = relabel(t, order);
      if (psi(r) != sigma) fail("relabeling changes the image of sample " + std::to_string(s));
      if (in_dom(r, p)) ++preimages;
    } while (std::next_permutation(order.begin(), order.end()));
    const int expected = static_cast<int>(factorial(k));
    if (preimages != expected) {
      fail("sample " + std::to_string(s) + " has " + std::to_string(preimages) + " relabeled preimages in Dom, expected " +
           std::to_string(expected));
    }
    const DecompTuple canon = canonical(t);
    if (decode_by_strips(sigma, k) != canon) fail("strip decoding does not recover sample " + std::to_string(s));
    if (sigma.is_bounded() && max_rank(sigma) <= k && psi_inverse(sigma, k) != canon)
      fail("psi_inverse does not recover sample " + std::to_string(s) + " canonically");
    auto [it, inserted] = images.emplace(sigma.window(), canon);
    if (!inserted && it->second != canon)
      fail("two tuples with different block structure share the image " + sigma.to_string());
  }
  report.distinct_images = static_cast<int>(images.size());
  return report;
}

}  // namespace affperm
