#include "affperm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "affperm/counting.hpp"
#include "affperm/error.hpp"
#include "affperm/sampling.hpp"

namespace affperm {

namespace {

constexpr double kSlack = 1e-12;

Matrix ground_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Matrix c(mu.size(), nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) c(i, j) = distance(mu.atoms()[i], nu.atoms()[j]);
  return c;
}

}  // namespace

bool in_diamond(const DiamondPoint& p) noexcept {
  return p.x >= -kSlack && p.x <= 1.0 + kSlack && std::abs(p.y - p.x) <= 1.0 + kSlack;
}

double distance(const DiamondPoint& a, const DiamondPoint& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

DiscreteMeasure::DiscreteMeasure(std::vector<DiamondPoint> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty()) throw Error(ErrorKind::InvalidMeasure, "measure has no atoms");
  if (atoms_.size() != weights_.size()) {
    throw Error(ErrorKind::InvalidMeasure, std::to_string(atoms_.size()) + " atoms but " +
                                               std::to_string(weights_.size()) + " weights");
  }
  double total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(weights_[i] > 0)) throw Error(ErrorKind::InvalidMeasure, "weight " + std::to_string(i) + " is not positive");
    if (!in_diamond(atoms_[i])) {
      throw Error(ErrorKind::InvalidMeasure, "atom (" + std::to_string(atoms_[i].x) + ", " +
                                                 std::to_string(atoms_[i].y) + ") lies outside the diamond");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidMeasure, "weights sum to " + std::to_string(total) + ", expected 1");
  }
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<DiamondPoint> atoms) {
  const std::size_t n = atoms.size();
  return DiscreteMeasure(std::move(atoms), std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0));
}

DiscreteMeasure DiscreteMeasure::dirac(DiamondPoint p) { return DiscreteMeasure({p}, {1.0}); }

bool DiscreteMeasure::has_uniform_weights() const noexcept {
  const double w = 1.0 / static_cast<double>(weights_.size());
  return std::all_of(weights_.begin(), weights_.end(), [&](double x) { return std::abs(x - w) <= 1e-15; });
}

DiscreteMeasure mixture(const std::vector<double>& coefficients, const std::vector<DiscreteMeasure>& parts) {
  if (coefficients.size() != parts.size()) throw Error(ErrorKind::InvalidMeasure, "mixture: coefficient count mismatch");
  std::vector<DiamondPoint> atoms;
  std::vector<double> weights;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (coefficients[p] < 0) throw Error(ErrorKind::InvalidMeasure, "mixture: negative coefficient");
    if (coefficients[p] == 0) continue;
    for (std::size_t a = 0; a < parts[p].size(); ++a) {
      atoms.push_back(parts[p].atoms()[a]);
      weights.push_back(coefficients[p] * parts[p].weights()[a]);
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

SlopeOneMixture::SlopeOneMixture(std::vector<double> intercepts) : intercepts_(std::move(intercepts)) {
  if (intercepts_.empty()) throw Error(ErrorKind::InvalidMeasure, "mixture needs at least one intercept");
  for (double z : intercepts_) {
    if (!(std::abs(z) <= 1.0)) throw Error(ErrorKind::InvalidMeasure, "intercept " + std::to_string(z) + " outside [-1, 1]");
  }
}

bool SlopeOneMixture::in_q0(double tol) const noexcept {
  return std::abs(std::accumulate(intercepts_.begin(), intercepts_.end(), 0.0)) <= tol;
}

DiscreteMeasure empirical_measure(const AffinePermutation& sigma) {
  if (!sigma.is_bounded()) {
    throw Error(ErrorKind::UnboundedInput, "empirical_measure requires a bounded permutation; got " + sigma.to_string());
  }
  const int n = sigma.size();
  std::vector<DiamondPoint> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) atoms.push_back({static_cast<double>(i) / n, static_cast<double>(sigma.at(i)) / n});
  return DiscreteMeasure::uniform(std::move(atoms));
}

DiscreteMeasure discretize(const SlopeOneMixture& m, int segments) {
  if (segments < 1) throw Error(ErrorKind::InvalidParams, "segments must be >= 1");
  std::vector<DiamondPoint> atoms;
  for (double z : m.intercepts()) {
    for (int j = 1; j <= segments; ++j) {
      const double x = (j - 0.5) / segments;
      atoms.push_back({x, x + z});
    }
  }
  return DiscreteMeasure::uniform(std::move(atoms));
}

Wass1Result wass1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const Matrix cost = ground_cost(mu, nu);
  Wass1Result r;
  if (mu.size() == nu.size() && mu.has_uniform_weights() && nu.has_uniform_weights()) {
    const AssignmentResult a = solve_assignment(cost);
    const std::size_t n = mu.size();
    r.plan.flow = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      r.plan.flow(i, static_cast<std::size_t>(a.column_of_row[i])) = mu.weights()[i];
    r.certificate = certify(mu.weights(), nu.weights(), cost, r.plan.flow, a.row_potential, a.col_potential);
  } else {
    const TransportResult t = solve_transport(mu.weights(), nu.weights(), cost);
    r.plan.flow = t.flow;
    r.certificate = certify(mu.weights(), nu.weights(), cost, t.flow, t.supply_potential, t.demand_potential);
  }
  r.distance = r.certificate.primal;
  return r;
}

SlopeOneMixture sample_q0(int k, Rng& rng) {
  if (k < 1) throw Error(ErrorKind::InvalidParams, "k must be >= 1");
  std::vector<double> z(static_cast<std::size_t>(k), 0.0);
  if (k == 1) return SlopeOneMixture(z);
  for (;;) {
    double sum = 0;
    for (int i = 0; i + 1 < k; ++i) {
      z[static_cast<std::size_t>(i)] = uniform_real(rng, -1.0, 1.0);
      sum += z[static_cast<std::size_t>(i)];
    }
    if (std::abs(sum) <= 1.0) {
      z.back() = -sum;
      return SlopeOneMixture(z);
    }
  }
}

double wass1_to_mixture(const DiscreteMeasure& mu, const SlopeOneMixture& m, int segments) {
  return wass1(mu, discretize(m, segments)).distance;
}

double wass2_between(const std::vector<AffinePermutation>& perms, const std::vector<SlopeOneMixture>& lines,
                     int segments, int workers) {
  if (perms.empty() || perms.size() != lines.size()) {
    throw Error(ErrorKind::InvalidParams, "wass2_between needs equally many (>= 1) permutations and mixtures");
  }
  const std::size_t s = perms.size();
  std::vector<DiscreteMeasure> mus;
  std::vector<DiscreteMeasure> nus;
  for (const auto& p : perms) mus.push_back(empirical_measure(p));
  for (const auto& l : lines) nus.push_back(discretize(l, segments));
  Matrix cost(s, s);
  auto fill_rows = [&](std::size_t w, std::size_t stride) {
    for (std::size_t i = w; i < s; i += stride)
      for (std::size_t j = 0; j < s; ++j) cost(i, j) = wass1(mus[i], nus[j]).distance;
  };
  const std::size_t nw = static_cast<std::size_t>(std::clamp(workers, 1, static_cast<int>(s)));
  if (nw == 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < nw; ++w) threads.emplace_back(fill_rows, w, nw);
    for (auto& t : threads) t.join();
  }
  return solve_assignment(cost).cost / static_cast<double>(s);
}

Wass2Estimate wass2_estimate(int k, int n, int samples, SamplerChoice sampler, int segments, std::uint64_t seed,
                             int workers) {
  if (samples < 1) throw Error(ErrorKind::InvalidParams, "samples must be >= 1");
  if (k < 1 || n < 1) throw Error(ErrorKind::InvalidParams, "k and N must be >= 1");
  const OrdinaryPermutation tau = OrdinaryPermutation::decreasing(k + 1);
  const bool exact = sampler == SamplerChoice::Exact || (sampler == SamplerChoice::Auto && n <= brute_force_cap());
  Rng rng(seed);
  std::vector<AffinePermutation> perms;
  if (exact) {
    for (int s = 0; s < samples; ++s) perms.push_back(sample_exact(n, tau, rng));
  } else {
    perms = mcmc_sample(n, tau, McmcConfig::defaults(n, samples, rng()));
  }
  std::vector<SlopeOneMixture> lines;
  for (int s = 0; s < samples; ++s) lines.push_back(sample_q0(k, rng));
  return Wass2Estimate{wass2_between(perms, lines, segments, workers), exact};
}

}  // namespace affperm
