#pragma once

// Probability measures on the parallelogram {0 <= x <= 1, |y - x| <= 1}:
// scaled empirical measures of bounded affine permutations, mixtures of
// uniform measures on slope-1 segments, and exact Wasserstein-1 distance.

#include <cstdint>
#include <optional>
#include <vector>

#include "affperm/core.hpp"
#include "affperm/random.hpp"
#include "affperm/transport.hpp"

namespace affperm {

struct DiamondPoint {
  double x = 0;
  double y = 0;
};

bool in_diamond(const DiamondPoint& p) noexcept;

/// sqrt(10): distance between (0,-1) and (1,2).
inline constexpr double kDiamondDiameter = 3.1622776601683795;

double distance(const DiamondPoint& a, const DiamondPoint& b) noexcept;

class DiscreteMeasure {
 public:
  /// Throws Error(InvalidMeasure) on length mismatch, non-positive weights,
  /// weights not summing to 1 within 1e-12, or atoms outside the diamond.
  DiscreteMeasure(std::vector<DiamondPoint> atoms, std::vector<double> weights);

  static DiscreteMeasure uniform(std::vector<DiamondPoint> atoms);
  static DiscreteMeasure dirac(DiamondPoint p);

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<DiamondPoint>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  bool has_uniform_weights() const noexcept;

 private:
  std::vector<DiamondPoint> atoms_;
  std::vector<double> weights_;
};

/// sum_i a_i nu_i with the atoms concatenated.
DiscreteMeasure mixture(const std::vector<double>& coefficients, const std::vector<DiscreteMeasure>& parts);

/// lambda<z>: uniform over k slope-1 segments from (0, z_i) to (1, 1 + z_i).
class SlopeOneMixture {
 public:
  /// Throws Error(InvalidMeasure) if some |z_i| > 1 or z is empty.
  explicit SlopeOneMixture(std::vector<double> intercepts);

  int k() const noexcept { return static_cast<int>(intercepts_.size()); }
  const std::vector<double>& intercepts() const noexcept { return intercepts_; }
  /// Membership in Q_0: intercepts sum to zero.
  bool in_q0(double tol = 1e-12) const noexcept;

 private:
  std::vector<double> intercepts_;
};

struct TransportPlan {
  Matrix flow;
};

struct Wass1Result {
  double distance = 0;
  TransportPlan plan;
  Certificate certificate;
};

/// Atoms (i/N, sigma(i)/N), weight 1/N. Throws UnboundedInput.
DiscreteMeasure empirical_measure(const AffinePermutation& sigma);

/// M midpoint atoms per segment, weight 1/(kM) each.
DiscreteMeasure discretize(const SlopeOneMixture& m, int segments);

/// Exact Wasserstein-1 distance with Euclidean ground cost.
Wass1Result wass1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Intercepts uniform on Q_0 by rejection from [-1,1]^(k-1).
SlopeOneMixture sample_q0(int k, Rng& rng);

/// wass1(mu, discretize(m, M)); additive error at most sqrt(2)/(2M).
double wass1_to_mixture(const DiscreteMeasure& mu, const SlopeOneMixture& m, int segments);

enum class SamplerChoice { Auto, Exact, Mcmc };

struct Wass2Estimate {
  double value = 0;
  bool exact_sampler = false;
};

/// Plug-in estimate of Wass_2 between S random avoiders of (k+1)...1 and S
/// draws of lambda<beta>, beta uniform on Q_0: optimal assignment cost / S
/// over the S x S matrix of wass1_to_mixture values.
Wass2Estimate wass2_estimate(int k, int n, int samples, SamplerChoice sampler, int segments,
                             std::uint64_t seed, int workers = 1);

/// Lower-level form used by wass2_estimate, with samples fixed by the caller.
double wass2_between(const std::vector<AffinePermutation>& perms, const std::vector<SlopeOneMixture>& lines,
                     int segments, int workers = 1);

}  // namespace affperm
