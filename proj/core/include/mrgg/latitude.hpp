#pragma once

#include "mrgg/rng.hpp"
#include "mrgg/spectral.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

/// Literal Gap_1 of the window [start, start + d) of a sorted list: minimum
/// over outside entries of the maximum distance to the window.
double gap1(std::span<const double> values, std::size_t start, int d);

/// Isolation of the window [start, start + d): minimum over outside entries
/// of the minimum distance to the window. This is the score HEiC maximizes.
double isolation_gap(std::span<const double> values, std::size_t start, int d);

struct GramEstimate {
  Eigen::MatrixXd gram;           ///< V V^T / d
  Eigen::MatrixXd vectors;        ///< n x d selected eigenvectors
  std::vector<double> eigenvalues;///< selected values, decreasing
  std::size_t window_start = 0;   ///< position in the value-sorted spectrum
  double gap = 0.0;
  std::vector<std::string> warnings;
};

/// Harmonic EigenCluster: slides a window of d consecutive eigenvalues (signed
/// value order) and keeps the most isolated one. Needs eigenvectors.
GramEstimate heic(const Spectrum& spectrum, int dimension);

/// X X^T / n for latent points stored as rows.
Eigen::MatrixXd gram_from_points(const Eigen::MatrixXd& points);

/// (n G)_{i-1,i} for i = 1..n-1, clamped to [-1, 1].
std::vector<double> extract_distances(const Eigen::MatrixXd& gram);
std::vector<double> extract_distances(const GramEstimate& gram);

/// Gaussian kernel density estimate restricted to [-1, 1]; each kernel is
/// renormalized by its mass inside the interval.
class LatitudeDensity {
 public:
  static constexpr double kMinBandwidth = 1e-3;
  static constexpr std::size_t kSamplingGrid = 2048;

  LatitudeDensity(std::vector<double> samples, double bandwidth);

  [[nodiscard]] const std::vector<double>& samples() const { return samples_; }
  [[nodiscard]] double bandwidth() const { return bandwidth_; }

  [[nodiscard]] double pdf(double r) const;
  [[nodiscard]] double cdf(double r) const;
  /// `count` draws by inverse CDF on a tabulation of kSamplingGrid points.
  std::vector<double> sample(Rng& rng, std::size_t count) const;
  /// Equispaced grid over [-1, 1] with the density values.
  [[nodiscard]] std::pair<std::vector<double>, std::vector<double>> tabulate(std::size_t points) const;

 private:
  std::vector<double> samples_;
  std::vector<double> inv_mass_;
  double bandwidth_ = 0.0;
};

/// 0.9 min(sd, IQR / 1.34) m^{-1/5}; when one spread measure is zero the
/// other is used. Returns 0 for a degenerate sample.
double silverman_bandwidth(std::span<const double> samples);

struct LatitudeFit {
  LatitudeDensity density;
  std::vector<std::string> warnings;
};

/// Bandwidth <= 0 selects Silverman's rule, floored at kMinBandwidth.
LatitudeFit fit_latitude(std::vector<double> distances, double bandwidth = 0.0);

}  // namespace mrgg
