#pragma once

#include "mrgg/harmonics.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/spectral.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

/// Node of a complete-linkage dendrogram over real values.
///
/// On the real line every complete-linkage cluster is an interval of the
/// sorted values, so a node is stored as the range [begin, end) of
/// Dendrogram::order instead of an explicit member set.
struct DendrogramNode {
  std::size_t begin = 0;
  std::size_t end = 0;
  double height = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;

  [[nodiscard]] std::size_t leaf_count() const { return end - begin; }
  [[nodiscard]] bool is_leaf() const { return left < 0; }
};

struct Dendrogram {
  std::vector<DendrogramNode> nodes;  ///< leaves first (in sorted order), then merges
  std::vector<std::size_t> order;     ///< input indices sorted by value
  int root = -1;

  /// Input indices of the values under `node`.
  [[nodiscard]] std::span<const std::size_t> members(int node) const;
};

/// Complete-linkage agglomerative clustering of real values. Each step merges
/// the pair of active clusters at minimal complete-linkage distance; ties go to
/// the leftmost pair in sorted order.
Dendrogram hac_complete(std::span<const double> values);

/// Output of the size-constrained clustering: clusters[k] holds d_k
/// eigenvalues (largest magnitude first); leftover holds the rest of the
/// spectrum in magnitude order.
struct ClusterAssignment {
  int dimension = 3;
  int resolution = 0;
  std::vector<std::vector<double>> clusters;
  std::vector<double> leftover;
  int rebuilds = 0;  ///< number of HAC trees built

  [[nodiscard]] std::vector<double> cluster_means() const;
};

/// Size Constrained Clustering for Harmonic Eigenvalues. `values` must be
/// sorted by decreasing magnitude.
ClusterAssignment scchei(std::span<const double> values, int dimension, int resolution);
ClusterAssignment scchei(const Spectrum& spectrum, int dimension, int resolution);

/// Thresholded intra-class variance of an assignment for a graph of n nodes.
double intra_class_variance(const ClusterAssignment& assignment, std::size_t n);

/// `points` log-spaced values over [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t points);
/// 81 log-spaced points over [1e-5, 1e-1].
std::vector<double> default_kappa_grid();

struct ResolutionSelection {
  int r_hat = 0;
  double kappa0 = 0.0;
  int r_max = 0;
  std::vector<double> intra_class_variance;  ///< I_R for R = 0..r_max
  std::vector<double> kappa_grid;
  std::vector<int> r_of_kappa;
  std::vector<ClusterAssignment> assignments;  ///< per R, empty if built from a table
  std::vector<std::string> warnings;
};

/// Smallest argmin over R of I_R + kappa * R~ / n.
int penalized_resolution(std::span<const double> intra_class_variance, int dimension,
                         std::size_t n, double kappa);

/// Slope heuristic on a precomputed I_R table: kappa0 is the first grid point
/// after the largest drop of kappa -> R~(R(kappa)); the result is R(2 kappa0).
ResolutionSelection slope_heuristic(std::vector<double> intra_class_variance, int dimension,
                                    std::size_t n, std::span<const double> kappa_grid);

/// Runs SCCHEi for R = 0..R_max (R~ <= n) and applies the slope heuristic.
/// `values` sorted by decreasing magnitude.
ResolutionSelection select_resolution(std::span<const double> values, int dimension, std::size_t n,
                                      std::span<const double> kappa_grid, unsigned jobs = 1);

struct EnvelopeEstimate {
  int dimension = 3;
  int r_hat = 0;
  double kappa0 = 0.0;
  double zeta = 1.0;
  std::vector<double> p_hat;  ///< cluster means for k = 0..r_hat
  std::vector<double> intra_class_variance;
  std::vector<double> kappa_grid;
  std::vector<int> r_of_kappa;
  ClusterAssignment assignment;
  std::vector<std::string> warnings;

  [[nodiscard]] EnvelopeSpectrum spectrum() const;
  /// Reconstructed envelope clamped to [0, 1].
  [[nodiscard]] Envelope envelope() const;
};

/// Eigenvalues (any order) -> magnitude order -> divide by zeta -> slope
/// heuristic -> cluster means.
EnvelopeEstimate estimate_envelope_from_spectrum(const Spectrum& spectrum, std::size_t n,
                                                 int dimension, double zeta,
                                                 std::span<const double> kappa_grid,
                                                 unsigned jobs = 1);

EnvelopeEstimate estimate_envelope(const Graph& graph, int dimension, double zeta,
                                   std::span<const double> kappa_grid, unsigned jobs = 1);

}  // namespace mrgg
