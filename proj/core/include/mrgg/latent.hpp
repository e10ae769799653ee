#pragma once

#include "mrgg/harmonics.hpp"
#include "mrgg/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

enum class LatitudeKind { uniform_null, beta_mixture, scaled_beta, custom };

/// Density on [-1, 1] of the jump inner product r_i = <X_{i-1}, X_i>.
class LatitudeDistribution {
 public:
  /// Law of <x, Y> for Y uniform on S^{d-1}: w_beta / ||w_beta||_1.
  static LatitudeDistribution uniform_null(int dimension);
  /// 1/2 g(1 - |r|; a, b), with g the Beta(a, b) density.
  static LatitudeDistribution beta_mixture(double a, double b);
  /// 1/2 g((r + 1) / 2; a, b).
  static LatitudeDistribution scaled_beta(double a, double b);
  static LatitudeDistribution custom(std::function<double(double)> pdf,
                                     std::function<double(Rng&)> sampler, std::string name,
                                     std::vector<double> breakpoints = {});

  [[nodiscard]] LatitudeKind kind() const { return kind_; }
  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }

  [[nodiscard]] double pdf(double r) const;
  double sample(Rng& rng) const;
  /// Integral of pdf over [-1, 1] by composite quadrature in the angle
  /// variable (robust to (1 - r^2)^k endpoint behaviour).
  [[nodiscard]] double total_mass() const;

 private:
  LatitudeKind kind_ = LatitudeKind::uniform_null;
  double a_ = 1.0;
  double b_ = 1.0;
  int dimension_ = 3;
  double log_norm_ = 0.0;
  std::string name_;
  std::vector<double> breakpoints_;
  std::function<double(double)> custom_pdf_;
  std::function<double(Rng&)> custom_sampler_;
};

double latitude_pdf(const LatitudeDistribution& lat, double r);

/// Ordered latent positions on S^{d-1} with the jumps that produced them.
struct LatentChain {
  Eigen::MatrixXd points;    ///< n x d, one unit vector per row
  std::vector<double> jumps; ///< r_2..r_n
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
  [[nodiscard]] int dimension() const { return static_cast<int>(points.cols()); }
};

/// Symmetric hollow 0/1 adjacency matrix, stored row-major.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n, double zeta = 1.0);
  /// Validates symmetry, zero diagonal and {0,1} entries.
  static Graph from_adjacency(std::size_t n, std::vector<std::uint8_t> adjacency,
                              double zeta = 1.0);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double zeta() const { return zeta_; }
  [[nodiscard]] bool edge(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
  void set_edge(std::size_t i, std::size_t j, bool present);
  [[nodiscard]] std::size_t edge_count() const;
  [[nodiscard]] std::size_t degree(std::size_t i) const;
  /// 2 |E| / (n (n - 1)).
  [[nodiscard]] double edge_density() const;
  [[nodiscard]] std::span<const std::uint8_t> adjacency() const { return adj_; }
  /// Graph with node labels permuted: new node k is old node perm[k].
  [[nodiscard]] Graph permuted(std::span<const std::size_t> perm) const;

 private:
  std::size_t n_ = 0;
  double zeta_ = 1.0;
  std::vector<std::uint8_t> adj_;
};

Eigen::VectorXd sample_uniform_sphere(int dimension, Rng& rng);
/// Uniform unit vector orthogonal to the unit vector x (projected Gaussian).
Eigen::VectorXd sample_uniform_orthogonal(const Eigen::VectorXd& x, Rng& rng);

LatentChain sample_chain(std::size_t n, int dimension, const LatitudeDistribution& lat,
                         std::uint64_t seed);

/// Independent Bernoulli(zeta * p(<X_i, X_j>)) edges for i < j.
Graph sample_graph(const LatentChain& chain, const Envelope& envelope, double zeta,
                   std::uint64_t seed);

/// log(n)^k / n, capped at 1.
double log_power_sparsity(std::size_t n, double k);

}  // namespace mrgg
