#include "mrgg/latent.hpp"

#include "mrgg/error.hpp"
#include "mrgg/quadrature.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mrgg {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_density(double x, double a, double b) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if ((x == 0.0 && a < 1.0) || (x == 1.0 && b < 1.0)) return std::numeric_limits<double>::infinity();
  return boost::math::ibeta_derivative(a, b, x);
}

void require_beta_params(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw InputError(fmt::format("beta parameters must be positive, got ({}, {})", a, b));
}

}  // namespace

LatitudeDistribution LatitudeDistribution::uniform_null(int dimension) {
  if (dimension < 3) throw InputError("dimension must be >= 3");
  LatitudeDistribution lat;
  lat.kind_ = LatitudeKind::uniform_null;
  lat.dimension_ = dimension;
  lat.a_ = lat.b_ = 0.5 * (dimension - 1);
  // ||w_beta||_1 = B(1/2, (d-1)/2)
  lat.log_norm_ = log_beta(0.5, 0.5 * (dimension - 1));
  lat.name_ = fmt::format("uniform-null(d={})", dimension);
  return lat;
}

LatitudeDistribution LatitudeDistribution::beta_mixture(double a, double b) {
  require_beta_params(a, b);
  LatitudeDistribution lat;
  lat.kind_ = LatitudeKind::beta_mixture;
  lat.a_ = a;
  lat.b_ = b;
  lat.breakpoints_ = {0.0};
  lat.name_ = fmt::format("beta-mixture({}, {})", a, b);
  return lat;
}

LatitudeDistribution LatitudeDistribution::scaled_beta(double a, double b) {
  require_beta_params(a, b);
  LatitudeDistribution lat;
  lat.kind_ = LatitudeKind::scaled_beta;
  lat.a_ = a;
  lat.b_ = b;
  lat.name_ = fmt::format("scaled-beta({}, {})", a, b);
  return lat;
}

LatitudeDistribution LatitudeDistribution::custom(std::function<double(double)> pdf,
                                                  std::function<double(Rng&)> sampler,
                                                  std::string name,
                                                  std::vector<double> breakpoints) {
  if (!pdf || !sampler) throw InputError("custom latitude needs both a pdf and a sampler");
  LatitudeDistribution lat;
  lat.kind_ = LatitudeKind::custom;
  lat.custom_pdf_ = std::move(pdf);
  lat.custom_sampler_ = std::move(sampler);
  lat.name_ = std::move(name);
  lat.breakpoints_ = std::move(breakpoints);
  return lat;
}

double LatitudeDistribution::pdf(double r) const {
  if (r < -1.0 || r > 1.0) return 0.0;
  switch (kind_) {
    case LatitudeKind::uniform_null: {
      const double expo = 0.5 * (dimension_ - 3);
      const double base = std::max(0.0, 1.0 - r * r);
      const double w = expo == 0.0 ? 1.0 : std::pow(base, expo);
      return w * std::exp(-log_norm_);
    }
    case LatitudeKind::beta_mixture:
      return 0.5 * beta_density(1.0 - std::abs(r), a_, b_);
    case LatitudeKind::scaled_beta:
      return 0.5 * beta_density(0.5 * (r + 1.0), a_, b_);
    case LatitudeKind::custom:
      return custom_pdf_(r);
  }
  return 0.0;
}

double LatitudeDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case LatitudeKind::uniform_null:
    case LatitudeKind::scaled_beta:
      return 2.0 * rng.beta(a_, b_) - 1.0;
    case LatitudeKind::beta_mixture: {
      const double x = rng.beta(a_, b_);
      return rng.bernoulli(0.5) ? 1.0 - x : x - 1.0;
    }
    case LatitudeKind::custom:
      return std::clamp(custom_sampler_(rng), -1.0, 1.0);
  }
  return 0.0;
}

double LatitudeDistribution::total_mass() const {
  // r = cos(theta); split at the images of the breakpoints
  std::vector<double> cuts;
  for (double bp : breakpoints_)
    if (bp > -1.0 && bp < 1.0) cuts.push_back(std::acos(bp));
  const auto rule = composite_gauss_legendre(256, cuts, 0.0, std::numbers::pi);
  double mass = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    mass += rule.weights[q] * pdf(std::cos(rule.nodes[q])) * std::sin(rule.nodes[q]);
  return mass;
}

double latitude_pdf(const LatitudeDistribution& lat, double r) {
  if (r < -1.0 || r > 1.0) throw InputError("latitude argument must lie in [-1, 1]");
  return lat.pdf(r);
}

Graph::Graph(std::size_t n, double zeta) : n_(n), zeta_(zeta), adj_(n * n, 0) {
  if (!(zeta > 0.0) || zeta > 1.0) throw InputError("sparsity factor must lie in (0, 1]");
}

Graph Graph::from_adjacency(std::size_t n, std::vector<std::uint8_t> adjacency, double zeta) {
  if (adjacency.size() != n * n) throw InputError("adjacency size does not match node count");
  Graph g(n, zeta);
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i * n + i] != 0) throw InputError("adjacency diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = adjacency[i * n + j];
      if (v > 1) throw InputError("adjacency entries must be 0 or 1");
      if (v != adjacency[j * n + i]) throw InputError("adjacency must be symmetric");
    }
  }
  g.adj_ = std::move(adjacency);
  return g;
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  if (i == j) throw InputError("self loops are not allowed");
  adj_[i * n_ + j] = adj_[j * n_ + i] = present ? 1 : 0;
}

std::size_t Graph::edge_count() const {
  std::size_t total = 0;
  for (auto v : adj_) total += v;
  return total / 2;
}

std::size_t Graph::degree(std::size_t i) const {
  std::size_t total = 0;
  for (std::size_t j = 0; j < n_; ++j) total += adj_[i * n_ + j];
  return total;
}

double Graph::edge_density() const {
  if (n_ < 2) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) / (static_cast<double>(n_) * (n_ - 1.0));
}

Graph Graph::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != n_) throw InputError("permutation size does not match node count");
  Graph g(n_, zeta_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) g.adj_[i * n_ + j] = adj_[perm[i] * n_ + perm[j]];
  return g;
}

Eigen::VectorXd sample_uniform_sphere(int dimension, Rng& rng) {
  Eigen::VectorXd v(dimension);
  double norm = 0.0;
  do {
    for (int k = 0; k < dimension; ++k) v(k) = rng.normal();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Eigen::VectorXd sample_uniform_orthogonal(const Eigen::VectorXd& x, Rng& rng) {
  if (std::abs(x.norm() - 1.0) > 1e-9) throw InputError("base point must be a unit vector");
  Eigen::VectorXd y(x.size());
  double norm = 0.0;
  do {
    for (Eigen::Index k = 0; k < x.size(); ++k) y(k) = rng.normal();
    y -= y.dot(x) * x;
    norm = y.norm();
  } while (norm < 1e-12);
  y /= norm;
  // one more projection pass keeps <x, y> at rounding level
  y -= y.dot(x) * x;
  return y / y.norm();
}

LatentChain sample_chain(std::size_t n, int dimension, const LatitudeDistribution& lat,
                         std::uint64_t seed) {
  if (n < 1) throw InputError("chain needs at least one point");
  if (dimension < 3) throw InputError("dimension must be >= 3");
  Rng rng(seed);
  LatentChain chain;
  chain.seed = seed;
  chain.points.resize(static_cast<Eigen::Index>(n), dimension);
  Eigen::VectorXd x = sample_uniform_sphere(dimension, rng);
  chain.points.row(0) = x.transpose();
  chain.jumps.reserve(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double r = std::clamp(lat.sample(rng), -1.0, 1.0);
    const Eigen::VectorXd y = sample_uniform_orthogonal(x, rng);
    Eigen::VectorXd next = r * x + std::sqrt(std::max(0.0, 1.0 - r * r)) * y;
    next /= next.norm();
    chain.points.row(static_cast<Eigen::Index>(i)) = next.transpose();
    chain.jumps.push_back(r);
    x = std::move(next);
  }
  return chain;
}

Graph sample_graph(const LatentChain& chain, const Envelope& envelope, double zeta,
                   std::uint64_t seed) {
  const std::size_t n = chain.size();
  Graph g(n, zeta);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = chain.points.row(static_cast<Eigen::Index>(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const double t = std::clamp(xi.dot(chain.points.row(static_cast<Eigen::Index>(j))), -1.0, 1.0);
      const double p = envelope(t);
      if (!(p >= 0.0 && p <= 1.0))
        throw InputError(fmt::format("envelope value {} at t = {} is outside [0, 1]", p, t));
      if (rng.uniform() < zeta * p) g.set_edge(i, j, true);
    }
  }
  return g;
}

double log_power_sparsity(std::size_t n, double k) {
  if (n < 2) return 1.0;
  const auto nd = static_cast<double>(n);
  return std::min(1.0, std::pow(std::log(nd), k) / nd);
}

}  // namespace mrgg
