#include "mrgg/harmonics.hpp"

#include "mrgg/error.hpp"
#include "mrgg/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mrgg {

namespace {

void require_dimension(int dimension) {
  if (dimension < 3) throw InputError(fmt::format("dimension must be >= 3, got {}", dimension));
}

// Exact C(n, k) with overflow detection.
std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // acc * (n - k + i) is divisible by i; cancel common factors first
    const std::int64_t g = std::gcd(acc, i);
    const std::int64_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(acc / g, factor, &acc))
      throw InputError("harmonic dimension overflows 64-bit integers");
  }
  return static_cast<std::int64_t>(acc);
}

}  // namespace

HarmonicIndex::HarmonicIndex(int degree, int dimension) : degree_(degree), dimension_(dimension) {
  require_dimension(dimension);
  if (degree < 0) throw InputError("harmonic degree must be nonnegative");
}

double HarmonicIndex::beta() const { return gegenbauer_beta(dimension_); }
std::int64_t HarmonicIndex::multiplicity() const { return harmonic_dim(degree_, dimension_); }
double HarmonicIndex::normalization() const {
  return gegenbauer_normalization(degree_, dimension_);
}

std::int64_t harmonic_dim(int degree, int dimension) {
  require_dimension(dimension);
  if (degree < 0) throw InputError("harmonic degree must be nonnegative");
  if (degree == 0) return 1;
  if (degree == 1) return dimension;
  const std::int64_t l = degree;
  const std::int64_t d = dimension;
  return binomial(l + d - 1, l) - binomial(l + d - 3, l - 2);
}

std::int64_t cumulative_dim(int resolution, int dimension) {
  if (resolution < 0) throw InputError("resolution must be nonnegative");
  std::int64_t total = 0;
  for (int l = 0; l <= resolution; ++l) total += harmonic_dim(l, dimension);
  return total;
}

int max_resolution(std::int64_t count, int dimension) {
  require_dimension(dimension);
  int r = -1;
  std::int64_t total = 0;
  while (true) {
    total += harmonic_dim(r + 1, dimension);
    if (total > count) return r;
    ++r;
  }
}

double gegenbauer_beta(int dimension) {
  require_dimension(dimension);
  return 0.5 * (dimension - 2);
}

double gegenbauer_normalization(int degree, int dimension) {
  require_dimension(dimension);
  return static_cast<double>(2 * degree + dimension - 2) / static_cast<double>(dimension - 2);
}

double sphere_constant(int dimension) {
  require_dimension(dimension);
  const double d = dimension;
  return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5) - std::lgamma(0.5 * (d - 1.0)));
}

double gegenbauer_weight(double beta, double t) {
  const double base = std::max(0.0, 1.0 - t * t);
  const double expo = beta - 0.5;
  if (expo == 0.0) return 1.0;
  return std::pow(base, expo);
}

double gegenbauer(int degree, double beta, double t) {
  if (degree <= 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * beta * t;
  for (int k = 2; k <= degree; ++k) {
    const double next = (2.0 * t * (k + beta - 1.0) * cur - (k + 2.0 * beta - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

void gegenbauer_values(double beta, double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 2.0 * beta * t;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const auto kk = static_cast<double>(k);
    out[k] = (2.0 * t * (kk + beta - 1.0) * out[k - 1] - (kk + 2.0 * beta - 2.0) * out[k - 2]) / kk;
  }
}

Envelope Envelope::heaviside(double threshold) {
  return Envelope{[threshold](double t) { return t >= threshold ? 1.0 : 0.0; },
                  {threshold},
                  fmt::format("heaviside({})", threshold)};
}

Envelope Envelope::constant(double value) {
  return Envelope{[value](double) { return value; }, {}, fmt::format("constant({})", value)};
}

double EnvelopeSpectrum::evaluate(double t) const {
  if (coefficients.empty()) return 0.0;
  const double beta = gegenbauer_beta(dimension);
  double prev = 1.0;
  double cur = 2.0 * beta * t;
  double sum = coefficients[0];
  for (std::size_t l = 1; l < coefficients.size(); ++l) {
    if (l >= 2) {
      const auto k = static_cast<double>(l);
      const double next = (2.0 * t * (k + beta - 1.0) * cur - (k + 2.0 * beta - 2.0) * prev) / k;
      prev = cur;
      cur = next;
    }
    sum += coefficients[l] * gegenbauer_normalization(static_cast<int>(l), dimension) * cur;
  }
  return sum;
}

std::vector<double> EnvelopeSpectrum::with_multiplicity() const {
  std::vector<double> out;
  for (std::size_t l = 0; l < coefficients.size(); ++l) {
    const auto m = harmonic_dim(static_cast<int>(l), dimension);
    out.insert(out.end(), static_cast<std::size_t>(m), coefficients[l]);
  }
  return out;
}

Envelope EnvelopeSpectrum::as_envelope(bool clip) const {
  EnvelopeSpectrum copy = *this;
  return Envelope{[copy, clip](double t) {
                    const double v = copy.evaluate(t);
                    return clip ? std::clamp(v, 0.0, 1.0) : v;
                  },
                  {},
                  clip ? "series(clipped)" : "series"};
}

EnvelopeSpectrum envelope_spectrum(const Envelope& envelope, int dimension, int resolution,
                                   int quad_nodes) {
  require_dimension(dimension);
  if (resolution < 0) throw InputError("resolution must be nonnegative");
  if (quad_nodes < 2 * resolution + 2)
    throw InputError(fmt::format("need at least {} quadrature nodes for resolution {}",
                                 2 * resolution + 2, resolution));
  const double beta = gegenbauer_beta(dimension);
  const double bd = sphere_constant(dimension);
  // Integrate in theta with t = cos(theta): w_beta(t) dt = sin^(d-2)(theta) dtheta
  // has no endpoint singularity for even d.
  std::vector<double> cuts;
  for (double bp : envelope.breakpoints)
    if (bp > -1.0 && bp < 1.0) cuts.push_back(std::acos(bp));
  std::sort(cuts.begin(), cuts.end());
  const auto rule = composite_gauss_legendre(static_cast<std::size_t>(quad_nodes), cuts, 0.0,
                                             std::numbers::pi);
  std::vector<double> integrals(static_cast<std::size_t>(resolution) + 1, 0.0);
  std::vector<double> g(integrals.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double theta = rule.nodes[q];
    const double t = std::cos(theta);
    const double value = envelope(t);
    if (!std::isfinite(value))
      throw InputError(fmt::format("envelope is not finite at t = {}", t));
    gegenbauer_values(beta, t, g);
    const double w = rule.weights[q] * value * std::pow(std::sin(theta), dimension - 2);
    for (std::size_t l = 0; l < g.size(); ++l) integrals[l] += w * g[l];
  }
  EnvelopeSpectrum out;
  out.dimension = dimension;
  out.coefficients.resize(integrals.size());
  for (std::size_t l = 0; l < integrals.size(); ++l) {
    const int li = static_cast<int>(l);
    out.coefficients[l] = gegenbauer_normalization(li, dimension) * bd /
                          static_cast<double>(harmonic_dim(li, dimension)) * integrals[l];
  }
  return out;
}

std::vector<double> reconstruct_envelope(const EnvelopeSpectrum& spectrum,
                                         std::span<const double> grid, bool clip) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (t < -1.0 || t > 1.0) throw InputError("reconstruction grid must lie in [-1, 1]");
    const double v = spectrum.evaluate(t);
    out.push_back(clip ? std::clamp(v, 0.0, 1.0) : v);
  }
  return out;
}

double sobolev_norm(const EnvelopeSpectrum& spectrum, double regularity) {
  if (!(regularity > 0.0)) throw InputError("Sobolev regularity must be positive");
  const double beta = gegenbauer_beta(spectrum.dimension);
  double sum = 0.0;
  for (std::size_t l = 0; l < spectrum.coefficients.size(); ++l) {
    const auto ld = static_cast<double>(l);
    const double g = spectrum.coefficients[l];
    const double eig = ld * (ld + 2.0 * beta);
    sum += static_cast<double>(harmonic_dim(static_cast<int>(l), spectrum.dimension)) * g * g *
           (1.0 + (eig > 0.0 ? std::pow(eig, regularity) : 0.0));
  }
  return std::sqrt(sum);
}

}  // namespace mrgg
