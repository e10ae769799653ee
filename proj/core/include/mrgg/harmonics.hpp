#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

/// Degree l of the spherical harmonics on S^{d-1}, together with the
/// dimension d. Construction enforces d >= 3 and l >= 0.
class HarmonicIndex {
 public:
  HarmonicIndex(int degree, int dimension);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int dimension() const { return dimension_; }
  /// Gegenbauer parameter (d - 2) / 2.
  [[nodiscard]] double beta() const;
  /// Dimension d_l of the degree-l harmonic space.
  [[nodiscard]] std::int64_t multiplicity() const;
  /// c_l = (2l + d - 2) / (d - 2).
  [[nodiscard]] double normalization() const;

 private:
  int degree_;
  int dimension_;
};

std::int64_t harmonic_dim(int degree, int dimension);
/// Sum of harmonic_dim(l, d) for l = 0..resolution.
std::int64_t cumulative_dim(int resolution, int dimension);
/// Largest R with cumulative_dim(R, d) <= count, or -1 if count < 1.
int max_resolution(std::int64_t count, int dimension);

double gegenbauer_beta(int dimension);
double gegenbauer_normalization(int degree, int dimension);
/// Gamma(d/2) / (Gamma(1/2) Gamma((d-1)/2)), evaluated through lgamma.
double sphere_constant(int dimension);
/// w_beta(t) = (1 - t^2)^(beta - 1/2).
double gegenbauer_weight(double beta, double t);

/// G_k^beta(t) by the three-term recurrence.
double gegenbauer(int degree, double beta, double t);
/// Fills out[k] = G_k^beta(t) for k = 0..out.size()-1.
void gegenbauer_values(double beta, double t, std::span<double> out);

/// Connection-probability profile p : [-1, 1] -> [0, 1] of inner products.
/// Interior discontinuities are listed so quadrature can split there.
struct Envelope {
  std::function<double(double)> fn;
  std::vector<double> breakpoints;
  std::string name;

  double operator()(double t) const { return fn(t); }

  static Envelope heaviside(double threshold = 0.0);
  static Envelope constant(double value);
};

/// Harmonic eigenvalues p*_0..p*_R of an envelope on S^{d-1}.
struct EnvelopeSpectrum {
  int dimension = 3;
  std::vector<double> coefficients;

  [[nodiscard]] int resolution() const { return static_cast<int>(coefficients.size()) - 1; }
  /// Series value sum_l p*_l c_l G_l^beta(t), unclipped.
  [[nodiscard]] double evaluate(double t) const;
  /// Each p*_l repeated d_l times, in degree order.
  [[nodiscard]] std::vector<double> with_multiplicity() const;
  /// Envelope evaluating the series, clamped to [0, 1] when `clip` is set.
  [[nodiscard]] Envelope as_envelope(bool clip) const;
};

inline constexpr int kDefaultQuadratureNodes = 128;

EnvelopeSpectrum envelope_spectrum(const Envelope& envelope, int dimension, int resolution,
                                   int quad_nodes = kDefaultQuadratureNodes);

std::vector<double> reconstruct_envelope(const EnvelopeSpectrum& spectrum,
                                         std::span<const double> grid, bool clip);

/// Weighted Sobolev norm [sum_l d_l |g_l|^2 (1 + (l(l + 2 beta))^s)]^(1/2).
double sobolev_norm(const EnvelopeSpectrum& spectrum, double regularity);

}  // namespace mrgg
