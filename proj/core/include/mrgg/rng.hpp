#pragma once

#include <cstdint>
#include <random>

namespace mrgg {

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t mix64(std::uint64_t x);

/// Deterministically combine a master seed with stream indices.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Seedable, splittable random stream.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// implements every derived distribution locally, so a given seed produces
/// the same draws on every conforming toolchain. Child streams obtained with
/// split() are keyed by (parent key, index) and never share state with the
/// parent.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  [[nodiscard]] Rng split(std::uint64_t index) const;
  [[nodiscard]] std::uint64_t key() const { return key_; }

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Standard normal (Marsaglia polar method).
  double normal();
  bool bernoulli(double p);
  /// Beta(a, b) by inversion of the regularized incomplete beta function.
  double beta(double a, double b);

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mrgg
