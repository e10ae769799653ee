#pragma once

#include "mrgg/latent.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

enum class SpectrumOrder { by_value_desc, by_magnitude_desc };

std::string to_string(SpectrumOrder order);

/// Eigenvalues of a symmetric matrix in a declared order, optionally with the
/// matching orthonormal eigenvectors as columns.
struct Spectrum {
  std::vector<double> values;
  std::optional<Eigen::MatrixXd> vectors;
  SpectrumOrder order = SpectrumOrder::by_value_desc;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] Spectrum reordered(SpectrumOrder target) const;
  /// Same spectrum with every value multiplied by `factor` (order kept).
  [[nodiscard]] Spectrum scaled(double factor) const;
};

/// T_hat = A / n.
Eigen::MatrixXd build_that(const Graph& graph);

/// Full symmetric eigendecomposition (LAPACK dsyevd, see lapack_backend_sound). Rejects inputs whose
/// asymmetry exceeds 1e-12. Ties in magnitude order put the positive value
/// first.
Spectrum sym_eigen(const Eigen::MatrixXd& matrix, bool want_vectors, SpectrumOrder order);

/// False when the linked LAPACK fails a one-time accuracy probe; sym_eigen
/// then uses Eigen's solver (correct but several times slower).
bool lapack_backend_sound();

/// l2 rearrangement distance between two zero-padded real sequences.
double delta2(std::span<const double> x, std::span<const double> y);

}  // namespace mrgg
