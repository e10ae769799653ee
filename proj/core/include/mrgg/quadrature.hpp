#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mrgg {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `count` nodes on [a, b].
QuadratureRule gauss_legendre(std::size_t count, double a = -1.0, double b = 1.0);

/// Composite Gauss-Legendre on [a, b], split at the given interior
/// breakpoints, with `count` nodes per piece. Breakpoints outside (a, b) are
/// ignored.
QuadratureRule composite_gauss_legendre(std::size_t count, std::span<const double> breakpoints,
                                        double a = -1.0, double b = 1.0);

}  // namespace mrgg
