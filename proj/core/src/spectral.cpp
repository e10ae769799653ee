#include "mrgg/spectral.hpp"

#include "mrgg/error.hpp"

#include <fmt/format.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mrgg {

namespace {

std::vector<std::size_t> sort_permutation(const std::vector<double>& values, SpectrumOrder order) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == SpectrumOrder::by_value_desc) {
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  } else {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const double ma = std::abs(values[a]);
      const double mb = std::abs(values[b]);
      if (ma != mb) return ma > mb;
      return values[a] > values[b];
    });
  }
  return idx;
}

Spectrum apply_permutation(const Spectrum& in, const std::vector<std::size_t>& idx,
                           SpectrumOrder order) {
  Spectrum out;
  out.order = order;
  out.values.reserve(idx.size());
  for (auto i : idx) out.values.push_back(in.values[i]);
  if (in.vectors) {
    Eigen::MatrixXd v(in.vectors->rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c)
      v.col(static_cast<Eigen::Index>(c)) = in.vectors->col(static_cast<Eigen::Index>(idx[c]));
    out.vectors = std::move(v);
  }
  return out;
}

// Some OpenBLAS kernel selections return non-orthogonal eigenvectors. Probe
// once with a matrix large enough to reach the blocked code paths.
bool lapack_eigensolver_sound() {
  static const bool sound = [] {
    constexpr lapack_int n = 192;
    Eigen::MatrixXd a(n, n);
    for (lapack_int i = 0; i < n; ++i)
      for (lapack_int j = 0; j <= i; ++j) {
        const double v = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? 0.5 * i / n : 0.0);
        a(i, j) = a(j, i) = v;
      }
    Eigen::MatrixXd v = a;
    Eigen::VectorXd w(n);
    if (LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, v.data(), n, w.data()) != 0) return false;
    const double orth = (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    const double resid = (a * v - v * w.asDiagonal()).cwiseAbs().maxCoeff();
    return orth < 1e-8 && resid < 1e-8;
  }();
  return sound;
}

}  // namespace

bool lapack_backend_sound() { return lapack_eigensolver_sound(); }

std::string to_string(SpectrumOrder order) {
  return order == SpectrumOrder::by_value_desc ? "by-value-desc" : "by-magnitude-desc";
}

Spectrum Spectrum::reordered(SpectrumOrder target) const {
  return apply_permutation(*this, sort_permutation(values, target), target);
}

Spectrum Spectrum::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("spectrum scale factor must be positive");
  Spectrum out = *this;
  for (auto& v : out.values) v *= factor;
  return out;
}

Eigen::MatrixXd build_that(const Graph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return m;
  const double inv = 1.0 / static_cast<double>(n);
  const auto adj = graph.adjacency();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (adj[static_cast<std::size_t>(i * n + j)] != 0) m(i, j) = inv;
  return m;
}

Spectrum sym_eigen(const Eigen::MatrixXd& matrix, bool want_vectors, SpectrumOrder order) {
  if (matrix.rows() != matrix.cols()) throw InputError("eigendecomposition needs a square matrix");
  const auto n = matrix.rows();
  if (n == 0) return Spectrum{{}, std::nullopt, order};
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12))
    throw InputError(fmt::format("matrix is not symmetric (max asymmetry {})", asym));
  if (!matrix.allFinite()) throw InputError("matrix has non-finite entries");

  Spectrum raw;
  raw.order = SpectrumOrder::by_value_desc;
  if (lapack_eigensolver_sound()) {
    Eigen::MatrixXd work = matrix;
    std::vector<double> w(static_cast<std::size_t>(n));
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', static_cast<lapack_int>(n),
                       work.data(), static_cast<lapack_int>(n), w.data());
    if (info != 0) throw PipelineError(fmt::format("dsyevd failed with info = {}", info));
    raw.values.assign(w.rbegin(), w.rend());
    if (want_vectors) raw.vectors = work.rowwise().reverse();
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        matrix, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw PipelineError("eigendecomposition did not converge");
    const auto& w = solver.eigenvalues();
    raw.values.assign(w.data(), w.data() + n);
    std::reverse(raw.values.begin(), raw.values.end());
    if (want_vectors) raw.vectors = solver.eigenvectors().rowwise().reverse();
  }
  return raw.reordered(order);
}

double delta2(std::span<const double> x, std::span<const double> y) {
  const std::size_t len = std::max(x.size(), y.size());
  std::vector<double> a(len, 0.0);
  std::vector<double> b(len, 0.0);
  std::copy(x.begin(), x.end(), a.begin());
  std::copy(y.begin(), y.end(), b.begin());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < len; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(sum);
}

}  // namespace mrgg
