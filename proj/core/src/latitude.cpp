#include "mrgg/latitude.hpp"

#include "mrgg/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mrgg {
namespace {

void check_window(std::span<const double> values, std::size_t start, int d) {
  if (d < 1) throw InputError("window size must be positive");
  const auto width = static_cast<std::size_t>(d);
  if (values.size() < width + 1)
    throw InputError(fmt::format("need at least {} eigenvalues for a window of {}", width + 1, d));
  if (start + width > values.size()) throw InputError("window exceeds the spectrum");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

double gap1(std::span<const double> values, std::size_t start, int d) {
  check_window(values, start, d);
  const std::size_t stop = start + static_cast<std::size_t>(d);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i >= start && i < stop) continue;
    double worst = 0.0;
    for (std::size_t j = start; j < stop; ++j) worst = std::max(worst, std::abs(values[i] - values[j]));
    best = std::min(best, worst);
  }
  return best;
}

double isolation_gap(std::span<const double> values, std::size_t start, int d) {
  check_window(values, start, d);
  const std::size_t stop = start + static_cast<std::size_t>(d);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i >= start && i < stop) continue;
    for (std::size_t j = start; j < stop; ++j) best = std::min(best, std::abs(values[i] - values[j]));
  }
  return best;
}

namespace {

// On a sorted list the nearest outside entries are the two neighbours.
double isolation_gap_sorted(std::span<const double> values, std::size_t start, std::size_t width) {
  double best = std::numeric_limits<double>::infinity();
  if (start > 0) best = std::min(best, std::abs(values[start - 1] - values[start]));
  if (start + width < values.size())
    best = std::min(best, std::abs(values[start + width] - values[start + width - 1]));
  return best;
}

}  // namespace

GramEstimate heic(const Spectrum& spectrum, int dimension) {
  if (!spectrum.vectors) throw InputError("HEiC needs eigenvectors");
  const Spectrum sorted = spectrum.reordered(SpectrumOrder::by_value_desc);
  const auto width = static_cast<std::size_t>(dimension);
  check_window(sorted.values, 0, dimension);

  GramEstimate out;
  const std::size_t windows = sorted.size() - width + 1;
  double best = -1.0;
  std::size_t best_start = 0;
  bool tied = false;
  for (std::size_t s = 0; s < windows; ++s) {
    const double g = isolation_gap_sorted(sorted.values, s, width);
    const double tol = 1e-14 * std::max(1.0, std::abs(best));
    if (g > best + tol) {
      best = g;
      best_start = s;
      tied = false;
    } else if (std::abs(g - best) <= tol) {
      tied = true;  // earlier window has the larger mean; keep it
    }
  }
  if (tied)
    out.warnings.push_back(fmt::format(
        "HEiC: several windows reach the maximal gap {}; kept the one with the largest eigenvalues",
        best));

  out.window_start = best_start;
  out.gap = best;
  out.eigenvalues.assign(sorted.values.begin() + static_cast<std::ptrdiff_t>(best_start),
                         sorted.values.begin() + static_cast<std::ptrdiff_t>(best_start + width));
  out.vectors = sorted.vectors->middleCols(static_cast<Eigen::Index>(best_start),
                                           static_cast<Eigen::Index>(width));
  out.gram = out.vectors * out.vectors.transpose() / static_cast<double>(dimension);
  return out;
}

Eigen::MatrixXd gram_from_points(const Eigen::MatrixXd& points) {
  if (points.rows() == 0) throw InputError("no latent points");
  return points * points.transpose() / static_cast<double>(points.rows());
}

std::vector<double> extract_distances(const Eigen::MatrixXd& gram) {
  const auto n = gram.rows();
  if (n < 2 || gram.cols() != n) throw InputError("Gram matrix must be square with n >= 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 1; i < n; ++i)
    out.push_back(std::clamp(static_cast<double>(n) * gram(i - 1, i), -1.0, 1.0));
  return out;
}

std::vector<double> extract_distances(const GramEstimate& gram) { return extract_distances(gram.gram); }

LatitudeDensity::LatitudeDensity(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
  if (samples_.empty()) throw InputError("density estimate needs samples");
  if (!(bandwidth_ > 0.0) || !std::isfinite(bandwidth_)) throw InputError("bandwidth must be positive");
  inv_mass_.reserve(samples_.size());
  for (double s : samples_) {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0)
      throw InputError(fmt::format("latitude sample {} outside [-1, 1]", s));
    const double mass = normal_cdf((1.0 - s) / bandwidth_) - normal_cdf((-1.0 - s) / bandwidth_);
    inv_mass_.push_back(1.0 / mass);
  }
}

double LatitudeDensity::pdf(double r) const {
  if (r < -1.0 || r > 1.0) return 0.0;
  const double scale = 1.0 / (bandwidth_ * std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double z = (r - samples_[i]) / bandwidth_;
    sum += inv_mass_[i] * std::exp(-0.5 * z * z);
  }
  return scale * sum / static_cast<double>(samples_.size());
}

double LatitudeDensity::cdf(double r) const {
  if (r <= -1.0) return 0.0;
  if (r >= 1.0) return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double lo = normal_cdf((-1.0 - samples_[i]) / bandwidth_);
    sum += inv_mass_[i] * (normal_cdf((r - samples_[i]) / bandwidth_) - lo);
  }
  return std::clamp(sum / static_cast<double>(samples_.size()), 0.0, 1.0);
}

std::vector<double> LatitudeDensity::sample(Rng& rng, std::size_t count) const {
  const std::size_t m = kSamplingGrid;
  std::vector<double> grid(m);
  std::vector<double> cum(m);
  for (std::size_t k = 0; k < m; ++k) {
    grid[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(m - 1);
    cum[k] = cdf(grid[k]);
  }
  cum.front() = 0.0;
  cum.back() = 1.0;
  for (std::size_t k = 1; k < m; ++k) cum[k] = std::max(cum[k], cum[k - 1]);

  std::vector<double> out(count);
  for (auto& x : out) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cum.begin(), cum.end(), u);
    const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cum.begin(), 1, static_cast<std::ptrdiff_t>(m - 1)));
    const double span = cum[hi] - cum[hi - 1];
    const double t = span > 0.0 ? (u - cum[hi - 1]) / span : 0.5;
    x = grid[hi - 1] + t * (grid[hi] - grid[hi - 1]);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> LatitudeDensity::tabulate(std::size_t points) const {
  if (points < 2) throw InputError("tabulation needs at least two points");
  std::vector<double> grid(points);
  std::vector<double> values(points);
  for (std::size_t k = 0; k < points; ++k) {
    grid[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(points - 1);
    values[k] = pdf(grid[k]);
  }
  return {std::move(grid), std::move(values)};
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t m = samples.size();
  if (m < 2) return 0.0;
  // shift by the first sample so a constant sample has exactly zero spread
  const double shift = samples[0];
  double mean = 0.0;
  for (double s : samples) mean += s - shift;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double s : samples) ss += (s - shift - mean) * (s - shift - mean);
  const double sd = std::sqrt(ss / static_cast<double>(m - 1));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, m - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double iqr = (quantile(0.75) - quantile(0.25)) / 1.34;

  double spread = std::min(sd, iqr);
  if (spread <= 0.0) spread = std::max(sd, iqr);
  return 0.9 * spread * std::pow(static_cast<double>(m), -0.2);
}

LatitudeFit fit_latitude(std::vector<double> distances, double bandwidth) {
  if (distances.size() < 2) throw InputError("latitude fit needs at least two distances");
  std::vector<std::string> warnings;
  double h = bandwidth;
  if (!(h > 0.0)) {
    h = silverman_bandwidth(distances);
    if (h < LatitudeDensity::kMinBandwidth) {
      warnings.push_back(fmt::format("latitude fit: bandwidth {} below floor, using {}", h,
                                     LatitudeDensity::kMinBandwidth));
      h = LatitudeDensity::kMinBandwidth;
    }
  }
  return LatitudeFit{LatitudeDensity(std::move(distances), h), std::move(warnings)};
}

}  // namespace mrgg
