#include "mrgg/error.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/latitude.hpp"
#include "mrgg/spectral.hpp"

#include <doctest.h>
#include <oracles.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace mrgg;

namespace {

Spectrum diagonal_spectrum(const std::vector<double>& values) {
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return sym_eigen(Eigen::MatrixXd(v.asDiagonal()), true, SpectrumOrder::by_value_desc);
}

// fine enough to resolve the narrowest kernel (h = 1e-3)
double integral(const LatitudeDensity& f) {
  return oracle::midpoint([&](double r) { return f.pdf(r); }, -1.0, 1.0, 40000);
}

}  // namespace

TEST_CASE("gap1 examples") {
  const std::vector<double> v{10, 5, 5, 5, 1};
  CHECK(gap1(v, 1, 3) == 4.0);
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK(gap1(flat, 0, 3) == 0.0);
  CHECK(gap1(flat, 1, 2) == 0.0);
  const std::vector<double> pair{1, 0};
  CHECK(gap1(pair, 1, 1) == 1.0);
  CHECK_THROWS_AS(gap1(pair, 0, 2), InputError);
  CHECK_THROWS_AS(gap1(v, 3, 3), InputError);
}

TEST_CASE("isolation gap examples") {
  const std::vector<double> v{9, 4, 4, 1};
  CHECK(isolation_gap(v, 0, 2) == 0.0);
  CHECK(isolation_gap(v, 1, 2) == 3.0);
  CHECK(isolation_gap(v, 2, 2) == 0.0);
}

TEST_CASE("heic examples") {
  const auto est = heic(diagonal_spectrum({9, 4, 4, 1}), 2);
  CHECK(est.eigenvalues == std::vector<double>{4, 4});
  CHECK(est.window_start == 1);
  CHECK(est.gap == 3.0);
  CHECK(est.warnings.empty());

  // Heaviside operator layout at d = 3
  std::vector<double> layout{0.5, 0.25, 0.25, 0.25, -0.0625, -0.0625, -0.0625, -0.0625, -0.0625};
  for (int i = 0; i < 12; ++i) layout.push_back(0.0);
  const auto h = heic(diagonal_spectrum(layout), 3);
  CHECK(h.eigenvalues == std::vector<double>{0.25, 0.25, 0.25});
  CHECK(h.gap == doctest::Approx(0.25));
  CHECK(h.gram.trace() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(heic(diagonal_spectrum({1, 0, -1}), 3), InputError);
  CHECK_THROWS_AS(heic(Spectrum{{1, 0, -1}, std::nullopt, SpectrumOrder::by_value_desc}, 2),
                  InputError);
}

TEST_CASE("heic reports ties and keeps the window with larger eigenvalues") {
  const auto est = heic(diagonal_spectrum({3, 2, 1, 0}), 1);
  CHECK(est.eigenvalues == std::vector<double>{3});
  CHECK_FALSE(est.warnings.empty());
}

TEST_CASE("heic works on magnitude-ordered input") {
  const auto s = diagonal_spectrum({0.1, -0.7, 0.4, 0.4, 0.0}).reordered(SpectrumOrder::by_magnitude_desc);
  const auto est = heic(s, 2);
  CHECK(est.eigenvalues == std::vector<double>{0.4, 0.4});
}

TEST_CASE("distances from the latent Gram matrix reproduce the chain") {
  for (int d : {3, 5}) {
    const auto chain = sample_chain(300, d, LatitudeDistribution::beta_mixture(2, 2), 31);
    const auto g = gram_from_points(chain.points);
    CHECK(g.trace() == doctest::Approx(1.0).epsilon(1e-12));
    const auto r = extract_distances(g);
    REQUIRE(r.size() == chain.jumps.size());
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - chain.jumps[i]) < 1e-10);
  }
}

TEST_CASE("extract_distances clamps to [-1, 1]") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
  g(0, 1) = g(1, 0) = 1.07 / 4;
  g(1, 2) = g(2, 1) = -1.5 / 4;
  g(2, 3) = g(3, 2) = 0.3 / 4;
  const auto r = extract_distances(g);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == -1.0);
  CHECK(r[2] == doctest::Approx(0.3));
}

TEST_CASE("estimated Gram matrices are symmetric, PSD, unit trace and rank d") {
  for (std::size_t n : {150u, 400u}) {
    const auto chain = sample_chain(n, 3, LatitudeDistribution::beta_mixture(2, 2), n + 3);
    const auto g = sample_graph(chain, Envelope::heaviside(), 1.0, n + 4);
    const auto est = heic(sym_eigen(build_that(g), true, SpectrumOrder::by_value_desc), 3);
    CHECK(est.eigenvalues.size() == 3);
    CHECK(est.vectors.cols() == 3);
    CHECK((est.gram - est.gram.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(est.gram.trace() - 1.0) < 1e-8);
    const auto s = sym_eigen(est.gram, false, SpectrumOrder::by_value_desc);
    CHECK(s.values.back() >= -1e-8);
    CHECK(std::abs(s.values[3]) < 1e-8);
    for (double r : extract_distances(est)) {
      CHECK(r >= -1.0);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("LatitudeDensity normalisation") {
  Rng rng(4);
  const auto lat = LatitudeDistribution::beta_mixture(2, 2);
  std::vector<double> samples(800);
  for (auto& s : samples) s = lat.sample(rng);
  for (double h : {0.0, 0.02, 0.3, 2.0}) {
    const auto fit = fit_latitude(samples, h);
    CHECK(std::abs(integral(fit.density) - 1.0) < 1e-6);
    const auto [grid, pdf] = fit.density.tabulate(501);
    REQUIRE(grid.size() == 501);
    CHECK(grid.front() == -1.0);
    CHECK(grid.back() == 1.0);
    for (double v : pdf) CHECK(v >= 0.0);
    CHECK(fit.density.cdf(-1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.density.cdf(1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.density.cdf(0.2) <= fit.density.cdf(0.3));
  }
  const auto fit = fit_latitude(samples);
  CHECK(fit.density.bandwidth() == doctest::Approx(silverman_bandwidth(samples)));
  CHECK(fit.warnings.empty());
  for (double x : fit.density.sample(rng, 500)) {
    CHECK(x >= -1.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("a constant sample floors the bandwidth") {
  const auto fit = fit_latitude(std::vector<double>(50, 0.5));
  CHECK(fit.density.bandwidth() == LatitudeDensity::kMinBandwidth);
  CHECK_FALSE(fit.warnings.empty());
  CHECK(std::abs(integral(fit.density) - 1.0) < 1e-6);
  CHECK(fit.density.pdf(0.5) > 100.0);
  CHECK(fit.density.pdf(0.45) < 1e-100);
  CHECK(silverman_bandwidth(std::vector<double>(10, 0.2)) == 0.0);
}

TEST_CASE("silverman_bandwidth matches the rule") {
  const std::vector<double> s{-0.4, -0.1, 0.0, 0.2, 0.9};
  // sd (n - 1) and type-7 interquartile range
  const double mean = 0.12;
  double ss = 0.0;
  for (double x : s) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / 4.0);
  const double iqr = 0.2 - (-0.1);
  CHECK(silverman_bandwidth(s) == doctest::Approx(0.9 * std::min(sd, iqr / 1.34) * std::pow(5.0, -0.2)));
}

TEST_CASE("fit_latitude input validation") {
  CHECK_THROWS_AS(fit_latitude({0.1}), InputError);
  CHECK_THROWS_AS(fit_latitude({0.1, 1.5}), InputError);
  CHECK_THROWS_AS(fit_latitude({0.1, std::nan("")}), InputError);
  CHECK_THROWS_AS(LatitudeDensity({0.1, 0.2}, 0.0), InputError);
}
