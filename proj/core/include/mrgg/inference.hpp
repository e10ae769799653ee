#pragma once

#include "mrgg/harmonics.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/latitude.hpp"
#include "mrgg/quadrature.hpp"
#include "mrgg/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mrgg {

enum class PosteriorSource { oracle, plugin, uniform_null };
enum class ClassifierKind { bayes, mrgg, random };

std::string to_string(PosteriorSource source);
std::string to_string(ClassifierKind kind);

struct LinkPosterior {
  std::vector<double> eta;
  PosteriorSource source = PosteriorSource::oracle;
};

struct ClassifierOutput {
  std::vector<std::uint8_t> labels;
  ClassifierKind kind = ClassifierKind::bayes;
};

inline constexpr std::size_t kPosteriorNodes = 64;

/// Tensor Gauss-Legendre rule for the posterior link probability
///   eta(r_in) = int int p(r_in r + sqrt(1 - r^2) sqrt(1 - r_in^2) u) f(r) dr du / 2.
/// The r-rule is split at the latitude breakpoints and, for each r, the u-rule
/// at the points where the argument crosses an envelope breakpoint; every
/// piece gets `nodes` points. The latitude density is evaluated once.
class PosteriorIntegrator {
 public:
  PosteriorIntegrator(const Envelope& envelope, const std::function<double(double)>& latitude,
                      std::size_t nodes = kPosteriorNodes,
                      std::span<const double> latitude_breakpoints = {});

  [[nodiscard]] double operator()(double r_in) const;

 private:
  Envelope envelope_;
  QuadratureRule base_;  ///< nodes on [-1, 1], reused for every u piece
  QuadratureRule r_rule_;
  std::vector<double> latitude_at_nodes_;
};

double posterior_link_prob(double r_in, const Envelope& envelope,
                           const std::function<double(double)>& latitude,
                           std::size_t nodes = kPosteriorNodes,
                           std::span<const double> latitude_breakpoints = {});

LinkPosterior posterior_link_probs(std::span<const double> r_in, const Envelope& envelope,
                                   const std::function<double(double)>& latitude,
                                   PosteriorSource source, std::size_t nodes = kPosteriorNodes,
                                   std::span<const double> latitude_breakpoints = {});

/// g_i = 1 iff eta_i >= 1/2. Oracle posteriors give the Bayes classifier,
/// plug-in posteriors the MRGG classifier.
ClassifierOutput classify(const LinkPosterior& posterior);

/// i.i.d. Bernoulli labels at the graph's edge density.
ClassifierOutput random_classifier(const Graph& graph, Rng& rng);
ClassifierOutput random_classifier(const Graph& graph, Rng& rng, std::size_t count);

/// (1/n) sum [(1 - eta_i) 1{g_i = 1} + eta_i 1{g_i = 0}].
double risk(std::span<const double> eta, std::span<const std::uint8_t> labels);
double risk(const LinkPosterior& posterior, const ClassifierOutput& out);

/// m * integral of f0 over each of `bins` equal-width bins of (-1, 1).
std::vector<double> expected_counts(const std::function<double(double)>& f0, std::size_t bins,
                                    std::size_t m, std::span<const double> breakpoints = {});

/// Pearson statistic of `samples` against f0 on equal-width bins of (-1, 1).
double chi2_statistic(std::span<const double> samples, const std::function<double(double)>& f0,
                      std::size_t bins, std::span<const double> breakpoints = {});

/// sorted[ceil(q (m - 1))].
double empirical_quantile_higher(std::vector<double> values, double q);

enum class BatchMode { resample, reuse };

struct MarkovTestConfig {
  int dimension = 3;
  double alpha = 0.05;
  std::size_t bins = 70;
  BatchMode batch = BatchMode::resample;
};

struct TestReport {
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.05;
  bool reject = false;
  std::size_t mc_trials = 0;
  std::size_t bins = 70;
  bool valid = true;
  std::string error;
};

/// Graph -> eigenvectors -> HEiC -> superdiagonal -> KDE -> batch -> chi2
/// against the uniform-latent latitude law.
double markov_statistic(const Graph& graph, const MarkovTestConfig& config, Rng& rng);

struct NullCalibration {
  double threshold = 0.0;
  std::vector<double> statistics;
};

/// Empirical (1 - alpha) quantile of the statistic over graphs with i.i.d.
/// uniform latent points (trial t uses seeds derived from (seed, t)).
NullCalibration calibrate_threshold(std::size_t n, const Envelope& envelope, double zeta,
                                    const MarkovTestConfig& config, std::size_t trials,
                                    std::uint64_t seed, unsigned jobs = 1);

/// Runs the statistic on `graph`; rejects iff statistic > threshold. Pipeline
/// failures yield an invalid, non-rejecting report.
TestReport markov_test(const Graph& graph, const MarkovTestConfig& config, double threshold,
                       std::size_t mc_trials, Rng& rng);

}  // namespace mrgg
