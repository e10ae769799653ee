#include "mrgg/inference.hpp"

#include "mrgg/error.hpp"
#include "mrgg/parallel.hpp"
#include "mrgg/quadrature.hpp"
#include "mrgg/spectral.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace mrgg {

std::string to_string(PosteriorSource source) {
  switch (source) {
    case PosteriorSource::oracle: return "oracle";
    case PosteriorSource::plugin: return "plugin";
    case PosteriorSource::uniform_null: return "uniform-null";
  }
  return "unknown";
}

std::string to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::bayes: return "bayes";
    case ClassifierKind::mrgg: return "mrgg";
    case ClassifierKind::random: return "random";
  }
  return "unknown";
}

PosteriorIntegrator::PosteriorIntegrator(const Envelope& envelope,
                                         const std::function<double(double)>& latitude,
                                         std::size_t nodes,
                                         std::span<const double> latitude_breakpoints)
    : envelope_(envelope),
      base_(gauss_legendre(nodes)),
      r_rule_(composite_gauss_legendre(nodes, latitude_breakpoints)) {
  latitude_at_nodes_.reserve(r_rule_.size());
  for (double r : r_rule_.nodes) {
    const double f = latitude(r);
    if (!std::isfinite(f)) throw InputError("latitude density is not finite at a quadrature node");
    latitude_at_nodes_.push_back(f);
  }
}

double PosteriorIntegrator::operator()(double r_in) const {
  if (!(std::abs(r_in) <= 1.0)) throw InputError(fmt::format("inner product {} outside [-1, 1]", r_in));
  const double s_in = std::sqrt(std::max(0.0, 1.0 - r_in * r_in));
  std::vector<double> cuts;
  double total = 0.0;
  for (std::size_t a = 0; a < r_rule_.size(); ++a) {
    const double r = r_rule_.nodes[a];
    const double c = std::sqrt(std::max(0.0, 1.0 - r * r)) * s_in;
    cuts.assign({-1.0, 1.0});
    if (c > 0.0)
      for (double bp : envelope_.breakpoints) {
        const double u = (bp - r_in * r) / c;
        if (u > -1.0 && u < 1.0) cuts.push_back(u);
      }
    std::sort(cuts.begin(), cuts.end());
    double inner = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
      const double half = 0.5 * (cuts[k + 1] - cuts[k]);
      if (half <= 0.0) continue;
      for (std::size_t b = 0; b < base_.size(); ++b) {
        const double t = std::clamp(r_in * r + c * (mid + half * base_.nodes[b]), -1.0, 1.0);
        const double p = envelope_(t);
        if (!std::isfinite(p)) throw InputError("envelope is not finite inside the posterior integral");
        inner += half * base_.weights[b] * p;
      }
    }
    total += r_rule_.weights[a] * latitude_at_nodes_[a] * inner;
  }
  return std::clamp(0.5 * total, 0.0, 1.0);
}

double posterior_link_prob(double r_in, const Envelope& envelope,
                           const std::function<double(double)>& latitude, std::size_t nodes,
                           std::span<const double> latitude_breakpoints) {
  return PosteriorIntegrator(envelope, latitude, nodes, latitude_breakpoints)(r_in);
}

LinkPosterior posterior_link_probs(std::span<const double> r_in, const Envelope& envelope,
                                   const std::function<double(double)>& latitude,
                                   PosteriorSource source, std::size_t nodes,
                                   std::span<const double> latitude_breakpoints) {
  const PosteriorIntegrator integrate(envelope, latitude, nodes, latitude_breakpoints);
  LinkPosterior out;
  out.source = source;
  out.eta.reserve(r_in.size());
  for (double r : r_in) out.eta.push_back(integrate(r));
  return out;
}

ClassifierOutput classify(const LinkPosterior& posterior) {
  ClassifierOutput out;
  out.kind = posterior.source == PosteriorSource::plugin ? ClassifierKind::mrgg : ClassifierKind::bayes;
  out.labels.reserve(posterior.eta.size());
  for (double e : posterior.eta) out.labels.push_back(e >= 0.5 ? 1 : 0);
  return out;
}

ClassifierOutput random_classifier(const Graph& graph, Rng& rng, std::size_t count) {
  if (graph.size() < 2) throw InputError("random classifier needs a graph with at least two nodes");
  const double density = graph.edge_density();
  ClassifierOutput out;
  out.kind = ClassifierKind::random;
  out.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.labels.push_back(rng.bernoulli(density) ? 1 : 0);
  return out;
}

ClassifierOutput random_classifier(const Graph& graph, Rng& rng) {
  return random_classifier(graph, rng, graph.size());
}

double risk(std::span<const double> eta, std::span<const std::uint8_t> labels) {
  if (eta.size() != labels.size()) throw InputError("posterior and labels differ in length");
  if (eta.empty()) throw InputError("risk of an empty prediction");
  double sum = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) sum += labels[i] ? 1.0 - eta[i] : eta[i];
  return sum / static_cast<double>(eta.size());
}

double risk(const LinkPosterior& posterior, const ClassifierOutput& out) {
  return risk(posterior.eta, out.labels);
}

std::vector<double> expected_counts(const std::function<double(double)>& f0, std::size_t bins,
                                    std::size_t m, std::span<const double> breakpoints) {
  if (bins < 2) throw InputError("chi-square test needs at least two bins");
  const double width = 2.0 / static_cast<double>(bins);
  std::vector<double> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = -1.0 + width * static_cast<double>(b);
    const double hi = b + 1 == bins ? 1.0 : lo + width;
    const auto rule = composite_gauss_legendre(16, breakpoints, lo, hi);
    double mass = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) mass += rule.weights[k] * f0(rule.nodes[k]);
    if (!std::isfinite(mass)) throw InputError("null density is not finite");
    out[b] = static_cast<double>(m) * mass;
    if (out[b] < 1e-12)
      throw InputError(fmt::format("expected count {} in bin {} is too small", out[b], b));
  }
  return out;
}

double chi2_statistic(std::span<const double> samples, const std::function<double(double)>& f0,
                      std::size_t bins, std::span<const double> breakpoints) {
  if (samples.empty()) throw InputError("chi-square test needs samples");
  const auto expected = expected_counts(f0, bins, samples.size(), breakpoints);
  std::vector<double> observed(bins, 0.0);
  for (double s : samples) {
    if (!(std::abs(s) <= 1.0)) throw InputError(fmt::format("sample {} outside [-1, 1]", s));
    const auto b = static_cast<std::size_t>(std::floor((s + 1.0) / 2.0 * static_cast<double>(bins)));
    observed[std::min(b, bins - 1)] += 1.0;
  }
  double stat = 0.0;
  for (std::size_t b = 0; b < bins; ++b)
    stat += (observed[b] - expected[b]) * (observed[b] - expected[b]) / expected[b];
  return stat;
}

double empirical_quantile_higher(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size() - 1)));
  return values[std::min(idx, values.size() - 1)];
}

double markov_statistic(const Graph& graph, const MarkovTestConfig& config, Rng& rng) {
  const auto spectrum = sym_eigen(build_that(graph), true, SpectrumOrder::by_value_desc);
  const auto gram = heic(spectrum, config.dimension);
  auto distances = extract_distances(gram);
  const std::size_t m = graph.size();

  std::vector<double> batch;
  if (config.batch == BatchMode::reuse) {
    batch = distances;
  } else {
    const auto fit = fit_latitude(std::move(distances));
    batch = fit.density.sample(rng, m);
  }
  const auto null = LatitudeDistribution::uniform_null(config.dimension);
  return chi2_statistic(batch, [&](double r) { return null.pdf(r); }, config.bins);
}

NullCalibration calibrate_threshold(std::size_t n, const Envelope& envelope, double zeta,
                                    const MarkovTestConfig& config, std::size_t trials,
                                    std::uint64_t seed, unsigned jobs) {
  if (trials < 50) throw InputError(fmt::format("calibration needs at least 50 trials, got {}", trials));
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw InputError("level must lie in (0, 1]");
  const auto null = LatitudeDistribution::uniform_null(config.dimension);
  NullCalibration out;
  out.statistics = parallel_map<double>(trials, jobs, [&](std::size_t t) {
    const auto chain = sample_chain(n, config.dimension, null, derive_seed(seed, t, 0));
    const auto graph = sample_graph(chain, envelope, zeta, derive_seed(seed, t, 1));
    Rng rng(derive_seed(seed, t, 2));
    return markov_statistic(graph, config, rng);
  });
  out.threshold = empirical_quantile_higher(out.statistics, 1.0 - config.alpha);
  return out;
}

TestReport markov_test(const Graph& graph, const MarkovTestConfig& config, double threshold,
                       std::size_t mc_trials, Rng& rng) {
  TestReport report;
  report.threshold = threshold;
  report.alpha = config.alpha;
  report.mc_trials = mc_trials;
  report.bins = config.bins;
  try {
    report.statistic = markov_statistic(graph, config, rng);
    report.reject = report.statistic > threshold;
  } catch (const std::exception& e) {
    report.valid = false;
    report.reject = false;
    report.error = e.what();
  }
  return report;
}

}  // namespace mrgg
