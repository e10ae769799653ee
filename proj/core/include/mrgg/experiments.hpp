#pragma once

#include "mrgg/envelope.hpp"
#include "mrgg/inference.hpp"
#include "mrgg/io.hpp"
#include "mrgg/latent.hpp"
#include "mrgg/latitude.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrgg {

struct EnvelopeSpec {
  std::string kind = "heaviside";  ///< heaviside | constant | gegenbauer
  double threshold = 0.0;
  double value = 1.0;
  std::vector<double> coefficients;

  [[nodiscard]] Envelope build(int dimension) const;
};

struct LatitudeSpec {
  std::string kind = "uniform-null";  ///< uniform-null | beta-mixture | scaled-beta
  double a = 2.0;
  double b = 2.0;

  [[nodiscard]] LatitudeDistribution build(int dimension) const;
};

struct ZetaRule {
  std::string rule = "dense";  ///< dense | log-power | constant
  double k = 2.0;
  double value = 1.0;

  [[nodiscard]] double at(std::size_t n) const;
};

struct ExperimentConfig {
  std::string scenario = "custom";
  std::vector<std::size_t> n_list;
  int dimension = 3;
  std::optional<EnvelopeSpec> envelope;
  std::optional<LatitudeSpec> latitude;
  ZetaRule zeta;
  std::size_t seeds = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> output_dir;
  double alpha = 0.05;
  std::size_t bins = 70;
  std::size_t trials = 100;
  std::size_t calibration_trials = 200;
  BatchMode batch = BatchMode::resample;
  std::vector<double> kappa_grid = default_kappa_grid();
  double bandwidth = 0.0;  ///< 0 selects Silverman's rule
  std::size_t nodes_reported = 10;
  std::optional<std::string> graph;
  bool include_points = true;
  int error_degree = 40;         ///< degree up to which the true envelope spectrum is compared
  int latitude_resolution = 20;  ///< Gegenbauer degree of the latitude-spectrum comparison
  unsigned jobs = 1;

  [[nodiscard]] std::size_t n() const { return n_list.front(); }
  [[nodiscard]] Envelope true_envelope() const;
  [[nodiscard]] LatitudeDistribution true_latitude() const;
};

/// Parses a flat JSON config. Unknown keys, wrong types and out-of-range
/// values raise InputError before any computation. Known scenarios ("test1",
/// "sparse", "linkpred", "null") supply defaults that explicit keys override.
ExperimentConfig parse_config(std::string_view json_text);
/// Reads and parses a config file; a relative "graph" path is resolved
/// against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

// --- simulate ---------------------------------------------------------------

GraphFile simulate_graph(const ExperimentConfig& config, std::size_t n, std::uint64_t seed);
GraphFile cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// --- estimate ---------------------------------------------------------------

struct EstimateResult {
  EnvelopeEstimate envelope;
  GramEstimate gram;
  LatitudeFit latitude;
  std::vector<std::string> warnings;
};

/// Envelope and latitude estimation from one eigendecomposition.
EstimateResult estimate_graph(const Graph& graph, int dimension, const ExperimentConfig& config);
EstimateResult cmd_estimate(const ExperimentConfig& config, const std::filesystem::path& graph_path,
                            const std::filesystem::path& out_dir);

// --- delta2 sweep -----------------------------------------------------------

struct SweepReplicate {
  std::size_t n = 0;
  std::size_t seed_index = 0;
  std::vector<double> p_hat;
  double envelope_error = 0.0;
  double latitude_error = 0.0;
  double gram_error = 0.0;  ///< ||G* - G_hat||_F
  double gram_trace = 0.0;
};

struct SweepRow {
  std::size_t n = 0;
  std::size_t seeds = 0;
  double envelope_mean = 0.0;
  double envelope_sd = 0.0;
  double latitude_mean = 0.0;
  double latitude_sd = 0.0;
};

/// Envelope spectrum with multiplicities up to `degree` (true values).
std::vector<double> true_envelope_eigenvalues(const Envelope& envelope, int dimension, int degree);
/// Gegenbauer coefficients of a latitude density, with multiplicities.
std::vector<double> latitude_spectrum(const std::function<double(double)>& pdf, int dimension,
                                      int resolution, std::span<const double> breakpoints = {});

SweepReplicate run_sweep_replicate(const ExperimentConfig& config, std::size_t n,
                                   std::size_t seed_index);
std::vector<SweepReplicate> run_sweep_replicates(const ExperimentConfig& config);
std::vector<SweepRow> summarize_sweep(const std::vector<SweepReplicate>& replicates);
std::vector<SweepRow> cmd_sweep_delta2(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir);

// --- test power -------------------------------------------------------------

struct PowerRow {
  std::size_t n = 0;
  double threshold = 0.0;
  double null_rate = 0.0;
  double alternative_rate = 0.0;
  std::size_t trials = 0;
  std::size_t calibration_trials = 0;
  std::size_t invalid = 0;
};

PowerRow run_power(const ExperimentConfig& config, std::size_t n, std::size_t n_index);
std::vector<PowerRow> cmd_test_power(const ExperimentConfig& config,
                                     const std::filesystem::path& out_dir);

// --- link prediction --------------------------------------------------------

struct LinkpredReplicate {
  std::size_t seed_index = 0;
  LinkPosterior oracle;
  LinkPosterior plugin;
  LinkPosterior uniform;
  double risk_bayes = 0.0;
  double risk_mrgg = 0.0;
  double risk_random = 0.0;
  double plugin_error = 0.0;  ///< mean |eta_plugin - eta_oracle| over the reported nodes
};

struct LinkpredSummary {
  std::vector<LinkpredReplicate> replicates;
  double mean_bayes = 0.0;
  double mean_mrgg = 0.0;
  double mean_random = 0.0;
  double gap_se = 0.0;  ///< paired standard error of risk(random) - risk(mrgg)
  double mean_plugin_error = 0.0;
};

/// Simulates n latent points and their graph; posteriors are for an incoming
/// node that follows node n in the chain.
LinkpredReplicate run_linkpred_replicate(const ExperimentConfig& config, std::size_t seed_index);
LinkpredSummary cmd_linkpred(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace mrgg
