#include "mrgg/experiments.hpp"

#include "mrgg/error.hpp"
#include "mrgg/parallel.hpp"
#include "mrgg/spectral.hpp"
#include "mrgg/svg.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace mrgg {

using nlohmann::json;

// --- config -----------------------------------------------------------------

Envelope EnvelopeSpec::build(int dimension) const {
  if (kind == "heaviside") return Envelope::heaviside(threshold);
  if (kind == "constant") return Envelope::constant(value);
  if (kind == "gegenbauer") return EnvelopeSpectrum{dimension, coefficients}.as_envelope(true);
  throw InputError(fmt::format("unknown envelope kind '{}'", kind));
}

LatitudeDistribution LatitudeSpec::build(int dimension) const {
  if (kind == "uniform-null") return LatitudeDistribution::uniform_null(dimension);
  if (kind == "beta-mixture") return LatitudeDistribution::beta_mixture(a, b);
  if (kind == "scaled-beta") return LatitudeDistribution::scaled_beta(a, b);
  throw InputError(fmt::format("unknown latitude kind '{}'", kind));
}

double ZetaRule::at(std::size_t n) const {
  if (rule == "dense") return 1.0;
  if (rule == "log-power") return log_power_sparsity(n, k);
  if (rule == "constant") return value;
  throw InputError(fmt::format("unknown sparsity rule '{}'", rule));
}

Envelope ExperimentConfig::true_envelope() const {
  if (!envelope) throw InputError("config has no envelope");
  return envelope->build(dimension);
}

LatitudeDistribution ExperimentConfig::true_latitude() const {
  if (!latitude) throw InputError("config has no latitude");
  return latitude->build(dimension);
}

namespace {

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!j.is_object()) throw InputError(fmt::format("{} must be a JSON object", where));
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InputError(fmt::format("unknown key '{}' in {}", key, where));
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(fmt::format("config key '{}' is missing", key));
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InputError(fmt::format("config key '{}' must be a nonnegative integer", key));
  return v.get<std::size_t>();
}

EnvelopeSpec parse_envelope(const json& j) {
  reject_unknown(j, {"kind", "threshold", "value", "coefficients"}, "envelope");
  EnvelopeSpec e;
  e.kind = get<std::string>(j, "kind");
  if (e.kind == "heaviside") {
    if (j.contains("threshold")) e.threshold = get<double>(j, "threshold");
    if (!(std::abs(e.threshold) <= 1.0)) throw InputError("heaviside threshold must lie in [-1, 1]");
  } else if (e.kind == "constant") {
    e.value = get<double>(j, "value");
    if (!(e.value >= 0.0 && e.value <= 1.0)) throw InputError("constant envelope must lie in [0, 1]");
  } else if (e.kind == "gegenbauer") {
    e.coefficients = get<std::vector<double>>(j, "coefficients");
    if (e.coefficients.empty()) throw InputError("gegenbauer envelope needs coefficients");
  } else {
    throw InputError(fmt::format("unknown envelope kind '{}'", e.kind));
  }
  return e;
}

LatitudeSpec parse_latitude(const json& j) {
  reject_unknown(j, {"kind", "a", "b"}, "latitude");
  LatitudeSpec l;
  l.kind = get<std::string>(j, "kind");
  if (l.kind == "beta-mixture" || l.kind == "scaled-beta") {
    l.a = get<double>(j, "a");
    l.b = get<double>(j, "b");
    if (!(l.a > 0.0 && l.b > 0.0)) throw InputError("beta parameters must be positive");
  } else if (l.kind != "uniform-null") {
    throw InputError(fmt::format("unknown latitude kind '{}'", l.kind));
  }
  return l;
}

ZetaRule parse_zeta(const json& j) {
  reject_unknown(j, {"rule", "k", "value"}, "zeta");
  ZetaRule z;
  z.rule = get<std::string>(j, "rule");
  if (z.rule == "log-power") {
    z.k = get<double>(j, "k");
    if (!(z.k > 0.0)) throw InputError("log-power exponent must be positive");
  } else if (z.rule == "constant") {
    z.value = get<double>(j, "value");
    if (!(z.value > 0.0 && z.value <= 1.0)) throw InputError("constant sparsity must lie in (0, 1]");
  } else if (z.rule != "dense") {
    throw InputError(fmt::format("unknown sparsity rule '{}'", z.rule));
  }
  return z;
}

void apply_scenario(ExperimentConfig& c) {
  if (c.scenario == "test1") {
    c.n_list = {1500};
    c.envelope = EnvelopeSpec{};
    c.latitude = LatitudeSpec{"beta-mixture", 2.0, 2.0};
  } else if (c.scenario == "sparse") {
    c.n_list = {2000};
    c.envelope = EnvelopeSpec{};
    c.latitude = LatitudeSpec{"beta-mixture", 2.0, 2.0};
    c.zeta = ZetaRule{"log-power", 2.0, 1.0};
  } else if (c.scenario == "linkpred") {
    c.n_list = {2000};
    c.envelope = EnvelopeSpec{};
    c.latitude = LatitudeSpec{"scaled-beta", 5.0, 1.0};
  } else if (c.scenario == "null") {
    c.n_list = {1500};
    c.envelope = EnvelopeSpec{};
    c.latitude = LatitudeSpec{"uniform-null", 1.0, 1.0};
  } else if (c.scenario != "custom") {
    throw InputError(fmt::format("unknown scenario '{}'", c.scenario));
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed config: {}", e.what()));
  }
  reject_unknown(j,
                 {"scenario", "n", "n_list", "d", "envelope", "latitude", "zeta", "seeds", "seed",
                  "output_dir", "alpha", "bins", "trials", "calibration_trials", "batch",
                  "kappa_grid", "bandwidth", "nodes_reported", "graph", "include_points",
                  "error_degree", "latitude_resolution", "jobs"},
                 "config");

  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = get<std::string>(j, "scenario");
  apply_scenario(c);

  if (j.contains("n") && j.contains("n_list")) throw InputError("give either 'n' or 'n_list', not both");
  if (j.contains("n")) c.n_list = {get_count(j, "n")};
  if (j.contains("n_list")) {
    const auto& list = j.at("n_list");
    if (!list.is_array() || list.empty()) throw InputError("'n_list' must be a nonempty array");
    c.n_list.clear();
    for (const auto& v : list) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw InputError("'n_list' entries must be nonnegative integers");
      c.n_list.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("d")) {
    c.dimension = get<int>(j, "d");
    if (c.dimension < 3) throw InputError("'d' must be at least 3");
  }
  if (j.contains("envelope")) c.envelope = parse_envelope(j.at("envelope"));
  if (j.contains("latitude")) c.latitude = parse_latitude(j.at("latitude"));
  if (j.contains("zeta")) c.zeta = parse_zeta(j.at("zeta"));
  if (j.contains("seeds")) c.seeds = get_count(j, "seeds");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("output_dir")) c.output_dir = get<std::string>(j, "output_dir");
  if (j.contains("alpha")) c.alpha = get<double>(j, "alpha");
  if (j.contains("bins")) c.bins = get_count(j, "bins");
  if (j.contains("trials")) c.trials = get_count(j, "trials");
  if (j.contains("calibration_trials")) c.calibration_trials = get_count(j, "calibration_trials");
  if (j.contains("batch")) {
    const auto b = get<std::string>(j, "batch");
    if (b == "resample") c.batch = BatchMode::resample;
    else if (b == "reuse") c.batch = BatchMode::reuse;
    else throw InputError("'batch' must be 'resample' or 'reuse'");
  }
  if (j.contains("kappa_grid")) {
    const auto& k = j.at("kappa_grid");
    reject_unknown(k, {"min", "max", "points"}, "kappa_grid");
    c.kappa_grid = log_spaced(get<double>(k, "min"), get<double>(k, "max"), get_count(k, "points"));
  }
  if (j.contains("bandwidth")) {
    c.bandwidth = get<double>(j, "bandwidth");
    if (c.bandwidth < 0.0) throw InputError("'bandwidth' must be nonnegative");
  }
  if (j.contains("nodes_reported")) c.nodes_reported = get_count(j, "nodes_reported");
  if (j.contains("graph")) c.graph = get<std::string>(j, "graph");
  if (j.contains("include_points")) c.include_points = get<bool>(j, "include_points");
  if (j.contains("error_degree")) c.error_degree = get<int>(j, "error_degree");
  if (j.contains("latitude_resolution")) c.latitude_resolution = get<int>(j, "latitude_resolution");
  if (j.contains("jobs")) c.jobs = static_cast<unsigned>(get_count(j, "jobs"));

  if (c.n_list.empty()) throw InputError("config needs 'n' or 'n_list' (or a scenario)");
  for (auto n : c.n_list)
    if (n < static_cast<std::size_t>(c.dimension) + 2)
      throw InputError(fmt::format("n = {} is too small for d = {}", n, c.dimension));
  if (c.seeds < 1) throw InputError("'seeds' must be at least 1");
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw InputError("'alpha' must lie in (0, 1]");
  if (c.bins < 2) throw InputError("'bins' must be at least 2");
  if (c.error_degree < 0 || c.latitude_resolution < 0)
    throw InputError("spectral comparison degrees must be nonnegative");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  auto config = parse_config(read_text_file(path));
  if (config.graph) {
    std::filesystem::path g(*config.graph);
    if (g.is_relative()) config.graph = (path.parent_path() / g).string();
  }
  return config;
}

namespace {

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InputError(fmt::format("cannot create output directory '{}'", dir.string()));
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Envelope and latitude must be known to simulate.
void require_truth(const ExperimentConfig& config) {
  (void)config.true_envelope();
  (void)config.true_latitude();
}

constexpr std::uint64_t kChainStream = 0;
constexpr std::uint64_t kGraphStream = 1;
constexpr std::uint64_t kAuxStream = 2;

}  // namespace

// --- simulate ---------------------------------------------------------------

GraphFile simulate_graph(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  const auto envelope = config.true_envelope();
  const auto latitude = config.true_latitude();
  const auto chain = sample_chain(n, config.dimension, latitude, derive_seed(seed, 0, kChainStream));
  GraphFile file;
  file.graph = sample_graph(chain, envelope, config.zeta.at(n), derive_seed(seed, 0, kGraphStream));
  file.dimension = config.dimension;
  file.seed = seed;
  if (config.include_points) {
    file.points = chain.points;
    file.jumps = chain.jumps;
  }
  return file;
}

GraphFile cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  auto file = simulate_graph(config, config.n(), config.seed);
  const auto text = graph_to_json(file);
  prepare_dir(out_dir);
  write_text_file(out_dir / "graph.json", text);
  return file;
}

// --- estimate ---------------------------------------------------------------

EstimateResult estimate_graph(const Graph& graph, int dimension, const ExperimentConfig& config) {
  if (graph.size() < static_cast<std::size_t>(dimension) + 1)
    throw InputError(fmt::format("graph with {} nodes is too small for d = {}", graph.size(), dimension));
  const auto spectrum = sym_eigen(build_that(graph), true, SpectrumOrder::by_value_desc);
  auto envelope = estimate_envelope_from_spectrum(spectrum, graph.size(), dimension, graph.zeta(),
                                                  config.kappa_grid, config.jobs);
  auto gram = heic(spectrum, dimension);
  auto latitude = fit_latitude(extract_distances(gram), config.bandwidth);
  EstimateResult out{std::move(envelope), std::move(gram), std::move(latitude), {}};
  for (const auto* list : {&out.envelope.warnings, &out.gram.warnings, &out.latitude.warnings})
    out.warnings.insert(out.warnings.end(), list->begin(), list->end());
  return out;
}

EstimateResult cmd_estimate(const ExperimentConfig& config, const std::filesystem::path& graph_path,
                            const std::filesystem::path& out_dir) {
  const auto file = graph_from_json(read_text_file(graph_path));
  auto result = estimate_graph(file.graph, file.dimension, config);
  const int d = file.dimension;

  std::optional<Envelope> true_env;
  std::optional<LatitudeDistribution> true_lat;
  if (config.envelope) true_env = config.envelope->build(d);
  if (config.latitude) true_lat = config.latitude->build(d);

  CsvTable p_table{"p_hat", {"k", "multiplicity", "p_hat", "p_true"}, {}};
  std::optional<EnvelopeSpectrum> true_spec;
  if (true_env) true_spec = envelope_spectrum(*true_env, d, result.envelope.r_hat);
  for (int k = 0; k <= result.envelope.r_hat; ++k) {
    const double truth = true_spec ? true_spec->coefficients[static_cast<std::size_t>(k)] : std::nan("");
    p_table.add_row({std::to_string(k), std::to_string(harmonic_dim(k, d)),
                     format_double(result.envelope.p_hat[static_cast<std::size_t>(k)]), format_double(truth)});
  }

  constexpr std::size_t kCurvePoints = 401;
  std::vector<double> grid(kCurvePoints);
  for (std::size_t i = 0; i < kCurvePoints; ++i)
    grid[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(kCurvePoints - 1);
  const auto p_hat_curve = reconstruct_envelope(result.envelope.spectrum(), grid, true);
  const auto [lat_grid, f_hat_curve] = result.latitude.density.tabulate(kCurvePoints);

  CsvTable env_table{"envelope_curve", {"t", "p_hat", "p_true"}, {}};
  CsvTable lat_table{"latitude_curve", {"r", "f_hat", "f_true"}, {}};
  std::vector<double> p_true_curve, f_true_curve;
  for (std::size_t i = 0; i < kCurvePoints; ++i) {
    const double pt = true_env ? (*true_env)(grid[i]) : std::nan("");
    const double ft = true_lat ? true_lat->pdf(lat_grid[i]) : std::nan("");
    p_true_curve.push_back(pt);
    f_true_curve.push_back(ft);
    env_table.add_row({format_double(grid[i]), format_double(p_hat_curve[i]), format_double(pt)});
    lat_table.add_row({format_double(lat_grid[i]), format_double(f_hat_curve[i]), format_double(ft)});
  }

  std::vector<ChartSeries> env_series{{"estimate", grid, p_hat_curve, "#1f77b4", false}};
  if (true_env) env_series.push_back({"truth", grid, p_true_curve, "#d62728", true});
  std::vector<ChartSeries> lat_series{{"estimate", lat_grid, f_hat_curve, "#1f77b4", false}};
  if (true_lat) lat_series.push_back({"truth", lat_grid, f_true_curve, "#d62728", true});

  const auto env_json = envelope_estimate_to_json(result.envelope);
  const auto lat_json = latitude_to_json(result.latitude.density);
  const auto env_svg = line_chart_svg("Envelope", "inner product t", "p(t)", env_series);
  const auto lat_svg = line_chart_svg("Latitude", "r", "density", lat_series);

  prepare_dir(out_dir);
  write_text_file(out_dir / "envelope_estimate.json", env_json);
  write_text_file(out_dir / "latitude_estimate.json", lat_json);
  write_text_file(out_dir / "p_hat.csv", format_csv(p_table));
  write_text_file(out_dir / "envelope.csv", format_csv(env_table));
  write_text_file(out_dir / "latitude.csv", format_csv(lat_table));
  write_text_file(out_dir / "envelope.svg", env_svg);
  write_text_file(out_dir / "latitude.svg", lat_svg);
  return result;
}

// --- delta2 sweep -----------------------------------------------------------

std::vector<double> true_envelope_eigenvalues(const Envelope& envelope, int dimension, int degree) {
  const int nodes = std::max(kDefaultQuadratureNodes, 2 * degree + 2);
  return envelope_spectrum(envelope, dimension, degree, nodes).with_multiplicity();
}

std::vector<double> latitude_spectrum(const std::function<double(double)>& pdf, int dimension,
                                      int resolution, std::span<const double> breakpoints) {
  Envelope as_function{pdf, {breakpoints.begin(), breakpoints.end()}, "latitude"};
  const int nodes = std::max(kDefaultQuadratureNodes, 2 * resolution + 2);
  return envelope_spectrum(as_function, dimension, resolution, nodes).with_multiplicity();
}

SweepReplicate run_sweep_replicate(const ExperimentConfig& config, std::size_t n,
                                   std::size_t seed_index) {
  const auto envelope = config.true_envelope();
  const auto latitude = config.true_latitude();
  const int d = config.dimension;
  const auto chain = sample_chain(n, d, latitude, derive_seed(config.seed, seed_index, kChainStream));
  const auto graph = sample_graph(chain, envelope, config.zeta.at(n),
                                  derive_seed(config.seed, seed_index, kGraphStream));
  const auto est = estimate_graph(graph, d, config);

  SweepReplicate rep;
  rep.n = n;
  rep.seed_index = seed_index;
  rep.p_hat = est.envelope.p_hat;
  rep.envelope_error = delta2(true_envelope_eigenvalues(envelope, d, config.error_degree),
                              est.envelope.spectrum().with_multiplicity());
  const auto lat_true = latitude_spectrum([&](double r) { return latitude.pdf(r); }, d,
                                          config.latitude_resolution, latitude.breakpoints());
  const auto lat_hat = latitude_spectrum([&](double r) { return est.latitude.density.pdf(r); }, d,
                                         config.latitude_resolution);
  rep.latitude_error = delta2(lat_true, lat_hat);
  rep.gram_error = (gram_from_points(chain.points) - est.gram.gram).norm();
  rep.gram_trace = est.gram.gram.trace();
  return rep;
}

std::vector<SweepReplicate> run_sweep_replicates(const ExperimentConfig& config) {
  const std::size_t total = config.n_list.size() * config.seeds;
  return parallel_map<SweepReplicate>(total, config.jobs, [&](std::size_t idx) {
    return run_sweep_replicate(config, config.n_list[idx / config.seeds], idx % config.seeds);
  });
}

std::vector<SweepRow> summarize_sweep(const std::vector<SweepReplicate>& replicates) {
  std::vector<std::size_t> ns;
  for (const auto& r : replicates)
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  std::vector<SweepRow> rows;
  for (auto n : ns) {
    std::vector<double> env, lat;
    for (const auto& r : replicates) {
      if (r.n != n) continue;
      env.push_back(r.envelope_error);
      lat.push_back(r.latitude_error);
    }
    rows.push_back({n, env.size(), mean_of(env), sd_of(env), mean_of(lat), sd_of(lat)});
  }
  return rows;
}

std::vector<SweepRow> cmd_sweep_delta2(const ExperimentConfig& config,
                                       const std::filesystem::path& out_dir) {
  if (config.n_list.size() < 2) throw InputError("the sweep needs at least two values in 'n_list'");
  if (std::set<std::size_t>(config.n_list.begin(), config.n_list.end()).size() != config.n_list.size())
    throw InputError("'n_list' values must be distinct");
  require_truth(config);

  const auto replicates = run_sweep_replicates(config);
  const auto rows = summarize_sweep(replicates);

  CsvTable summary{"sweep_delta2",
                   {"n", "seeds", "envelope_error_mean", "envelope_error_sd", "latitude_error_mean",
                    "latitude_error_sd"},
                   {}};
  for (const auto& r : rows)
    summary.add_row({std::to_string(r.n), std::to_string(r.seeds), format_double(r.envelope_mean),
                     format_double(r.envelope_sd), format_double(r.latitude_mean),
                     format_double(r.latitude_sd)});
  CsvTable detail{"sweep_replicates",
                  {"n", "seed", "r_hat", "envelope_error", "latitude_error", "gram_error"},
                  {}};
  for (const auto& r : replicates)
    detail.add_row({std::to_string(r.n), std::to_string(r.seed_index), std::to_string(r.p_hat.size() - 1),
                    format_double(r.envelope_error), format_double(r.latitude_error),
                    format_double(r.gram_error)});

  prepare_dir(out_dir);
  write_text_file(out_dir / "sweep_delta2.csv", format_csv(summary));
  write_text_file(out_dir / "sweep_replicates.csv", format_csv(detail));
  return rows;
}

// --- test power -------------------------------------------------------------

PowerRow run_power(const ExperimentConfig& config, std::size_t n, std::size_t n_index) {
  const auto envelope = config.true_envelope();
  const auto alternative = config.true_latitude();
  const auto null = LatitudeDistribution::uniform_null(config.dimension);
  const double zeta = config.zeta.at(n);
  const MarkovTestConfig test{config.dimension, config.alpha, config.bins, config.batch};

  const auto base = derive_seed(config.seed, n_index, 0x7e57);
  const auto calibration = calibrate_threshold(n, envelope, zeta, test, config.calibration_trials,
                                               derive_seed(base, 0), config.jobs);

  auto run = [&](const LatitudeDistribution& lat, std::uint64_t stream) {
    const auto trial_seed = derive_seed(base, stream);
    return parallel_map<TestReport>(config.trials, config.jobs, [&](std::size_t t) {
      const auto chain = sample_chain(n, config.dimension, lat, derive_seed(trial_seed, t, kChainStream));
      const auto graph = sample_graph(chain, envelope, zeta, derive_seed(trial_seed, t, kGraphStream));
      Rng rng(derive_seed(trial_seed, t, kAuxStream));
      return markov_test(graph, test, calibration.threshold, config.calibration_trials, rng);
    });
  };

  PowerRow row;
  row.n = n;
  row.threshold = calibration.threshold;
  row.trials = config.trials;
  row.calibration_trials = config.calibration_trials;
  auto rate = [&](const std::vector<TestReport>& reports) {
    std::size_t rejected = 0;
    for (const auto& r : reports) {
      rejected += r.reject ? 1 : 0;
      row.invalid += r.valid ? 0 : 1;
    }
    return static_cast<double>(rejected) / static_cast<double>(reports.size());
  };
  row.null_rate = rate(run(null, 1));
  row.alternative_rate = rate(run(alternative, 2));
  return row;
}

std::vector<PowerRow> cmd_test_power(const ExperimentConfig& config,
                                     const std::filesystem::path& out_dir) {
  if (config.trials < 100) throw InputError("'trials' must be at least 100");
  if (config.calibration_trials < 100) throw InputError("'calibration_trials' must be at least 100");
  require_truth(config);

  std::vector<PowerRow> rows;
  for (std::size_t i = 0; i < config.n_list.size(); ++i) rows.push_back(run_power(config, config.n_list[i], i));

  CsvTable table{"test_power",
                 {"n", "threshold", "null_rejection_rate", "alternative_rejection_rate", "trials",
                  "calibration_trials", "invalid"},
                 {}};
  for (const auto& r : rows)
    table.add_row({std::to_string(r.n), format_double(r.threshold), format_double(r.null_rate),
                   format_double(r.alternative_rate), std::to_string(r.trials),
                   std::to_string(r.calibration_trials), std::to_string(r.invalid)});
  prepare_dir(out_dir);
  write_text_file(out_dir / "test_power.csv", format_csv(table));
  return rows;
}

// --- link prediction --------------------------------------------------------

LinkpredReplicate run_linkpred_replicate(const ExperimentConfig& config, std::size_t seed_index) {
  const auto envelope = config.true_envelope();
  const auto latitude = config.true_latitude();
  const auto null = LatitudeDistribution::uniform_null(config.dimension);
  const std::size_t n = config.n();
  const auto chain = sample_chain(n, config.dimension, latitude,
                                  derive_seed(config.seed, seed_index, kChainStream));
  const auto graph = sample_graph(chain, envelope, config.zeta.at(n),
                                  derive_seed(config.seed, seed_index, kGraphStream));
  const auto est = estimate_graph(graph, config.dimension, config);

  // the incoming node follows node n, so only <X_i, X_n> matters
  const auto last = static_cast<Eigen::Index>(n - 1);
  std::vector<double> r_true(n), r_hat(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    r_true[i] = std::clamp(chain.points.row(ii).dot(chain.points.row(last)), -1.0, 1.0);
    r_hat[i] = std::clamp(static_cast<double>(n) * est.gram.gram(ii, last), -1.0, 1.0);
  }

  LinkpredReplicate rep;
  rep.seed_index = seed_index;
  rep.oracle = posterior_link_probs(r_true, envelope, [&](double r) { return latitude.pdf(r); },
                                    PosteriorSource::oracle, kPosteriorNodes, latitude.breakpoints());
  rep.plugin = posterior_link_probs(r_hat, est.envelope.envelope(),
                                    [&](double r) { return est.latitude.density.pdf(r); },
                                    PosteriorSource::plugin);
  rep.uniform = posterior_link_probs(r_true, envelope, [&](double r) { return null.pdf(r); },
                                     PosteriorSource::uniform_null);

  Rng rng(derive_seed(config.seed, seed_index, kAuxStream));
  rep.risk_bayes = risk(rep.oracle, classify(rep.oracle));
  rep.risk_mrgg = risk(rep.oracle, classify(rep.plugin));
  rep.risk_random = risk(rep.oracle, random_classifier(graph, rng));

  const std::size_t shown = std::min(config.nodes_reported, n);
  double err = 0.0;
  for (std::size_t i = 0; i < shown; ++i) err += std::abs(rep.plugin.eta[i] - rep.oracle.eta[i]);
  rep.plugin_error = shown ? err / static_cast<double>(shown) : 0.0;
  return rep;
}

LinkpredSummary cmd_linkpred(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  require_truth(config);
  if (config.n_list.size() != 1) throw InputError("link prediction takes a single 'n'");

  LinkpredSummary s;
  s.replicates = parallel_map<LinkpredReplicate>(
      config.seeds, config.jobs, [&](std::size_t k) { return run_linkpred_replicate(config, k); });
  std::vector<double> bayes, mrgg, random, gap, plugin;
  for (const auto& r : s.replicates) {
    bayes.push_back(r.risk_bayes);
    mrgg.push_back(r.risk_mrgg);
    random.push_back(r.risk_random);
    gap.push_back(r.risk_random - r.risk_mrgg);
    plugin.push_back(r.plugin_error);
  }
  s.mean_bayes = mean_of(bayes);
  s.mean_mrgg = mean_of(mrgg);
  s.mean_random = mean_of(random);
  s.gap_se = sd_of(gap) / std::sqrt(static_cast<double>(gap.size()));
  s.mean_plugin_error = mean_of(plugin);

  CsvTable nodes{"linkpred_nodes",
                 {"seed", "node", "eta_oracle", "eta_plugin", "eta_uniform", "label_bayes", "label_mrgg"},
                 {}};
  for (const auto& r : s.replicates) {
    const auto bayes_labels = classify(r.oracle).labels;
    const auto mrgg_labels = classify(r.plugin).labels;
    for (std::size_t i = 0; i < std::min(config.nodes_reported, r.oracle.eta.size()); ++i)
      nodes.add_row({std::to_string(r.seed_index), std::to_string(i), format_double(r.oracle.eta[i]),
                     format_double(r.plugin.eta[i]), format_double(r.uniform.eta[i]),
                     std::to_string(bayes_labels[i]), std::to_string(mrgg_labels[i])});
  }
  CsvTable risks{"linkpred_risk", {"seed", "risk_bayes", "risk_mrgg", "risk_random", "plugin_error"}, {}};
  for (const auto& r : s.replicates)
    risks.add_row({std::to_string(r.seed_index), format_double(r.risk_bayes), format_double(r.risk_mrgg),
                   format_double(r.risk_random), format_double(r.plugin_error)});

  json summary;
  summary["seeds"] = config.seeds;
  summary["n"] = config.n();
  summary["mean_risk_bayes"] = s.mean_bayes;
  summary["mean_risk_mrgg"] = s.mean_mrgg;
  summary["mean_risk_random"] = s.mean_random;
  summary["random_minus_mrgg_se"] = s.gap_se;
  summary["mean_plugin_error"] = s.mean_plugin_error;

  prepare_dir(out_dir);
  write_text_file(out_dir / "linkpred_nodes.csv", format_csv(nodes));
  write_text_file(out_dir / "linkpred_risk.csv", format_csv(risks));
  write_text_file(out_dir / "linkpred_summary.json", summary.dump(2) + "\n");
  return s;
}

}  // namespace mrgg
