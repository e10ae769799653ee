// mrgg command-line front end.

#include "mrgg/mrgg.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <optional>
#include <string>

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string graph;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out, "output directory (defaults to the config's output_dir)");
  cmd->add_option("--seed", opt.seed, "master seed, overrides the config");
  cmd->add_option("--jobs", opt.jobs, "worker threads (MRGG_JOBS wins; 0 = all cores)");
}

mrgg::ExperimentConfig load(const Options& opt, std::filesystem::path& out_dir) {
  auto config = mrgg::load_config(opt.config);
  if (opt.seed) config.seed = *opt.seed;
  config.jobs = mrgg::resolve_jobs(opt.jobs);
  if (!opt.out.empty()) out_dir = opt.out;
  else if (config.output_dir) out_dir = *config.output_dir;
  else throw mrgg::InputError("no output directory: pass --out or set output_dir");
  return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

int run_simulate(const Options& opt) {
  std::filesystem::path out;
  const auto config = load(opt, out);
  const auto file = mrgg::cmd_simulate(config, out);
  fmt::print("simulated n={} d={} edges={} -> {}\n", file.graph.size(), file.dimension,
             file.graph.edge_count(), (out / "graph.json").string());
  return 0;
}

int run_estimate(const Options& opt) {
  std::filesystem::path out;
  const auto config = load(opt, out);
  std::filesystem::path graph;
  if (!opt.graph.empty()) graph = opt.graph;
  else if (config.graph) graph = *config.graph;
  else graph = out / "graph.json";
  const auto result = mrgg::cmd_estimate(config, graph, out);
  print_warnings(result.warnings);
  fmt::print("R_hat={} kappa0={:.4g} p_hat_0={:.4f} bandwidth={:.4g}\n", result.envelope.r_hat,
             result.envelope.kappa0, result.envelope.p_hat.front(), result.latitude.density.bandwidth());
  return 0;
}

int run_sweep(const Options& opt) {
  std::filesystem::path out;
  const auto config = load(opt, out);
  for (const auto& row : mrgg::cmd_sweep_delta2(config, out))
    fmt::print("n={} envelope_error={:.4g} (sd {:.3g}) latitude_error={:.4g} (sd {:.3g})\n", row.n,
               row.envelope_mean, row.envelope_sd, row.latitude_mean, row.latitude_sd);
  return 0;
}

int run_power(const Options& opt) {
  std::filesystem::path out;
  const auto config = load(opt, out);
  for (const auto& row : mrgg::cmd_test_power(config, out))
    fmt::print("n={} threshold={:.4g} null_rate={:.3f} alternative_rate={:.3f}\n", row.n, row.threshold,
               row.null_rate, row.alternative_rate);
  return 0;
}

int run_linkpred(const Options& opt) {
  std::filesystem::path out;
  const auto config = load(opt, out);
  const auto s = mrgg::cmd_linkpred(config, out);
  fmt::print("risk bayes={:.4f} mrgg={:.4f} random={:.4f} (gap se {:.3g}) plugin_error={:.4f}\n",
             s.mean_bayes, s.mean_mrgg, s.mean_random, s.gap_se, s.mean_plugin_error);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov random geometric graphs: simulation, estimation and inference"};
  app.require_subcommand(1);
  Options opt;

  auto* simulate = app.add_subcommand("simulate", "sample a latent chain and its graph");
  auto* estimate = app.add_subcommand("estimate", "estimate envelope and latitude from a graph");
  auto* sweep = app.add_subcommand("sweep-delta2", "estimation error across graph sizes");
  auto* power = app.add_subcommand("test-power", "level and power of the Markov dynamics test");
  auto* linkpred = app.add_subcommand("linkpred", "link prediction risks for an incoming node");
  for (auto* cmd : {simulate, estimate, sweep, power, linkpred}) add_common(cmd, opt);
  estimate->add_option("--graph", opt.graph, "graph file (defaults to the config's graph or <out>/graph.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return run_simulate(opt);
    if (*estimate) return run_estimate(opt);
    if (*sweep) return run_sweep(opt);
    if (*power) return run_power(opt);
    if (*linkpred) return run_linkpred(opt);
  } catch (const mrgg::InputError& e) {
    fmt::print(stderr, "input error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 2;
}
