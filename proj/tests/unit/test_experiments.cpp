#include "mrgg/error.hpp"
#include "mrgg/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

using namespace mrgg;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mrgg_test_experiments" / name;
  fs::remove_all(dir);
  return dir;
}

std::size_t file_count(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return static_cast<std::size_t>(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

}  // namespace

TEST_CASE("scenario presets") {
  const auto t1 = parse_config(R"({"scenario": "test1"})");
  CHECK(t1.n() == 1500);
  CHECK(t1.dimension == 3);
  CHECK(t1.true_envelope().name == Envelope::heaviside().name);
  CHECK(t1.true_latitude().kind() == LatitudeKind::beta_mixture);
  CHECK(t1.zeta.at(1500) == 1.0);

  const auto sparse = parse_config(R"({"scenario": "sparse"})");
  CHECK(sparse.n() == 2000);
  CHECK(sparse.zeta.at(2000) == doctest::Approx(std::pow(std::log(2000.0), 2) / 2000));

  const auto lp = parse_config(R"({"scenario": "linkpred", "n": 300})");
  CHECK(lp.n() == 300);
  CHECK(lp.true_latitude().kind() == LatitudeKind::scaled_beta);
  CHECK(lp.true_latitude().a() == 5.0);

  const auto null = parse_config(R"({"scenario": "null", "d": 4})");
  CHECK(null.true_latitude().kind() == LatitudeKind::uniform_null);
  CHECK(null.true_latitude().dimension() == 4);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(parse_config(R"({"scenario": "test1", "colour": 1})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "envelope": {"kind": "heaviside", "slope": 2}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "zeta": {"rule": "log-power", "k": 2, "z": 1}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "kappa_grid": {"min": 1e-5, "max": 1e-1}})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "n_list": [100, 200]})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 4})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "d": 2})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "seeds": 0})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "alpha": 0})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "bins": 1})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "batch": "sometimes"})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": "100"})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": -5})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "fig9"})"), InputError);
  CHECK_THROWS_AS(parse_config(R"({"n": 100, "latitude": {"kind": "beta-mixture", "a": -1, "b": 2}})"),
                  InputError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), InputError);
  CHECK_THROWS_AS(parse_config("{"), InputError);
  CHECK_THROWS_AS(parse_config("{}"), InputError);
}

TEST_CASE("load_config resolves graph paths next to the config") {
  const auto dir = scratch("load");
  fs::create_directories(dir);
  write_text_file(dir / "c.json", R"({"n": 50, "graph": "g.json"})");
  const auto c = load_config(dir / "c.json");
  REQUIRE(c.graph);
  CHECK(fs::path(*c.graph) == dir / "g.json");
  CHECK_THROWS_AS(load_config(dir / "missing.json"), InputError);
}

TEST_CASE("simulate writes deterministic graph files") {
  auto c = parse_config(R"({"n": 10, "envelope": {"kind": "constant", "value": 0}, "latitude": {"kind": "uniform-null"}, "seed": 4})");
  const auto dir = scratch("simulate");
  const auto file = cmd_simulate(c, dir);
  CHECK(file.graph.edge_count() == 0);
  const auto first = read_text_file(dir / "graph.json");
  cmd_simulate(c, dir / "again");
  CHECK(read_text_file(dir / "again" / "graph.json") == first);
  const auto back = graph_from_json(first);
  REQUIRE(back.points);
  for (Eigen::Index i = 0; i < back.points->rows(); ++i)
    CHECK(std::abs(back.points->row(i).norm() - 1.0) < 1e-12);

  c.include_points = false;
  CHECK_FALSE(cmd_simulate(c, dir / "bare").points);

  const auto unknown_truth = parse_config(R"({"n": 10})");
  CHECK_THROWS_AS(cmd_simulate(unknown_truth, dir / "none"), InputError);
}

TEST_CASE("estimate writes all artifacts") {
  const auto c = parse_config(R"({"scenario": "test1", "n": 120, "seed": 2})");
  const auto dir = scratch("estimate");
  cmd_simulate(c, dir);
  const auto res = cmd_estimate(c, dir / "graph.json", dir / "est");
  for (const char* f : {"envelope_estimate.json", "latitude_estimate.json", "p_hat.csv", "envelope.csv",
                        "latitude.csv", "envelope.svg", "latitude.svg"})
    CHECK(fs::exists(dir / "est" / f));
  const auto p = parse_csv(read_text_file(dir / "est" / "p_hat.csv"), "p_hat");
  CHECK(p.rows.size() == static_cast<std::size_t>(res.envelope.r_hat) + 1);
  CHECK(std::stod(p.rows[0][p.column("p_true")]) == doctest::Approx(0.5));
  const auto env = parse_csv(read_text_file(dir / "est" / "envelope.csv"), "envelope_curve");
  CHECK(env.rows.size() == 401);
  const auto est = envelope_estimate_from_json(read_text_file(dir / "est" / "envelope_estimate.json"));
  CHECK(est.p_hat == res.envelope.p_hat);
  CHECK(read_text_file(dir / "est" / "envelope.svg").find("<svg") != std::string::npos);

  // truth unknown: curves carry NaN in the truth column
  const auto blind = parse_config(R"({"n": 120})");
  cmd_estimate(blind, dir / "graph.json", dir / "blind");
  const auto lat = parse_csv(read_text_file(dir / "blind" / "latitude.csv"), "latitude_curve");
  CHECK(lat.rows[0][lat.column("f_true")] == "nan");
}

TEST_CASE("estimate leaves no partial outputs on bad input") {
  const auto c = parse_config(R"({"n": 50})");
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  write_text_file(dir / "graph.json", R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QAA="})");
  CHECK_THROWS_AS(cmd_estimate(c, dir / "graph.json", dir / "out"), InputError);
  CHECK(file_count(dir / "out") == 0);
  CHECK_THROWS_AS(cmd_estimate(c, dir / "nothing.json", dir / "out"), InputError);
  CHECK(file_count(dir / "out") == 0);
}

TEST_CASE("sparse estimates rescale by zeta") {
  const auto c = parse_config(R"({"scenario": "sparse", "n": 300, "seed": 1})");
  const auto dir = scratch("sparse");
  const auto file = cmd_simulate(c, dir);
  CHECK(file.graph.zeta() == doctest::Approx(std::pow(std::log(300.0), 2) / 300));
  const auto res = cmd_estimate(c, dir / "graph.json", dir / "est");
  CHECK(res.envelope.zeta == file.graph.zeta());
  CHECK(std::isfinite(res.envelope.p_hat[0]));
}

TEST_CASE("delta2 sweep") {
  auto c = parse_config(R"({"scenario": "test1", "n_list": [40, 60], "seeds": 1, "seed": 3})");
  const auto dir = scratch("sweep");
  const auto rows = cmd_sweep_delta2(c, dir);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.envelope_sd == 0.0);
    CHECK(r.latitude_sd == 0.0);
    CHECK(r.envelope_mean > 0.0);
  }
  const auto t = parse_csv(read_text_file(dir / "sweep_delta2.csv"), "sweep_delta2");
  CHECK(t.rows.size() == 2);

  c.seeds = 3;
  cmd_sweep_delta2(c, dir / "a");
  c.jobs = 3;
  cmd_sweep_delta2(c, dir / "b");
  CHECK(read_text_file(dir / "a" / "sweep_delta2.csv") == read_text_file(dir / "b" / "sweep_delta2.csv"));
  CHECK(read_text_file(dir / "a" / "sweep_replicates.csv") ==
        read_text_file(dir / "b" / "sweep_replicates.csv"));

  const auto reps = run_sweep_replicates(c);
  CHECK(reps.size() == 6);
  for (const auto& r : reps) CHECK(std::abs(r.gram_trace - 1.0) < 1e-8);

  auto one = parse_config(R"({"scenario": "test1", "n": 40})");
  CHECK_THROWS_AS(cmd_sweep_delta2(one, dir / "one"), InputError);
  auto dup = parse_config(R"({"scenario": "test1", "n_list": [40, 40]})");
  CHECK_THROWS_AS(cmd_sweep_delta2(dup, dir / "dup"), InputError);
}

TEST_CASE("spectral comparison helpers") {
  const auto eig = true_envelope_eigenvalues(Envelope::heaviside(), 3, 3);
  // 0.5 once, 0.25 three times, 0 five times, -1/16 seven times
  REQUIRE(eig.size() == 16);
  CHECK(eig[0] == doctest::Approx(0.5));
  CHECK(eig[3] == doctest::Approx(0.25));
  CHECK(std::abs(eig[4]) < 1e-12);
  CHECK(eig[15] == doctest::Approx(-0.0625));
  const auto null = LatitudeDistribution::uniform_null(3);
  const auto ls = latitude_spectrum([&](double r) { return null.pdf(r); }, 3, 4);
  CHECK(ls.size() == 25);
  CHECK(ls[0] == doctest::Approx(0.5));
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(std::abs(ls[i]) < 1e-12);
}

TEST_CASE("test-power input checks") {
  auto c = parse_config(R"({"scenario": "test1", "n": 40, "trials": 0})");
  const auto dir = scratch("power");
  CHECK_THROWS_AS(cmd_test_power(c, dir), InputError);
  c.trials = 100;
  c.calibration_trials = 99;
  CHECK_THROWS_AS(cmd_test_power(c, dir), InputError);
  CHECK(file_count(dir) == 0);
}

TEST_CASE("test-power on a small graph") {
  auto c = parse_config(R"({"scenario": "test1", "n": 30, "trials": 100, "calibration_trials": 100, "bins": 10})");
  const auto dir = scratch("power_small");
  const auto rows = cmd_test_power(c, dir);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].null_rate >= 0.0);
  CHECK(rows[0].null_rate <= 1.0);
  CHECK(rows[0].alternative_rate <= 1.0);
  CHECK(rows[0].trials == 100);
  const auto t = parse_csv(read_text_file(dir / "test_power.csv"), "test_power");
  CHECK(t.rows.size() == 1);
}

TEST_CASE("link prediction with p = 1") {
  auto c = parse_config(R"({"n": 40, "seeds": 2, "envelope": {"kind": "constant", "value": 1},
                            "latitude": {"kind": "scaled-beta", "a": 5, "b": 1}})");
  const auto dir = scratch("linkpred_one");
  const auto s = cmd_linkpred(c, dir);
  REQUIRE(s.replicates.size() == 2);
  for (const auto& r : s.replicates) {
    for (double e : r.oracle.eta) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    // the zero diagonal of A / n pulls p_hat_0 to (n - 1) / n
    for (double e : r.plugin.eta) CHECK(e >= 0.9);
    CHECK(r.risk_bayes == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.risk_mrgg == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.risk_random == doctest::Approx(0.0).epsilon(1e-12));
  }
  const auto nodes = parse_csv(read_text_file(dir / "linkpred_nodes.csv"), "linkpred_nodes");
  CHECK(nodes.rows.size() == 2 * 10);
  CHECK(fs::exists(dir / "linkpred_risk.csv"));
  CHECK(fs::exists(dir / "linkpred_summary.json"));
}

TEST_CASE("link prediction is deterministic and Bayes dominates") {
  auto c = parse_config(R"({"scenario": "linkpred", "n": 150, "seeds": 3, "seed": 8})");
  const auto a = scratch("lp_a");
  const auto b = scratch("lp_b");
  const auto s = cmd_linkpred(c, a);
  c.jobs = 2;
  cmd_linkpred(c, b);
  CHECK(read_text_file(a / "linkpred_nodes.csv") == read_text_file(b / "linkpred_nodes.csv"));
  CHECK(read_text_file(a / "linkpred_risk.csv") == read_text_file(b / "linkpred_risk.csv"));
  for (const auto& r : s.replicates) CHECK(r.risk_bayes <= r.risk_mrgg + 1e-12);
  auto two = parse_config(R"({"scenario": "linkpred", "n_list": [50, 60]})");
  CHECK_THROWS_AS(cmd_linkpred(two, a / "x"), InputError);
}
