#include "mrgg/error.hpp"
#include "mrgg/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

using namespace mrgg;

TEST_CASE("base64 round trips and known vectors") {
  const std::string text = "foobar";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  CHECK(base64_encode(std::span(bytes).first(0)).empty());
  CHECK(base64_encode(std::span(bytes).first(1)) == "Zg==");
  CHECK(base64_encode(std::span(bytes).first(2)) == "Zm8=");
  CHECK(base64_encode(bytes) == "Zm9vYmFy");
  CHECK(base64_decode("Zm9vYg==") == std::vector<std::uint8_t>{'f', 'o', 'o', 'b'});
  Rng rng(1);
  for (int len = 0; len < 40; ++len) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(len));
    for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 0xff);
    CHECK(base64_decode(base64_encode(v)) == v);
  }
  CHECK_THROWS_AS(base64_decode("abc"), InputError);
  CHECK_THROWS_AS(base64_decode("ab!d"), InputError);
  CHECK_THROWS_AS(base64_decode("a=bc"), InputError);
}

TEST_CASE("graph files round trip") {
  const auto chain = sample_chain(37, 4, LatitudeDistribution::beta_mixture(2, 2), 3);
  GraphFile file{sample_graph(chain, Envelope::heaviside(), 0.8, 4), 4, 99, chain.points, chain.jumps};
  const auto back = graph_from_json(graph_to_json(file));
  CHECK(back.graph.size() == 37);
  CHECK(back.graph.zeta() == 0.8);
  CHECK(back.dimension == 4);
  CHECK(back.seed == 99);
  CHECK(std::equal(back.graph.adjacency().begin(), back.graph.adjacency().end(),
                   file.graph.adjacency().begin()));
  REQUIRE(back.points);
  CHECK(*back.points == chain.points);
  REQUIRE(back.jumps);
  CHECK(*back.jumps == chain.jumps);

  GraphFile bare{Graph(5), 3, 0, std::nullopt, std::nullopt};
  const auto b2 = graph_from_json(graph_to_json(bare));
  CHECK(b2.graph.edge_count() == 0);
  CHECK_FALSE(b2.points);
}

TEST_CASE("malformed graph files are rejected") {
  CHECK_THROWS_AS(graph_from_json("{"), InputError);
  CHECK_THROWS_AS(graph_from_json("[]"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 3, "zeta": 1})"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": -2, "d": 3, "zeta": 1, "adjacency": ""})"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": "2", "d": 3, "zeta": 1, "adjacency": "QIA="})"), InputError);
  // rows 0b01000000, 0b10000000 encode the single edge {0, 1}
  CHECK(graph_from_json(R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QIA="})").graph.edge(0, 1));
  // asymmetric: row 0 has the edge, row 1 does not
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QAA="})"), InputError);
  // wrong byte count
  CHECK_THROWS_AS(graph_from_json(R"({"n": 3, "d": 3, "zeta": 1, "adjacency": "QIA="})"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 2, "zeta": 1, "adjacency": "QIA="})"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 3, "zeta": 0, "adjacency": "QIA="})"), InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QIA=", "points": [1, 0]})"),
                  InputError);
  CHECK_THROWS_AS(graph_from_json(R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QIA=", "jumps": [0.1, 0.2]})"),
                  InputError);
}

TEST_CASE("envelope estimates round trip") {
  EnvelopeEstimate e;
  e.dimension = 3;
  e.r_hat = 2;
  e.kappa0 = 1.2589254117941673e-4;
  e.zeta = 0.25;
  e.p_hat = {0.5, 0.2491, -0.06};
  e.intra_class_variance = {0.1, 0.01, 0.001, 0.0009};
  e.warnings = {"something odd"};
  const auto back = envelope_estimate_from_json(envelope_estimate_to_json(e));
  CHECK(back.dimension == 3);
  CHECK(back.r_hat == 2);
  CHECK(back.kappa0 == e.kappa0);
  CHECK(back.zeta == 0.25);
  CHECK(back.p_hat == e.p_hat);
  CHECK(back.intra_class_variance == e.intra_class_variance);
  CHECK(back.warnings == e.warnings);
  CHECK_THROWS_AS(envelope_estimate_from_json(R"({"d": 3, "R_hat": 1, "kappa0": 0.1, "p_hat": [0.5],
                                                 "intra_class_variance": []})"),
                  InputError);
  CHECK_THROWS_AS(envelope_estimate_from_json(R"({"d": 3, "R_hat": "one"})"), InputError);
}

TEST_CASE("latitude densities round trip") {
  const LatitudeDensity d({-0.3, 0.1, 0.12, 0.8}, 0.07);
  const auto back = latitude_from_json(latitude_to_json(d, 11));
  CHECK(back.samples() == d.samples());
  CHECK(back.bandwidth() == d.bandwidth());
  for (double r : {-1.0, -0.2, 0.1, 0.95}) CHECK(back.pdf(r) == d.pdf(r));
  CHECK_THROWS_AS(latitude_from_json(R"({"samples": [0.1, 0.2], "bandwidth": -1})"), InputError);
}

TEST_CASE("test reports round trip") {
  TestReport r{123.5, 98.25, 0.05, true, 200, 70, true, ""};
  const auto back = test_report_from_json(test_report_to_json(r));
  CHECK(back.statistic == r.statistic);
  CHECK(back.threshold == r.threshold);
  CHECK(back.reject);
  CHECK(back.mc_trials == 200);
  CHECK(back.bins == 70);
  CHECK(back.valid);
  TestReport bad{0, 1, 0.05, false, 10, 70, false, "heic failed"};
  const auto b2 = test_report_from_json(test_report_to_json(bad));
  CHECK_FALSE(b2.valid);
  CHECK_FALSE(b2.reject);
  CHECK(b2.error == "heic failed");
  CHECK_THROWS_AS(test_report_from_json(R"({"statistic": 1, "threshold": 0, "alpha": 0.05,
      "decision": "maybe", "mc_trials": 1, "bins": 2})"),
                  InputError);
}

TEST_CASE("format_double is shortest round trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e22, 0.0, 123456789.125}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV tables round trip and validate") {
  CsvTable t{"sweep_delta2", {"n", "error"}, {}};
  t.add_row({"300", format_double(0.125)});
  t.add_row({"1500", format_double(0.0625)});
  CHECK_THROWS_AS(t.add_row({"1"}), InputError);
  const auto text = format_csv(t);
  CHECK(text.rfind("# mrgg sweep_delta2 v1\nn,error\n", 0) == 0);
  const auto back = parse_csv(text, "sweep_delta2");
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("error") == 1);
  CHECK_THROWS_AS(static_cast<void>(back.column("missing")), InputError);

  CHECK_THROWS_AS(parse_csv(text, "test_power"), InputError);
  CHECK_THROWS_AS(parse_csv("# mrgg sweep_delta2 v2\nn,error\n"), InputError);
  CHECK_THROWS_AS(parse_csv("n,error\n1,2\n"), InputError);
  CHECK_THROWS_AS(parse_csv("# mrgg x v1\n"), InputError);
  CHECK_THROWS_AS(parse_csv("# mrgg x v1\na,b\n1,2,3\n"), InputError);
  CHECK(parse_csv("# mrgg x v1\r\na,b\r\n1,2\r\n").rows.size() == 1);
}

TEST_CASE("text files") {
  const auto dir = std::filesystem::temp_directory_path() / "mrgg_test_io";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "a.txt", "hello\n");
  CHECK(read_text_file(dir / "a.txt") == "hello\n");
  CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), InputError);
  CHECK_THROWS_AS(write_text_file(dir / "no" / "such" / "dir.txt", "x"), InputError);
  std::filesystem::remove_all(dir);
}
