#include "mrgg/io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mrgg_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" MRGG_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("simulate --help") == 0);
  CHECK(run("") == 2);
  CHECK(run("bogus") == 2);
  CHECK(run("simulate") == 2);
  CHECK(run("simulate --config /nonexistent/config.json --out /tmp") == 2);
}

TEST_CASE("config errors exit with status 2") {
  const auto dir = scratch("config");
  mrgg::write_text_file(dir / "bad.json", R"({"scenario": "test1", "colour": 3})");
  CHECK(run("simulate --config " + quoted(dir / "bad.json") + " --out " + quoted(dir / "out")) == 2);
  mrgg::write_text_file(dir / "noout.json", R"({"scenario": "test1", "n": 20})");
  CHECK(run("simulate --config " + quoted(dir / "noout.json")) == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("malformed graph: status 2 and no outputs") {
  const auto dir = scratch("malformed");
  mrgg::write_text_file(dir / "c.json", R"({"n": 20})");
  mrgg::write_text_file(dir / "graph.json", R"({"n": 2, "d": 3, "zeta": 1, "adjacency": "QAA="})");
  const auto out = dir / "out";
  CHECK(run("estimate --config " + quoted(dir / "c.json") + " --graph " + quoted(dir / "graph.json") +
            " --out " + quoted(out)) == 2);
  CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("simulate and estimate round trip deterministically") {
  const auto dir = scratch("roundtrip");
  mrgg::write_text_file(dir / "c.json", R"({"scenario": "test1", "n": 80, "output_dir": "unused"})");
  const auto cfg = quoted(dir / "c.json");
  CHECK(run("simulate --config " + cfg + " --out " + quoted(dir / "a") + " --seed 5") == 0);
  CHECK(run("simulate --config " + cfg + " --out " + quoted(dir / "b") + " --seed 5", "MRGG_JOBS=2") == 0);
  CHECK(run("simulate --config " + cfg + " --out " + quoted(dir / "c") + " --seed 6") == 0);
  const auto a = mrgg::read_text_file(dir / "a" / "graph.json");
  CHECK(a == mrgg::read_text_file(dir / "b" / "graph.json"));
  CHECK(a != mrgg::read_text_file(dir / "c" / "graph.json"));

  CHECK(run("estimate --config " + cfg + " --out " + quoted(dir / "a") + " --jobs 2") == 0);
  CHECK(fs::exists(dir / "a" / "p_hat.csv"));
  CHECK(fs::exists(dir / "a" / "latitude.svg"));
  // input untouched
  CHECK(mrgg::read_text_file(dir / "a" / "graph.json") == a);
}

TEST_CASE("sweep and linkpred commands") {
  const auto dir = scratch("cmds");
  mrgg::write_text_file(dir / "s.json", R"({"scenario": "test1", "n_list": [30, 40], "seeds": 2})");
  CHECK(run("sweep-delta2 --config " + quoted(dir / "s.json") + " --out " + quoted(dir / "s")) == 0);
  CHECK(fs::exists(dir / "s" / "sweep_delta2.csv"));
  mrgg::write_text_file(dir / "one.json", R"({"scenario": "test1", "n": 30})");
  CHECK(run("sweep-delta2 --config " + quoted(dir / "one.json") + " --out " + quoted(dir / "x")) == 2);

  mrgg::write_text_file(dir / "l.json", R"({"scenario": "linkpred", "n": 60, "seeds": 2})");
  CHECK(run("linkpred --config " + quoted(dir / "l.json") + " --out " + quoted(dir / "l")) == 0);
  CHECK(fs::exists(dir / "l" / "linkpred_summary.json"));

  mrgg::write_text_file(dir / "p.json", R"({"scenario": "test1", "n": 30, "trials": 0})");
  CHECK(run("test-power --config " + quoted(dir / "p.json") + " --out " + quoted(dir / "p")) == 2);
}
