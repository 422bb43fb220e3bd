#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "snrlab/pipelines.hpp"

using namespace snrlab;
using io::Json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("snrlab_pipelines_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("list and grid parsers") {
  CHECK(parse_row_list("1..3") == std::vector<int>{1, 2, 3});
  CHECK(parse_row_list("1,4,7..9") == std::vector<int>{1, 4, 7, 8, 9});
  CHECK(parse_row_list("1..35").size() == 35);
  CHECK_THROWS_AS(parse_row_list("0..3"), SpecError);
  CHECK_THROWS_AS(parse_row_list("5..2"), SpecError);
  CHECK_THROWS_AS(parse_row_list("x"), SpecError);
  const auto ps = parse_exponent_list("1,2,inf");
  REQUIRE(ps.size() == 3);
  CHECK(ps[2].is_infinite());
  CHECK(parse_grid("16x8") == std::pair<std::size_t, std::size_t>{16, 8});
  CHECK_THROWS_AS(parse_grid("16"), SpecError);
  CHECK_THROWS_AS(parse_grid("0x8"), SpecError);
}

TEST_CASE("estimate reruns are byte-identical and carry a manifest") {
  const Json cfg{{"table_row", 2}, {"p", "2"}, {"element", "1+1i,2"}, {"samples", 3000},
                 {"out", (scratch() / "e.csv").string()}, {"dump_functionals", true}};
  const RunResult a = run_pipeline("estimate", cfg);
  const RunResult b = run_pipeline("estimate", cfg);
  CHECK(a.exit_code == 0);
  CHECK(a.report.dump() == b.report.dump());
  REQUIRE(a.artifacts.size() == 2);
  CHECK(a.artifacts[0].content == b.artifacts[0].content);
  CHECK(a.report_path == (scratch() / "e.csv").string() + ".report.json");

  const Json& m = a.report["manifest"];
  CHECK(m["subcommand"] == "estimate");
  CHECK(m["config"]["samples"] == 3000);
  CHECK(m["versions"]["snr_lab"] == library_version());
  CHECK(m["outputs"].size() == 2);
  CHECK(m["outputs"][0]["bytes"] == a.artifacts[0].content.size());
  CHECK(m["outputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK_FALSE(m.contains("timestamp"));
  CHECK(a.report["pass"] == true);
  CHECK(a.report["results"][0]["radius_bound_ok"] == true);
}

TEST_CASE("compare flags mismatches with exit code 2") {
  const std::string region = write("disk.json", R"({"kind":"disk","center":[0,0],"radius":1})");
  const std::string far = write("far.csv", "re,im\n0,0\n5,0\n0,1\n");
  const RunResult bad = run_pipeline("compare", Json{{"cloud", far}, {"region", region}});
  CHECK(bad.exit_code == 2);
  const Json& r = bad.report["results"][0];
  CHECK(r["max_distance_outside"].get<double>() == doctest::Approx(4.0));
  CHECK(r["hull_hausdorff"].get<double>() > 1.0);
  CHECK(bad.report["manifest"]["inputs"].size() == 2);

  // A cloud from the estimator against its own oracle matches.
  const std::string seg = write("seg.json", R"({"kind":"segment","from":[0,0],"to":[1,0]})");
  const RunResult est = run_pipeline(
      "estimate", Json{{"table_row", 16}, {"p", "2"}, {"element", "0,1"}, {"samples", 20000}, {"out", (scratch() / "c16.json").string()}});
  std::ofstream(scratch() / "c16.json") << est.artifacts.at(0).content;
  const RunResult good = run_pipeline("compare", Json{{"cloud", (scratch() / "c16.json").string()}, {"region", seg}});
  CHECK(good.exit_code == 0);
}

TEST_CASE("table runs single rows and reports failures honestly") {
  const RunResult ok = run_pipeline("table", Json{{"rows", "1,16"}, {"p", "2"}, {"samples", 5000}});
  CHECK(ok.exit_code == 0);
  REQUIRE(ok.report["results"].size() == 2);
  CHECK(ok.report["results"][0]["status"] == "pass");

  const RunResult skipped = run_pipeline("table", Json{{"rows", "25"}, {"p", "2"}, {"samples", 1000}});
  CHECK(skipped.report["results"][0]["status"] == "skipped");
  CHECK(skipped.exit_code == 0);

  const RunResult r32 = run_pipeline("table", Json{{"rows", "32"}, {"p", "1"}, {"samples", 3000}});
  CHECK(r32.exit_code == 2);
  CHECK(r32.report["results"][0]["status"] == "fail");
  CHECK(r32.report["results"][0]["contained"] == false);
  CHECK(r32.report["results"][0]["close"] == true);
}

TEST_CASE("witness cases pass on their default configs") {
  for (const char* name : {"semigroup", "volterra-discrete", "l1-line", "volterra-l1"}) {
    const RunResult r = run_pipeline("witness", Json{{"case", name}, {"z_grid", "8x4"}});
    INFO(name);
    CHECK(r.exit_code == 0);
    CHECK(r.report["results"].size() == 32);
  }
  const std::string simpson =
      write("simpson.json", R"({"f": [[1, 1.5, 2], [-3, -2, 1]], "quad": "simpson", "panels": 8})");
  CHECK(run_pipeline("witness", Json{{"case", "l1-line"}, {"config", simpson}}).exit_code == 0);
  const std::string typo = write("typo.json", R"({"f": [[1, 1.5, 2]], "qaud": "exact"})");
  CHECK_THROWS_AS(run_pipeline("witness", Json{{"case", "l1-line"}, {"config", typo}}), SpecError);
}

TEST_CASE("hunt writes a summary and survivor files") {
  const std::string cfg = write("hunt.json", R"({"budget": 25, "samples": 500, "resolution": 16, "probes": 1000,
      "scale_samples": 200, "elements_per_algebra": 1, "threshold": 0.01, "seed": 17})");
  const std::string out = (scratch() / "hunt").string();
  const RunResult r = run_pipeline("hunt", Json{{"config", cfg}, {"out", out}});
  CHECK(r.exit_code == 0);
  CHECK(r.report_path == out + "/summary.json");
  const Json& s = r.report["results"][0];
  CHECK(s["type"] == "summary");
  CHECK(s["drawn"] == 25);
  CHECK(r.artifacts.size() == s["survivors"].get<std::size_t>());
  for (const auto& a : r.artifacts) {
    const Json j = io::parse_json(a.content);
    CHECK(j.contains("cloud"));
    CHECK(j["unital_norm_one"] == false);
  }
  CHECK(run_pipeline("hunt", Json{{"config", cfg}, {"out", out}}).report.dump() == r.report.dump());
}

TEST_CASE("configuration errors name the field") {
  try {
    run_pipeline("estimate", Json{{"table_row", 1}, {"p", "2"}, {"element", "1,2"}, {"samples", "many"}});
    FAIL("expected an error");
  } catch (const SpecError& e) {
    CHECK(std::string(e.what()).find("samples") != std::string::npos);
  }
  CHECK_THROWS_AS(run_pipeline("estimate", Json{{"table_row", 1}, {"element", "1,2"}, {"colour", 1}}), SpecError);
  CHECK_THROWS_AS(run_pipeline("estimate", Json{{"table_row", 1}, {"p", "2"}, {"element", "1,2,3"}}), SpecError);
  CHECK_THROWS_AS(run_pipeline("estimate", Json{{"algebra", (scratch() / "missing.json").string()}, {"element", "1"}}),
                  SpecError);
  CHECK_THROWS_AS(run_pipeline("frobnicate", Json::object()), SpecError);
}
