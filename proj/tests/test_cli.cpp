#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hypmet/cli.hpp"
#include "json.hpp"
#include "oracles.hpp"

using nlohmann::json;
using std::numbers::pi;

namespace {

struct Run {
  int code;
  std::string text;
  json report;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hypmet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hypmet::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  const std::string text = out.str();
  return {code, text, text.empty() ? json() : json::parse(text)};
}

std::string repeat(double v, int n) {
  json a = json::array();
  for (int i = 0; i < n; ++i) a.push_back(v);
  return a.dump();
}

const std::string fig8 = oracle::fixture("fig8.json");
const std::string dbl = oracle::fixture("double_tet.json");

}  // namespace

TEST_CASE("validate reports the complex") {
  const auto r = run({"validate", "--triangulation", dbl});
  REQUIRE(r.code == 0);
  CHECK(r.report["result"]["edges"] == 6);
  CHECK(r.report["result"]["vertices"] == 4);
  CHECK(r.report["result"]["closed"] == true);
  CHECK(r.report["result"]["edge_classes"].size() == 6);
  const auto f = run({"validate", "--triangulation", fig8});
  CHECK(f.report["result"]["edges"] == 2);
  CHECK(f.report["result"]["vertices"] == 1);
  CHECK(f.report["result"]["edge_classes"][0]["instances"].size() == 6);
}

TEST_CASE("solve the figure-eight target") {
  const auto r = run({"solve", "--flavor", "ideal", "--triangulation", fig8, "--cone-angles", "[6.283185307,6.283185307]"});
  REQUIRE(r.code == 0);
  CHECK(r.report["command"] == "solve");
  CHECK(r.report["input"]["flavor"] == "ideal");
  CHECK(r.report["result"]["volume"].get<double>() == doctest::Approx(oracle::kFig8Volume).epsilon(1e-8));
  for (const auto& tet : r.report["result"]["angles"])
    for (const auto& a : tet) CHECK(std::abs(a.get<double>() - pi / 3) < 1e-7);
}

TEST_CASE("curvature and cone angle targets give the same result") {
  const double k = 2 * oracle::kAcos23;
  const auto by_curvature = run({"solve", "--flavor", "hyper", "--triangulation", dbl, "--curvature", repeat(2 * pi - k, 6)});
  REQUIRE(by_curvature.code == 0);
  for (const auto& l : by_curvature.report["result"]["lengths"])
    CHECK(std::abs(l.get<double>() - oracle::kAcosh2) < 1e-8);
  const json cone = by_curvature.report["input"]["cone_angles"];
  const auto by_cone = run({"solve", "--flavor", "hyper", "--triangulation", dbl, "--cone-angles", cone.dump()});
  REQUIRE(by_cone.code == 0);
  CHECK(by_cone.report["result"] == by_curvature.report["result"]);
}

TEST_CASE("other commands") {
  const auto angles = run({"angles", "--flavor", "hyper", "--triangulation", dbl, "--lengths", repeat(oracle::kAcosh2, 6)});
  REQUIRE(angles.code == 0);
  CHECK(std::abs(angles.report["result"]["cone_angles"][0].get<double>() - 2 * oracle::kAcos23) < 1e-12);
  const auto vol = run({"volume", "--flavor", "ideal", "--triangulation", fig8, "--lengths", "[0,0]"});
  REQUIRE(vol.code == 0);
  CHECK(vol.report["result"]["volume"].get<double>() == doctest::Approx(oracle::kFig8Volume).epsilon(1e-12));
  const auto cls = run({"classify", "--flavor", "ideal", "--triangulation", fig8, "--cone-angles", repeat(2 * pi, 2)});
  REQUIRE(cls.code == 0);
  for (const auto& v : cls.report["result"]["tetrahedra"]) CHECK(v["verdict"] == "Realized");
  const auto rig = run({"rigidity", "--flavor", "hyper", "--triangulation", dbl, "--cone-angles",
                        repeat(2 * oracle::kAcos23, 6), "--starts", "4", "--seed", "9"});
  REQUIRE(rig.code == 0);
  CHECK(rig.report["result"]["agree"] == true);
  CHECK(rig.report["result"]["lengths"].size() == 4);
  const auto mx = run({"max-angles", "--flavor", "ideal", "--triangulation", fig8, "--cone-angles", repeat(2 * pi, 2)});
  REQUIRE(mx.code == 0);
  CHECK(mx.report["result"]["volume"].get<double>() == doctest::Approx(oracle::kFig8Volume).epsilon(1e-10));
}

TEST_CASE("exit codes and error objects") {
  auto expect = [](const Run& r, int code) {
    CHECK(r.code == code);
    REQUIRE(r.report.contains("error"));
    CHECK(r.report["error"]["exit_code"] == code);
    CHECK(!r.report["error"]["message"].get<std::string>().empty());
  };
  expect(run({"solve", "--flavor", "sideways", "--triangulation", fig8}), 1);
  expect(run({"solve", "--triangulation", "/nonexistent/file.json", "--cone-angles", "[1,1]"}), 1);
  expect(run({"solve", "--triangulation", fig8, "--cone-angles", "[1,2,3]"}), 1);
  expect(run({"solve", "--triangulation", fig8, "--cone-angles", "[6,6]", "--curvature", "[0,0]"}), 1);
  expect(run({"solve", "--triangulation", fig8, "--cone-angles", "not json"}), 1);
  expect(run({"solve", "--triangulation", fig8, "--cone-angles", repeat(6 * pi, 2)}), 2);
  expect(run({"solve", "--flavor", "hyper", "--triangulation", fig8, "--cone-angles", "[2,2]", "--max-iter", "1"}), 3);
  const auto r = run({"solve", "--triangulation", fig8, "--cone-angles", repeat(6 * pi, 2)});
  CHECK(r.report["error"]["kind"] == "NotPositiveFeasible");
}

TEST_CASE("reports are deterministic and can go to a file") {
  const std::vector<std::string> args = {"rigidity", "--flavor", "ideal", "--triangulation", dbl, "--cone-angles",
                                         repeat(2 * pi / 3, 6), "--starts", "3", "--seed", "42"};
  CHECK(run(args).text == run(args).text);
  const auto path = std::filesystem::temp_directory_path() / "hypmet_cli_report.json";
  std::vector<std::string> with_output = args;
  with_output.insert(with_output.end(), {"--output", path.string()});
  const auto r = run(with_output);
  CHECK(r.code == 0);
  CHECK(r.text.empty());
  std::ifstream file(path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  CHECK(buffer.str() == run(args).text);
  std::filesystem::remove(path);
}
