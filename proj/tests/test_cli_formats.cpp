#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "multiest/calibration.hpp"
#include "multiest/errors.hpp"
#include "multiest/report.hpp"

using namespace multiest;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

#ifdef MULTIEST_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(MULTIEST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("multiest_cli_test_" + tag);
  std::filesystem::remove_all(p);
  return p;
}
#endif

}  // namespace

TEST_CASE("csv_escape follows RFC 4180") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("has space") == "has space");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("csv_table emits CRLF records and rejects ragged rows") {
  const std::string out = csv_table({"a", "b"}, {{"1", "x,y"}, {"2", "z"}});
  CHECK(out == "a,b\r\n1,\"x,y\"\r\n2,z\r\n");
  CHECK_THROWS_AS(csv_table({"a", "b"}, {{"1"}}), config_error);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 3.141592653589793, 1.0 / 3.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("svg_plot structure") {
  SvgSeries s{"demo", "#102030", {0.0, 1.0, 2.0}, {1.0, 4.0, 2.0}};
  const std::string svg = svg_plot({s}, "a title", 640, 480);
  CHECK(svg.find("<?xml version=\"1.0\"") == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("a title") != std::string::npos);
  CHECK(svg.find("#102030") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

  SvgSeries bad{"bad", "#000", {0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(svg_plot({bad}, "t", 640, 480), config_error);
}

TEST_CASE("config_hash is deterministic and key-order insensitive") {
  nlohmann::json a = {{"x", 1}, {"y", "s"}};
  nlohmann::json b;
  b["y"] = "s";
  b["x"] = 1;
  CHECK(config_hash(a) == config_hash(b));
  nlohmann::json c = {{"x", 2}, {"y", "s"}};
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("make_manifest carries hash, constants version and wall time") {
  nlohmann::json cfg = {{"subcommand", "demo"}, {"n", 3}};
  auto m = make_manifest(cfg, 7, 1.25);
  CHECK(m.at("config_hash").get<std::string>() == config_hash(cfg));
  CHECK(m.at("constants_version").get<int>() == 7);
  CHECK(m.at("wall_seconds").get<double>() == 1.25);
}

TEST_CASE("constants JSON round-trip") {
  const Constants& c = constants();
  Constants back = constants_from_json(to_json(c));
  CHECK(back.version == c.version);
  CHECK(back.seed == c.seed);
  CHECK(back.c_jn == c.c_jn);
  CHECK(back.c_tool == c.c_tool);
  CHECK(back.c_strat == c.c_strat);
}

#ifdef MULTIEST_CLI_PATH

TEST_CASE("cli exit codes: pass, config error, guard error") {
  CHECK(run_cli("trees --n 2 --samples 500") == 0);
  CHECK(run_cli("bogus-subcommand") == 2);
  CHECK(run_cli("apply --op nope --preset mode:1") == 2);
  CHECK(run_cli("apply --op simplex --n 2 --N 65536 --preset mode:1 --preset mode:2") == 3);

  auto dir = temp_dir("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "bad.json");
    os << "{\"unknown_key\": 1}\n";
  }
  CHECK(run_cli("trees --config " + (dir / "bad.json").string()) == 2);
  {
    std::ofstream os(dir / "good.json");
    os << "{\"n\": 2, \"samples\": 500}\n";
  }
  CHECK(run_cli("trees --config " + (dir / "good.json").string()) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli --check outcomes") {
  CHECK(run_cli("bessel --k2-lo 4 --k2-hi 6 --trials 1 --check") == 0);
  CHECK(run_cli("partition --n 3 --samples 200 --trunc 6 --check") == 0);
  // Zero rate removes the log growth, so the dichotomy check fails.
  CHECK(run_cli("chirp --rate 0 --emin 4 --emax 6 --check") == 1);
}

TEST_CASE("cli artifacts are byte-reproducible and carry a manifest") {
  auto d1 = temp_dir("rep1");
  auto d2 = temp_dir("rep2");
  const std::string args = "apply --op bht --N 128 --L 8 --preset rand:8:3 --preset rand:8:4";
  REQUIRE(run_cli(args + " --out " + d1.string()) == 0);
  REQUIRE(run_cli(args + " --out " + d2.string()) == 0);
  CHECK(slurp(d1 / "apply.csv") == slurp(d2 / "apply.csv"));
  CHECK(slurp(d1 / "apply.svg") == slurp(d2 / "apply.svg"));

  auto csv = slurp(d1 / "apply.csv");
  CHECK(csv.rfind("m,x,re,im,abs\r\n", 0) == 0);

  auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.at("constants_version").get<int>() == constants().version);
  CHECK(manifest.at("wall_seconds").get<double>() >= 0.0);
  // Identical configs hash identically across runs.
  auto manifest2 = nlohmann::json::parse(slurp(d2 / "manifest.json"));
  CHECK(manifest.at("config_hash") == manifest2.at("config_hash"));
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("cli constants override via environment") {
  auto dir = temp_dir("env");
  std::filesystem::create_directories(dir);
  nlohmann::json j = to_json(constants());
  j["version"] = 99;
  {
    std::ofstream os(dir / "constants.json");
    os << j.dump() << "\n";
  }
  const std::string cmd = "MULTIEST_CONSTANTS=" + (dir / "constants.json").string() + " " +
                          MULTIEST_CLI_PATH + " trees --n 2 --samples 100 --out " +
                          (dir / "out").string() + " >/dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  auto manifest = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(manifest.at("constants_version").get<int>() == 99);
  std::filesystem::remove_all(dir);
}

#endif  // MULTIEST_CLI_PATH
