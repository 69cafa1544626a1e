#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gptlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gptlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return std::string(GPTLAB_FIXTURES) + "/" + name; }

std::string temp(const char* name) { return std::string(GPTLAB_TMP) + "/" + name; }

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("check emits a JSON report") {
  const auto r = run({"check", fixture("qubit.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["postulates"].size() == 6);
  CHECK(j["metrics"]["K"] == 4);
  // same seed, same bytes
  CHECK(run({"check", fixture("qubit.json"), "--seed", "0"}).out == r.out);
}

TEST_CASE("check accepts partner, rule and markdown output") {
  const auto r = run({"check", fixture("square.json"), "--partner", fixture("square.json"), "--rule", "max",
                      "--format", "md"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("| P2 | Fail |") != std::string::npos);
}

TEST_CASE("validation errors exit with 2") {
  CHECK(run({"check", fixture("missing.json")}).code == 2);
  write(temp("bad.json"), R"({"name": "x", "space": {"family": "polytope", "vertices": [[1, 0], [1, 1], [1, 0.5]]}})");
  const auto r = run({"check", temp("bad.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("not extreme") != std::string::npos);
  write(temp("garbage.json"), "{not json");
  CHECK(run({"capacity", temp("garbage.json")}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"check", fixture("qubit.json"), "--rule", "mid"}).code == 2);
}

TEST_CASE("capacity") {
  const auto r = run({"capacity", fixture("trit.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["capacity"] == 3);
  CHECK(j["exact"] == true);
}

TEST_CASE("capacity past the vertex budget exits with 3") {
  nlohmann::json t;
  t["name"] = "70-gon";
  t["space"]["family"] = "polytope";
  t["space"]["vertices"] = nlohmann::json::array();
  for (int i = 0; i < 70; ++i) {
    const double a = 2.0 * 3.14159265358979323846 * i / 70;
    t["space"]["vertices"].push_back({1.0, std::cos(a), std::sin(a)});
  }
  write(temp("gon.json"), t.dump());
  const auto r = run({"capacity", temp("gon.json")});
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.out)["exact"] == false);
}

TEST_CASE("compose then chsh") {
  const auto out = temp("ss.json");
  REQUIRE(run({"compose", fixture("square.json"), fixture("square.json"), "--rule", "max", "--out", out}).code == 0);
  const auto r = run({"chsh", out, "--settings", fixture("pr_settings.json")});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["chsh"].get<double>() == doctest::Approx(4.0));

  write(temp("local.json"), R"({"alice": [[0, 1, 0], [0, 0, 1]], "bob": [[0, 1, 0], [0, 0, 1]],
                                "state": [1, 1, 0, 1, 1, 0, 0, 0, 0]})");
  const auto l = run({"chsh", out, "--settings", temp("local.json")});
  REQUIRE(l.code == 0);
  CHECK(nlohmann::json::parse(l.out)["chsh"].get<double>() == doctest::Approx(2.0));

  write(temp("invalid.json"), R"({"alice": [[0, 2, 0], [0, 0, 1]], "bob": [[0, 1, 0], [0, 0, 1]]})");
  CHECK(run({"chsh", out, "--settings", temp("invalid.json")}).code == 2);
  CHECK(run({"chsh", fixture("square.json"), "--settings", fixture("pr_settings.json")}).code == 2);
}

TEST_CASE("a composite file is itself a theory") {
  const auto out = temp("qq.json");
  REQUIRE(run({"compose", fixture("qubit.json"), fixture("qubit.json"), "--rule", "min", "--out", out}).code == 0);
  const auto r = run({"capacity", out});
  CHECK(r.code == 3);  // only a product lower bound for continuous factors
  CHECK(nlohmann::json::parse(r.out)["capacity"] == 4);
}

TEST_CASE("report re-renders saved JSON") {
  const auto path = temp("report.json");
  REQUIRE(run({"check", fixture("trit.json"), "--out", path}).code == 0);
  const auto md = run({"report", path});
  REQUIRE(md.code == 0);
  CHECK(md.out.find("| P3C | Fail |") != std::string::npos);
  const auto js = run({"report", path, "--format", "json"});
  std::ifstream in(path);
  std::stringstream saved;
  saved << in.rdbuf();
  CHECK(js.out == saved.str());
}
