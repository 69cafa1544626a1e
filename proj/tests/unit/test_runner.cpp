#include <doctest.h>

#include <cstdlib>
#include <random>

#include "gptlab/error.hpp"
#include "gptlab/json_io.hpp"
#include "gptlab/models.hpp"
#include "gptlab/runner.hpp"
#include "gptlab/symmetry.hpp"

using namespace gptlab;
using io::Json;
using runner::Status;

namespace {

io::TheoryDefinition theory(const std::string& text) { return io::parse_theory(Json::parse(text)); }

io::TheoryDefinition qubit() { return theory(R"({"name": "qubit", "space": {"family": "quantum", "N": 2}})"); }
io::TheoryDefinition trit() { return theory(R"({"name": "trit", "space": {"family": "classical", "N": 3}})"); }
io::TheoryDefinition square() { return theory(R"({"name": "square", "space": {"family": "square"}})"); }

runner::PostulateReport random_report(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  auto word = [&] {
    std::string s;
    const int len = 1 + pick(rng) * 3;
    static const char* const pieces[] = {"a", "b", "|", "\"", "\\", " ", "\n", "\xc3\xa9", "x", "\t"};
    for (int i = 0; i < len; ++i) s += pieces[std::uniform_int_distribution<int>(0, 9)(rng)];
    return s;
  };
  runner::PostulateReport r;
  r.theory = word();
  r.partner = word();
  r.rule = pick(rng) % 2 ? "min" : "max";
  r.seed = rng();
  for (const char* id : runner::kPostulateIds) {
    runner::PostulateResult p;
    p.id = id;
    p.status = static_cast<Status>(pick(rng));
    p.detail = word();
    if (pick(rng) == 0) {
      p.witness["state"] = Json::array({u(rng), u(rng), 1.0, 0.1});
      p.witness["label"] = word();
      p.witness["count"] = pick(rng);
    }
    r.postulates.push_back(p);
  }
  auto maybe = [&](auto value) -> std::optional<decltype(value)> {
    if (pick(rng) == 0) return std::nullopt;
    return value;
  };
  r.metrics.k = maybe(pick(rng) + 1);
  r.metrics.n = maybe(pick(rng) + 1);
  r.metrics.r = maybe(2);
  r.metrics.d2 = maybe(3);
  r.metrics.d2_face_test = maybe(true);
  r.metrics.d2_in_ladder = maybe(false);
  r.metrics.g2_exception = maybe(false);
  r.metrics.strictly_convex = maybe(pick(rng) % 2 == 0);
  r.metrics.chsh_max = maybe(u(rng));
  for (int i = 0; i < pick(rng); ++i) r.notes.push_back(word());
  return r;
}

}  // namespace

TEST_CASE("qubit passes the postulates") {
  const auto r = runner::check_postulates(qubit());
  CHECK(r.postulates.size() == 6);
  for (const char* id : {"P1", "P3", "P3C", "P4", "P4'"}) CHECK(r.at(id).status == Status::Pass);
  CHECK(r.at("P2").status == Status::ProbesPass);
  CHECK(r.metrics.k == 4);
  CHECK(r.metrics.n == 2);
  CHECK(r.metrics.r == 2);
  CHECK(r.metrics.d2 == 3);
  CHECK(r.metrics.strictly_convex == true);
}

TEST_CASE("classical trit fails only continuity") {
  const auto r = runner::check_postulates(trit());
  for (const auto& p : r.postulates) {
    if (p.id == "P3C") {
      CHECK(p.status == Status::Fail);
      // replay: the named group really has no continuous paths
      REQUIRE(p.witness.contains("group"));
      CHECK_FALSE(continuity_check(io::build_space(trit())).ok);
    } else {
      CHECK(p.status != Status::Fail);
    }
  }
  CHECK(r.metrics.r == 1);
  CHECK(r.metrics.chsh_max == doctest::Approx(2.0));
}

TEST_CASE("square fails the face probe") {
  const auto r = runner::check_postulates(square());
  const auto& p2 = r.at("P2");
  REQUIRE(p2.status == Status::Fail);
  // replay the witness: extract the face and compare with a single point
  const StateSpace s = io::build_space(square());
  const Face f = face_extract(s, Effect(io::vector_from_json(p2.witness["face_effect"])));
  CHECK(f.extreme_point_count() == std::size_t{2});
  const auto eq = equivalence_probe(f, models::classical(1));
  CHECK_FALSE(eq.consistent);
  CHECK(eq.invariant == p2.witness["invariant"].get<std::string>());
  CHECK(r.at("P3").status == Status::Pass);
  CHECK(r.at("P3C").status == Status::Fail);
  CHECK(r.metrics.strictly_convex == false);
}

TEST_CASE("square with the max rule reaches the PR box") {
  runner::CheckOptions o;
  o.rule = CompositionRule::MaxTensor;
  const auto r = runner::check_postulates(square(), nullptr, o);
  CHECK(r.rule == "max");
  CHECK(r.at("P1").status == Status::Pass);
  CHECK(r.metrics.chsh_max == doctest::Approx(4.0));
}

TEST_CASE("restricted effect lists") {
  const auto t = theory(R"({"name": "square", "space": {"family": "square"},
                            "allowed_effects": [[0, 1, 0], [1, -1, 0], [0, 0, 1]]})");
  const auto r = runner::check_postulates(t);
  const auto& p4 = r.at("P4");
  REQUIRE(p4.status == Status::Fail);
  const Vector missing = io::vector_from_json(p4.witness["missing_effect"]);
  CHECK((missing - models::square_y().complement().functional).norm() < 1e-9);
  // replay: the missing effect is valid and extremal
  const auto s = io::build_space(t);
  CHECK(contains_effect(s, Effect(missing)));

  const auto full = theory(R"({"name": "square", "space": {"family": "square"},
                               "allowed_effects": [[0, 1, 0], [1, -1, 0], [0, 0, 1], [1, 0, -1]]})");
  CHECK(runner::check_postulates(full).at("P4").status == Status::Pass);

  const auto ball = theory(R"({"name": "ball", "space": {"family": "ball", "d": 2}, "allowed_effects": [[0.5, 0.5, 0]]})");
  CHECK(runner::check_postulates(ball).at("P4").status == Status::Indeterminate);
}

TEST_CASE("two-dimensional ball with a classical partner") {
  const auto b2 = theory(R"({"name": "disc", "space": {"family": "ball", "d": 2}})");
  const auto r = runner::check_postulates(b2, &b2);
  CHECK(r.at("P3").status == Status::Pass);
  CHECK(r.at("P3C").status == Status::Pass);
  CHECK(r.metrics.d2 == 2);
  CHECK(r.metrics.d2_in_ladder == false);
}

TEST_CASE("reports are deterministic") {
  const auto a = runner::render(runner::check_postulates(qubit()), runner::Format::Json);
  const auto b = runner::render(runner::check_postulates(qubit()), runner::Format::Json);
  CHECK(a == b);
  const auto c = runner::render(runner::check_postulates(square()), runner::Format::Json);
  const auto d = runner::render(runner::check_postulates(square()), runner::Format::Json);
  CHECK(c == d);
}

TEST_CASE("empty report renders with every status") {
  const auto r = runner::empty_report("nothing");
  const auto j = Json::parse(runner::render(r, runner::Format::Json));
  REQUIRE(j["postulates"].size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(j["postulates"][i]["id"] == runner::kPostulateIds[i]);
    CHECK(j["postulates"][i]["status"] == "Indeterminate");
  }
  CHECK(j["metrics"]["K"].is_null());
}

TEST_CASE("markdown report has one row per postulate") {
  const auto md = runner::render(runner::check_postulates(qubit()), runner::Format::Markdown);
  int rows = 0;
  for (const char* id : runner::kPostulateIds) {
    const std::string needle = std::string("\n| ") + id + " |";
    if (md.find(needle) != std::string::npos) ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const auto r = random_report(rng);
    const auto text = runner::render(r, runner::Format::Json);
    const auto back = runner::report_from_json(Json::parse(text));
    CHECK(back == r);
    CHECK(runner::render(back, runner::Format::Json) == text);
  }
  CHECK_THROWS_AS(runner::report_from_json(Json::parse(R"({"theory": 1})")), ValidationError);
  CHECK_THROWS_AS(runner::parse_format("yaml"), ValidationError);
}

TEST_CASE("deterministic JSON text") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1.0");
  CHECK(io::format_double(-2.5e-20) == "-2.4999999999999999e-20");
  for (double v : {-2.5e-20, 1e300, 3.0e-310, 0.1 + 0.2}) CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({0.5, 2});
  CHECK(io::dump(j) == "{\n  \"a\": [0.5, 2],\n  \"b\": 1\n}\n");
}

TEST_CASE("theory schema errors") {
  CHECK_THROWS_AS(theory(R"({"space": {"family": "square"}})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "hexagon"}})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "quantum"}})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "quantum", "N": 9}})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "square"}, "group": {"kind": "lie"}})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "square"}, "group": {"kind": "finite", "matrices": [[[1, 0], [0, 1]]]}})"),
                  ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "square"}, "allowed_effects": [[0, 2, 0]]})"),
                  ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "square"}, "rule": "both"})"), ValidationError);
  CHECK_THROWS_AS(theory(R"({"name": "x", "space": {"family": "square"},
                            "group": {"kind": "finite", "matrices": [[[1, 0, 0], [0, 2, 0], [0, 0, 1]]]}})"),
                  InvalidGroupDescriptor);
}

TEST_CASE("theory definitions round-trip") {
  const auto t = theory(R"({"name": "hex", "space": {"family": "polytope", "vertices":
      [[1, 1, 0], [1, 0.5, 0.8660254037844386], [1, -0.5, 0.8660254037844386], [1, -1, 0],
       [1, -0.5, -0.8660254037844386], [1, 0.5, -0.8660254037844386]]}, "rule": "max"})");
  const auto back = io::parse_theory(Json::parse(io::dump(io::theory_to_json(t))));
  CHECK(back.name == "hex");
  CHECK(back.rule == std::optional<std::string>("max"));
  const auto s = io::build_space(back);
  const auto* g = std::get_if<FiniteMatrixGroup>(&s.group().kind);
  REQUIRE(g);
  CHECK(g->elements.size() == 12);
}

TEST_CASE("exhaustive CHSH search") {
  const auto sq = models::square_gbit();
  CHECK(runner::chsh_max_search(compose(sq, sq, CompositionRule::MaxTensor))->value == doctest::Approx(4.0));
  CHECK(runner::chsh_max_search(compose(sq, sq, CompositionRule::MinTensor))->value == doctest::Approx(2.0));
  const auto bit = models::classical(2);
  CHECK(runner::chsh_max_search(compose(bit, bit, CompositionRule::MaxTensor))->value == doctest::Approx(2.0));
  const auto q = models::quantum(2);
  CHECK_FALSE(runner::chsh_max_search(compose(q, q, CompositionRule::MinTensor)).has_value());
}
