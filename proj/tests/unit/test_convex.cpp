#include <doctest.h>

#include <algorithm>

#include "gptlab/error.hpp"
#include "gptlab/models.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/sampling.hpp"

using namespace gptlab;

namespace {

bool contains_functional(const std::vector<Effect>& list, const Vector& f) {
  return std::any_of(list.begin(), list.end(),
                     [&](const Effect& e) { return (e.functional - f).lpNorm<Eigen::Infinity>() < 1e-9; });
}

Vector vec(std::initializer_list<double> v) { return StateVector(v).coords; }

}  // namespace

TEST_CASE("evaluation") {
  const auto bit = models::classical(2);
  CHECK(evaluate(bit.unit_effect(), StateVector{1.0, 0.3}) == doctest::Approx(1.0));
  CHECK(evaluate(Effect{0.0, 1.0}, StateVector{1.0, 0.3}) == doctest::Approx(0.3));
  // ball effect (1 + <w, n>) / 2 on the north pole
  const Effect e1{0.5, 0.0, 0.0, 0.5};
  CHECK(evaluate(e1, StateVector{1.0, 0.0, 0.0, 1.0}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(evaluate(e1, StateVector{1.0, 0.0}), DimensionError);
}

TEST_CASE("mixtures") {
  const StateVector w{1.0, 0.2, 0.4};
  CHECK(mix({w}, {1.0}) == w);
  const StateVector n{1.0, 0.0, 0.0, 1.0}, s{1.0, 0.0, 0.0, -1.0};
  CHECK(mix({n, s}, {0.5, 0.5}).coords.isApprox(vec({1.0, 0.0, 0.0, 0.0})));
  const auto tri = models::classical(3).extreme_points();
  const auto u = mix(tri, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(u.coords.isApprox(vec({1.0, 1.0 / 3, 1.0 / 3})));
  CHECK_THROWS_AS(mix({n, s}, {0.7, 0.7}), DomainError);
  CHECK_THROWS_AS(mix({n, s}, {-0.1, 1.1}), DomainError);
}

TEST_CASE("state membership") {
  const auto b3 = models::gbit_ball(3);
  CHECK(contains_state(b3, StateVector{1.0, 0.0, 0.0, 1.0}));
  CHECK_FALSE(contains_state(b3, StateVector{1.0, 0.0, 0.0, 1.2}));
  const auto q2 = models::quantum(2);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  CHECK_FALSE(contains_state(q2, StateVector(quantum::density_to_coords(bad))));
  CHECK(contains_state(q2, StateVector(quantum::density_to_coords(CMatrix::Identity(2, 2) / 2.0))));
  const auto sq = models::square_gbit();
  CHECK(contains_state(sq, StateVector{1.0, 0.5, 1.0}));
  CHECK_FALSE(contains_state(sq, StateVector{1.0, 0.5, 1.01}));
  CHECK_FALSE(contains_state(sq, StateVector{0.9, 0.5, 0.5}));  // not normalized
}

TEST_CASE("membership agrees with direct oracles on random vectors") {
  Rng rng(9);
  std::normal_distribution<double> g(0.0, 0.6);
  const auto b = models::gbit_ball(4);
  const auto q = models::quantum(3);
  for (int t = 0; t < 200; ++t) {
    Vector x(5);
    x[0] = 1.0;
    for (int i = 1; i < 5; ++i) x[i] = g(rng);
    CHECK(contains_state(b, StateVector(x)) == (x.tail(4).norm() <= 1.0 + 1e-9));
    Vector y(9);
    y[0] = 1.0;
    for (int i = 1; i < 9; ++i) y[i] = 0.5 * g(rng);
    const CMatrix rho = quantum::coords_to_density(y, 3);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    CHECK(contains_state(q, StateVector(y)) == (es.eigenvalues().minCoeff() >= -1e-9));
  }
}

TEST_CASE("effect membership") {
  for (const auto& s : {models::classical(3), models::gbit_ball(2), models::quantum(2), models::square_gbit()}) {
    CHECK(contains_effect(s, s.unit_effect()));
    CHECK_FALSE(contains_effect(s, Effect(2.0 * s.unit_effect().functional)));
  }
  CHECK(contains_effect(models::square_gbit(), models::square_x()));
  CHECK_FALSE(contains_effect(models::square_gbit(), Effect{0.0, 1.0, 1.0}));
}

TEST_CASE("extremal effects") {
  const auto bit = extremal_effects(models::classical(2));
  CHECK(bit.size() == 4);
  for (const auto& f : {vec({0, 0}), vec({1, 0}), vec({0, 1}), vec({1, -1})}) CHECK(contains_functional(bit, f));

  const auto sq = extremal_effects(models::square_gbit());
  CHECK(sq.size() == 6);
  for (const auto& f : {vec({0, 0, 0}), vec({1, 0, 0}), vec({0, 1, 0}), vec({1, -1, 0}), vec({0, 0, 1}),
                        vec({1, 0, -1})})
    CHECK(contains_functional(sq, f));

  // Simplex(3): every 0/1 pattern on the vertices is an extremal effect
  const auto s3 = models::classical(3);
  const auto ex = extremal_effects(s3);
  CHECK(ex.size() == 8);
  const auto verts = s3.extreme_points();
  Matrix v(3, 3);
  for (int i = 0; i < 3; ++i) v.row(i) = verts[static_cast<std::size_t>(i)].coords.transpose();
  for (int mask = 0; mask < 8; ++mask) {
    Vector values(3);
    for (int i = 0; i < 3; ++i) values[i] = (mask >> i) & 1;
    CHECK(contains_functional(ex, v.fullPivLu().solve(values)));
  }
}

TEST_CASE("polytope validation") {
  CHECK_THROWS_AS(StateSpace::polytope({StateVector{1.0, 0.0}, StateVector{1.0, 1.0}, StateVector{1.0, 0.5}}),
                  ValidationError);
  CHECK_THROWS_AS(StateSpace::polytope({StateVector{1.0, 0.0, 0.0}, StateVector{1.0, 1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(StateSpace::polytope({StateVector{0.5, 0.0}, StateVector{1.0, 1.0}}), ValidationError);
  const auto p = StateSpace::polytope({StateVector{1.0, 1.0}, StateVector{1.0, 0.0}});
  CHECK(p.extreme_points().front().coords[1] == 0.0);  // canonical order
}

TEST_CASE("optimization over states matches closed forms") {
  Rng rng(4);
  const auto b = models::gbit_ball(3);
  const auto q = models::quantum(3);
  for (int t = 0; t < 20; ++t) {
    Vector f = Vector::Random(4);
    const auto opt = minimize_over_states(b, f);
    CHECK(opt.value == doctest::Approx(f[0] - f.tail(3).norm()));
    CHECK(contains_state(b, opt.state));
    Vector h = Vector::Random(9);
    const CMatrix m = quantum::functional_to_operator(h, 3);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    CHECK(minimize_over_states(q, h).value == doctest::Approx(es.eigenvalues().minCoeff()));
    const auto r = functional_range(q, h);
    CHECK(r.max == doctest::Approx(es.eigenvalues().maxCoeff()));
  }
}

TEST_CASE("cone probe separates the state cone") {
  const auto q = models::quantum(2);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK(cone_probe(q, quantum::density_to_coords(bad)).value < -1e-3);
  CHECK(cone_probe(q, quantum::density_to_coords(CMatrix::Identity(2, 2))).value >= -1e-9);
  const auto sq = models::square_gbit();
  const auto p = cone_probe(sq, vec({1.0, 1.2, 0.5}));
  CHECK(p.value == doctest::Approx(-0.2));
  CHECK(contains_effect(sq, p.minimizer));
}

TEST_CASE("affine dimension") {
  for (int n = 1; n <= 5; ++n) CHECK(affine_dimension(models::classical(n)) == n - 1);
  for (int d = 1; d <= 5; ++d) CHECK(affine_dimension(models::gbit_ball(d)) == d);
  for (int n = 1; n <= 4; ++n) CHECK(affine_dimension(models::quantum(n)) == n * n - 1);
  CHECK(affine_dimension(models::square_gbit()) == 2);
}

TEST_CASE("tensor membership separates entangled from separable") {
  auto q = std::make_shared<const StateSpace>(models::quantum(2));
  const auto min_t = StateSpace::tensor(q, q, CompositionRule::MinTensor);
  const auto max_t = StateSpace::tensor(q, q, CompositionRule::MaxTensor);
  const auto bell = models::bell_state();
  CHECK_FALSE(contains_state(min_t, bell));
  CHECK(contains_state(max_t, bell));
  Rng rng(8);
  const auto a = random_state(*q, rng);
  const auto b = random_state(*q, rng);
  const StateVector prod(kron(a.coords, b.coords));
  CHECK(contains_state(min_t, prod));
  CHECK(contains_state(max_t, prod));
}

TEST_CASE("composition rule names") {
  CHECK(to_string(CompositionRule::MinTensor) == "min");
  CHECK(parse_rule("max") == CompositionRule::MaxTensor);
  CHECK_THROWS(parse_rule("middle"));
}
