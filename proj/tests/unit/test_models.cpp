#include <doctest.h>

#include <cmath>

#include "gptlab/error.hpp"
#include "gptlab/models.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/sampling.hpp"

using namespace gptlab;

TEST_CASE("constructor ranges") {
  CHECK_THROWS_AS(models::classical(0), DomainError);
  CHECK_THROWS_AS(models::quantum(5), DomainError);
  CHECK_THROWS_AS(models::gbit_ball(0), DomainError);
  CHECK(models::quantum(4).ambient_dim() == 16);
  CHECK(models::classical(6).ambient_dim() == 6);
}

TEST_CASE("square gbit") {
  const auto sq = models::square_gbit();
  CHECK(sq.extreme_points().size() == 4);
  const auto* g = std::get_if<FiniteMatrixGroup>(&sq.group().kind);
  REQUIRE(g);
  CHECK(g->elements.size() == 8);
  CHECK(evaluate(models::square_x(), models::square_vertex(1, 0)) == 1.0);
  CHECK(evaluate(models::square_y(), models::square_vertex(1, 0)) == 0.0);
}

TEST_CASE("Bloch map sends the ball onto qubit states") {
  Rng rng(1);
  const auto b = models::gbit_ball(3);
  const auto q = models::quantum(2);
  for (int t = 0; t < 50; ++t) {
    const auto w = random_state(b, rng);
    const auto r = models::bloch_map(w);
    CHECK(contains_state(q, r));
    const CMatrix rho = models::bloch_operator(w.coords);
    CHECK(std::abs((rho * rho).trace().real() - (1.0 + w.hat().squaredNorm()) / 2.0) < 1e-12);
  }
}

TEST_CASE("two-ball tensor map is an isometry") {
  Rng rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    Vector x(16), y(16);
    for (int i = 0; i < 16; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
    }
    CHECK(models::bloch2_isometry_check(x, y));
  }
  CHECK_THROWS_AS(models::bloch2_operator(Vector::Zero(9)), DimensionError);
}

TEST_CASE("Schmidt coefficients of psi_u") {
  const auto s = models::schmidt_coefficients(models::psi_u(M_PI / 2), 2, 2);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - 1.0 / std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(s[1] - 1.0 / std::sqrt(2.0)) <= 1e-12);
  for (double u : {0.3, 1.0, 2.0, 3.0}) {
    const auto c = models::schmidt_coefficients(models::psi_u(u), 2, 2);
    const double a = std::cos(u / 2), b = std::sin(u / 2);
    CHECK(std::abs(c[0] - std::max(a, b)) < 1e-9);
    CHECK(std::abs(c[1] - std::min(a, b)) < 1e-9);
  }
  CHECK_THROWS_AS(models::psi_u(M_PI), DomainError);
  CHECK_THROWS_AS(models::psi_u(-0.1), DomainError);
}

TEST_CASE("Bell state") {
  const auto bell = models::bell_state();
  CHECK(bell.coords[0] == doctest::Approx(1.0));
  CHECK(models::purity(bell, 4) == doctest::Approx(1.0));
  const CMatrix rho = quantum::bipartite_coords_to_density(bell.coords, 2, 2);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("qubit measurements") {
  const Vector n = (Vector(3) << 0.0, 0.6, 0.8).finished();
  const auto m = models::qubit_measurement(n);
  CHECK(m.sums_to_unit());
  for (const auto& e : m.effects) CHECK(contains_effect(models::quantum(2), e));
}

TEST_CASE("PR box fixture") {
  const auto& s = models::pr_box_settings();
  CHECK(s.alice[0].sums_to_unit());
  CHECK(chsh_value(models::pr_box_state(), s, 3, 3) == doctest::Approx(4.0));
  CHECK(chsh_value(models::bell_state(), models::tsirelson_settings(), 4, 4) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}
