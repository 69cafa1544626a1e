#include <doctest.h>

#include <random>

#include "gptlab/error.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/sampling.hpp"

using namespace gptlab;

namespace {

CMatrix random_density(int n, Rng& rng) {
  CMatrix g = CMatrix::Random(n, n);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("Gell-Mann basis is Hermitian, traceless and HS-orthonormal") {
  for (int n = 1; n <= 6; ++n) {
    const auto& b = quantum::gell_mann_basis(n);
    REQUIRE(static_cast<int>(b.size()) == n * n - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK((b[i] - b[i].adjoint()).norm() < 1e-12);
      CHECK(std::abs(b[i].trace()) < 1e-12);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const Complex ip = (b[i] * b[j]).trace();
        CHECK(std::abs(ip - Complex(i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("qubit basis is the Pauli basis over root two") {
  const auto& b = quantum::gell_mann_basis(2);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK((b[0] - s * quantum::pauli(1)).norm() < 1e-12);
  CHECK((b[1] - s * quantum::pauli(2)).norm() < 1e-12);
  CHECK((b[2] - s * quantum::pauli(3)).norm() < 1e-12);
}

TEST_CASE("coordinates round-trip and give the Born rule") {
  Rng rng(1);
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 20; ++t) {
      const CMatrix rho = random_density(n, rng);
      const Vector c = quantum::density_to_coords(rho);
      CHECK(c.size() == n * n);
      CHECK(c[0] == doctest::Approx(1.0));
      CHECK((quantum::coords_to_density(c, n) - rho).norm() < 1e-12);
      CMatrix m = CMatrix::Random(n, n);
      m = (m + m.adjoint()).eval();
      const Vector f = quantum::operator_to_functional(m);
      CHECK(std::abs(f.dot(c) - (m * rho).trace().real()) < 1e-12);
      CHECK((quantum::functional_to_operator(f, n) - m).norm() < 1e-12);
    }
  }
}

TEST_CASE("bipartite coordinates agree with the trace rule") {
  Rng rng(2);
  const CMatrix rho = random_density(6, rng);
  const Vector c = quantum::bipartite_density_to_coords(rho, 2, 3);
  CHECK(c.size() == 36);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK((quantum::bipartite_coords_to_density(c, 2, 3) - rho).norm() < 1e-12);
  CMatrix m = CMatrix::Random(6, 6);
  m = (m + m.adjoint()).eval();
  const Vector f = quantum::bipartite_operator_to_functional(m, 2, 3);
  CHECK(std::abs(f.dot(c) - (m * rho).trace().real()) < 1e-12);
}

TEST_CASE("levels from dimension") {
  CHECK(quantum::levels_from_dim(1) == 1);
  CHECK(quantum::levels_from_dim(9) == 3);
  CHECK_THROWS_AS(quantum::levels_from_dim(8), DimensionError);
}

TEST_CASE("pure coordinates have unit purity") {
  Rng rng(3);
  const CVector psi = random_unit_cvector(3, rng);
  const Vector c = quantum::pure_coords(psi);
  const CMatrix rho = quantum::coords_to_density(c, 3);
  CHECK(std::abs((rho * rho).trace() - Complex(1.0)) < 1e-12);
}
