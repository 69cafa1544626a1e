#include "gptlab/models.hpp"

#include <cmath>
#include <string>

#include "gptlab/error.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab::models {

StateSpace classical(int n) {
  if (n < 1 || n > 64) throw DomainError("classical(N) needs 1 <= N <= 64, got " + std::to_string(n));
  return StateSpace::simplex(n);
}

StateSpace gbit_ball(int d) {
  if (d < 1 || d > 64) throw DomainError("gbit_ball(d) needs 1 <= d <= 64, got " + std::to_string(d));
  return StateSpace::ball(d);
}

StateVector square_vertex(int x, int y) { return StateVector{1.0, static_cast<double>(x), static_cast<double>(y)}; }

Effect square_x() { return Effect{0.0, 1.0, 0.0}; }
Effect square_y() { return Effect{0.0, 0.0, 1.0}; }

StateSpace square_gbit() {
  std::vector<StateVector> v{square_vertex(0, 0), square_vertex(0, 1), square_vertex(1, 0), square_vertex(1, 1)};
  auto g = polytope_symmetry_group(v);
  return StateSpace::polytope(std::move(v), GroupDescriptor{std::move(g)});
}

StateSpace quantum(int n) {
  if (n < 1 || n > 4) throw DomainError("quantum(N) needs 1 <= N <= 4, got " + std::to_string(n));
  return StateSpace::quantum(n);
}

CMatrix bloch_operator(const Vector& w) {
  if (w.size() != 4) throw DimensionError("bloch map needs a Ball(3) vector");
  CMatrix m = w[0] * quantum::pauli(0);
  for (int k = 1; k <= 3; ++k) m += w[k] * quantum::pauli(k);
  return m / 2.0;
}

StateVector bloch_map(const StateVector& w) { return StateVector(quantum::density_to_coords(bloch_operator(w.coords))); }

CMatrix bloch2_operator(const Vector& x) {
  if (x.size() != 16) throw DimensionError("two-ball tensor vectors have 16 coordinates");
  CMatrix m = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double c = x[i * 4 + j];
      if (c != 0.0) m += c * kron(CMatrix(quantum::pauli(i) / 2.0), CMatrix(quantum::pauli(j) / 2.0));
    }
  return m;
}

bool bloch2_isometry_check(const Vector& x, const Vector& y, double tol) {
  const Complex lhs = (bloch2_operator(x) * bloch2_operator(y)).trace();
  return std::abs(lhs - 0.25 * x.dot(y)) <= tol;
}

Effect qubit_effect(const Vector& n, bool plus) {
  if (n.size() != 3) throw DimensionError("qubit effect needs a 3-vector");
  const double s = plus ? 1.0 : -1.0;
  CMatrix m = quantum::pauli(0);
  for (int k = 0; k < 3; ++k) m += s * n[k] * quantum::pauli(k + 1);
  return Effect(quantum::operator_to_functional(m / 2.0));
}

Measurement qubit_measurement(const Vector& n) { return Measurement{{qubit_effect(n, true), qubit_effect(n, false)}}; }

StateVector pr_box_state() {
  // Entry (i, j) is the joint value of (1, X, Y)_i (x) (1, X, Y)_j.
  return StateVector{1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.0};
}

ChshSettings pr_box_settings() {
  const Measurement mx{{square_x(), square_x().complement()}};
  const Measurement my{{square_y(), square_y().complement()}};
  return ChshSettings{{mx, my}, {mx, my}};
}

StateVector psi_u(double u) {
  const double pi = std::acos(-1.0);
  if (!(u >= 0.0 && u < pi)) throw DomainError("psi_u needs u in [0, pi)");
  CVector psi = CVector::Zero(4);
  psi[0] = std::cos(u / 2.0);
  psi[3] = std::sin(u / 2.0);
  return StateVector(quantum::bipartite_density_to_coords(psi * psi.adjoint(), 2, 2));
}

StateVector bell_state() { return psi_u(std::acos(-1.0) / 2.0); }

ChshSettings tsirelson_settings() {
  const double r = 1.0 / std::sqrt(2.0);
  const Vector z{{0.0, 0.0, 1.0}};
  const Vector x{{1.0, 0.0, 0.0}};
  return ChshSettings{{qubit_measurement(z), qubit_measurement(x)},
                      {qubit_measurement(r * (z + x)), qubit_measurement(r * (z - x))}};
}

std::vector<double> schmidt_coefficients(const StateVector& w, int na, int nb) {
  const CMatrix rho = quantum::bipartite_coords_to_density(w.coords, na, nb);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const CVector psi = es.eigenvectors().col(na * nb - 1);
  CMatrix c(na, nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) c(i, j) = psi[i * nb + j];
  const Vector s = Eigen::JacobiSVD<CMatrix>(c).singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double purity(const StateVector& w, int levels) {
  const CMatrix rho = quantum::coords_to_density(w.coords, levels);
  return (rho * rho).trace().real();
}

}  // namespace gptlab::models
