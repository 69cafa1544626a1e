#include "gptlab/sampling.hpp"

#include <cmath>

#include "gptlab/error.hpp"
#include "gptlab/quantum_basis.hpp"

namespace gptlab {

Vector random_unit_vector(int d, Rng& rng) {
  std::normal_distribution<double> g;
  Vector v(d);
  do {
    for (auto& x : v) x = g(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

CVector random_unit_cvector(int n, Rng& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  do {
    for (auto& x : v) x = Complex(g(rng), g(rng));
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Matrix random_rotation(int d, Rng& rng) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0.0) q.col(i) *= -1.0;
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

CMatrix random_unitary(int n, Rng& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(r(i, i));
    if (m > 0.0) q.col(i) *= r(i, i) / m;
  }
  return q;
}

std::vector<double> random_probability_vector(int n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& x : w) s += (x = e(rng));
  for (auto& x : w) x /= s;
  return w;
}

namespace {

StateVector pair_product(const StateVector& a, const StateVector& b) {
  return StateVector(kron(a.coords, b.coords));
}

}  // namespace

StateVector random_pure_state(const StateSpace& space, Rng& rng) {
  if (space.has_finite_extreme_points()) {
    const auto pts = space.extreme_points();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    return pts[pick(rng)];
  }
  if (const auto* b = space.as<BallRep>()) {
    Vector v(b->dim + 1);
    v[0] = 1.0;
    v.tail(b->dim) = random_unit_vector(b->dim, rng);
    return StateVector(std::move(v));
  }
  if (const auto* q = space.as<QuantumRep>()) return StateVector(quantum::pure_coords(random_unit_cvector(q->levels, rng)));
  const auto& t = *space.as<TensorRep>();
  return pair_product(random_pure_state(*t.a, rng), random_pure_state(*t.b, rng));
}

StateVector random_state(const StateSpace& space, Rng& rng) {
  if (space.has_finite_extreme_points()) {
    const auto pts = space.extreme_points();
    return mix(pts, random_probability_vector(static_cast<int>(pts.size()), rng));
  }
  if (const auto* b = space.as<BallRep>()) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector v(b->dim + 1);
    v[0] = 1.0;
    v.tail(b->dim) = random_unit_vector(b->dim, rng) * std::pow(u(rng), 1.0 / b->dim);
    return StateVector(std::move(v));
  }
  if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    const auto w = random_probability_vector(n, rng);
    const CMatrix u = random_unitary(n, rng);
    CMatrix rho = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) rho += w[static_cast<std::size_t>(i)] * u.col(i) * u.col(i).adjoint();
    return StateVector(quantum::density_to_coords(rho));
  }
  const auto& t = *space.as<TensorRep>();
  const int terms = 4;
  std::vector<StateVector> parts;
  for (int i = 0; i < terms; ++i) parts.push_back(pair_product(random_state(*t.a, rng), random_state(*t.b, rng)));
  return mix(parts, random_probability_vector(terms, rng));
}

StateVector random_boundary_state(const StateSpace& space, Rng& rng) {
  if (const auto* p = space.as<PolytopeRep>()) {
    std::uniform_int_distribution<std::size_t> pick(0, p->facets.size() - 1);
    const Vector& f = p->facets[pick(rng)];
    std::vector<StateVector> on;
    for (const auto& v : p->vertices)
      if (std::abs(f.dot(v.coords)) <= 1e-9) on.push_back(v);
    return mix(on, random_probability_vector(static_cast<int>(on.size()), rng));
  }
  if (const auto* s = space.as<SimplexRep>()) {
    if (s->levels == 1) return space.extreme_points().front();
    auto pts = space.extreme_points();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    return mix(pts, random_probability_vector(static_cast<int>(pts.size()), rng));
  }
  if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    if (n == 1) return StateVector{1.0};
    auto w = random_probability_vector(n - 1, rng);
    const CMatrix u = random_unitary(n, rng);
    CMatrix rho = CMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) rho += w[static_cast<std::size_t>(i)] * u.col(i) * u.col(i).adjoint();
    return StateVector(quantum::density_to_coords(rho));
  }
  return random_pure_state(space, rng);
}

}  // namespace gptlab
