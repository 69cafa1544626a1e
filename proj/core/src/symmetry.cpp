#include "gptlab/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/quantum_basis.hpp"

namespace gptlab {

std::string GroupDescriptor::name() const {
  struct V {
    std::string operator()(const TrivialGroup&) const { return "trivial"; }
    std::string operator()(const FiniteMatrixGroup& g) const {
      return "finite(" + std::to_string(g.elements.size()) + ")";
    }
    std::string operator()(const ParametricRotations& g) const { return "SO(" + std::to_string(g.dim) + ")"; }
    std::string operator()(const ParametricUnitaryConjugations& g) const {
      return "U(" + std::to_string(g.levels) + ")";
    }
    std::string operator()(const Permutations& g) const { return "S_" + std::to_string(g.count); }
    std::string operator()(const LocalProductGroup& g) const {
      return "local(" + g.a->name() + " x " + g.b->name() + ")";
    }
  };
  return std::visit(V{}, kind);
}

Matrix rotation_action(const Matrix& r) {
  const auto d = r.rows();
  Matrix t = Matrix::Identity(d + 1, d + 1);
  t.block(1, 1, d, d) = r;
  return t;
}

Matrix unitary_action(const CMatrix& u) {
  const int n = static_cast<int>(u.rows());
  const int k = n * n;
  const auto& basis = quantum::gell_mann_basis(n);
  Matrix t(k, k);
  for (int l = 0; l < k; ++l) {
    const CMatrix r = l == 0 ? CMatrix(CMatrix::Identity(n, n) / static_cast<double>(n))
                             : basis[static_cast<std::size_t>(l - 1)];
    t.col(l) = quantum::density_to_coords(u * r * u.adjoint());
  }
  return t;
}

namespace {

Matrix simplex_vertex_matrix(int n, const std::vector<int>& order) {
  Matrix v = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = order[static_cast<std::size_t>(i)];
    v(0, i) = 1.0;
    if (j < n - 1) v(j + 1, i) = 1.0;
  }
  return v;
}

}  // namespace

Matrix permutation_action(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<int> id(static_cast<std::size_t>(n));
  std::iota(id.begin(), id.end(), 0);
  const Matrix v = simplex_vertex_matrix(n, id);
  const Matrix w = simplex_vertex_matrix(n, perm);
  return w * v.inverse();
}

StateVector apply(const StateSpace& space, const Matrix& t, const StateVector& w, double tol) {
  if (t.rows() != space.ambient_dim() || t.cols() != w.dim())
    throw DimensionError("apply: transformation has wrong shape");
  StateVector out(t * w.coords);
  if (!contains_state(space, out, tol))
    throw InvalidGroupDescriptor("transformation maps a state outside " + space.describe());
  return out;
}

namespace {

Matrix random_element(const GroupDescriptor& g, int k, Rng& rng) {
  struct V {
    int k;
    Rng& rng;
    Matrix operator()(const TrivialGroup&) const { return Matrix::Identity(k, k); }
    Matrix operator()(const FiniteMatrixGroup& f) const {
      if (f.elements.empty()) return Matrix::Identity(k, k);
      std::uniform_int_distribution<std::size_t> pick(0, f.elements.size() - 1);
      return f.elements[pick(rng)];
    }
    Matrix operator()(const ParametricRotations& r) const { return rotation_action(random_rotation(r.dim, rng)); }
    Matrix operator()(const ParametricUnitaryConjugations& u) const {
      return unitary_action(random_unitary(u.levels, rng));
    }
    Matrix operator()(const Permutations& p) const {
      std::vector<int> perm(static_cast<std::size_t>(p.count));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      return permutation_action(perm);
    }
    Matrix operator()(const LocalProductGroup& l) const {
      return kron(random_element(*l.a, l.ka, rng), random_element(*l.b, l.kb, rng));
    }
  };
  return std::visit(V{k, rng}, g.kind);
}

std::vector<Matrix> sign_rotations(int d) {
  std::vector<Matrix> out;
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    if (std::popcount(mask) % 2 != 0) continue;
    Matrix r = Matrix::Identity(d, d);
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) r(i, i) = -1.0;
    out.push_back(rotation_action(r));
  }
  return out;
}

std::vector<Matrix> weyl_heisenberg(int n) {
  const double pi = std::acos(-1.0);
  CMatrix x = CMatrix::Zero(n, n);
  CMatrix z = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    x((j + 1) % n, j) = 1.0;
    z(j, j) = std::polar(1.0, 2.0 * pi * j / n);
  }
  std::vector<Matrix> out;
  CMatrix xa = CMatrix::Identity(n, n);
  for (int a = 0; a < n; ++a) {
    CMatrix zb = CMatrix::Identity(n, n);
    for (int b = 0; b < n; ++b) {
      out.push_back(unitary_action(xa * zb));
      zb = zb * z;
    }
    xa = xa * x;
  }
  return out;
}

}  // namespace

Matrix random_group_element(const StateSpace& space, Rng& rng) {
  return random_element(space.group(), space.ambient_dim(), rng);
}

std::vector<Matrix> averaging_set(const GroupDescriptor& g, int k) {
  struct V {
    int k;
    std::vector<Matrix> operator()(const TrivialGroup&) const { return {Matrix::Identity(k, k)}; }
    std::vector<Matrix> operator()(const FiniteMatrixGroup& f) const {
      if (f.elements.empty()) return {Matrix::Identity(k, k)};
      return f.elements;
    }
    std::vector<Matrix> operator()(const ParametricRotations& r) const { return sign_rotations(r.dim); }
    std::vector<Matrix> operator()(const ParametricUnitaryConjugations& u) const {
      return weyl_heisenberg(u.levels);
    }
    std::vector<Matrix> operator()(const Permutations& p) const {
      std::vector<Matrix> out;
      for (int s = 0; s < p.count; ++s) {
        std::vector<int> perm(static_cast<std::size_t>(p.count));
        for (int i = 0; i < p.count; ++i) perm[static_cast<std::size_t>(i)] = (i + s) % p.count;
        out.push_back(permutation_action(perm));
      }
      return out;
    }
    std::vector<Matrix> operator()(const LocalProductGroup& l) const {
      std::vector<Matrix> out;
      for (const auto& x : averaging_set(*l.a, l.ka))
        for (const auto& y : averaging_set(*l.b, l.kb)) out.push_back(kron(x, y));
      return out;
    }
  };
  return std::visit(V{k}, g.kind);
}

StateVector group_average(const StateSpace& space, const StateVector& w) {
  const auto set = averaging_set(space.group(), space.ambient_dim());
  Vector acc = Vector::Zero(space.ambient_dim());
  for (const auto& t : set) acc += t * w.coords;
  return StateVector(acc / static_cast<double>(set.size()));
}

StateVector maximally_mixed(const StateSpace& space) {
  const auto& g = space.group();
  if (g.is_parametric()) return StateVector(Vector::Unit(space.ambient_dim(), 0));
  if (std::holds_alternative<TrivialGroup>(g.kind)) {
    if (!space.has_finite_extreme_points()) return StateVector(Vector::Unit(space.ambient_dim(), 0));
    const auto pts = space.extreme_points();
    return mix(pts, std::vector<double>(pts.size(), 1.0 / static_cast<double>(pts.size())));
  }
  Rng rng(0);
  return group_average(space, random_pure_state(space, rng));
}

namespace {

bool same(const Matrix& a, const Matrix& b, double tol = 1e-7) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace

void validate_group(const StateSpace& space, unsigned long long seed, int samples) {
  Rng rng(seed);
  const int k = space.ambient_dim();
  std::vector<Matrix> elems;
  const auto& g = space.group();
  if (const auto* f = std::get_if<FiniteMatrixGroup>(&g.kind)) {
    elems = f->elements;
    for (const auto& a : elems) {
      if (a.rows() != k || a.cols() != k) throw InvalidGroupDescriptor("group element has wrong shape");
      bool has_inverse = false;
      for (const auto& b : elems) {
        const Matrix ab = a * b;
        if (!std::any_of(elems.begin(), elems.end(), [&](const Matrix& c) { return same(ab, c); }))
          throw InvalidGroupDescriptor("finite group is not closed under products");
        if (same(ab, Matrix::Identity(k, k))) has_inverse = true;
      }
      if (!has_inverse) throw InvalidGroupDescriptor("finite group element has no inverse in the list");
    }
  } else {
    for (int i = 0; i < 20; ++i) elems.push_back(random_group_element(space, rng));
    for (const auto& t : averaging_set(g, k)) elems.push_back(t);
  }
  for (const auto& t : elems) {
    if ((t.row(0) - Vector::Unit(k, 0).transpose()).lpNorm<Eigen::Infinity>() > 1e-9)
      throw InvalidGroupDescriptor("transformation does not preserve normalization");
    if (space.has_finite_extreme_points()) {
      for (const auto& v : space.extreme_points()) apply(space, t, v);
    }
    for (int s = 0; s < samples; ++s) apply(space, t, random_state(space, rng));
  }
}

namespace {

Matrix householder(const Vector& v) {
  const auto n = v.size();
  return Matrix::Identity(n, n) - 2.0 * v * v.transpose() / v.squaredNorm();
}

// SO(d) element with r a = b for unit vectors, as a product of two reflections.
Matrix rotation_between(const Vector& a, const Vector& b) {
  const auto d = a.size();
  Matrix h1 = Matrix::Identity(d, d);
  if ((a - b).norm() > 1e-14) h1 = householder(a - b);
  Eigen::Index k = 0;
  b.cwiseAbs().minCoeff(&k);
  Vector w = Vector::Unit(d, k) - b(k) * b;
  return householder(w) * h1;
}

// Unitary with u psi = phase * phi.
CMatrix unitary_between(const CVector& psi, const CVector& phi) {
  const auto n = psi.size();
  const Complex c = phi.dot(psi);  // <phi|psi>
  CVector aligned = phi;
  if (std::abs(c) > 1e-15) aligned *= c / std::abs(c);
  const CVector v = psi - aligned;
  if (v.norm() < 1e-14) return CMatrix::Identity(n, n);
  return CMatrix::Identity(n, n) - 2.0 * v * v.adjoint() / v.squaredNorm();
}

std::optional<std::size_t> find_vertex(const std::vector<StateVector>& verts, const Vector& x) {
  for (std::size_t i = 0; i < verts.size(); ++i)
    if ((verts[i].coords - x).lpNorm<Eigen::Infinity>() <= 1e-7) return i;
  return std::nullopt;
}

std::vector<Matrix> generators(const StateSpace& space) {
  const auto& g = space.group();
  if (const auto* f = std::get_if<FiniteMatrixGroup>(&g.kind)) return f->elements;
  if (const auto* p = std::get_if<Permutations>(&g.kind)) {
    std::vector<Matrix> out;
    for (int i = 1; i < p->count; ++i) {
      std::vector<int> perm(static_cast<std::size_t>(p->count));
      std::iota(perm.begin(), perm.end(), 0);
      std::swap(perm[0], perm[static_cast<std::size_t>(i)]);
      out.push_back(permutation_action(perm));
    }
    return out;
  }
  return {};
}

}  // namespace

TransitivityResult transitivity_check(const StateSpace& space, unsigned long long seed, int pairs) {
  TransitivityResult res;
  const auto& g = space.group();
  const int k = space.ambient_dim();
  if (std::holds_alternative<LocalProductGroup>(g.kind))
    throw UnsupportedRepresentation("transitivity on composite spaces is not evaluated");

  if (const auto* r = std::get_if<ParametricRotations>(&g.kind)) {
    if (!space.as<BallRep>() || r->dim + 1 != k)
      throw InvalidGroupDescriptor("rotation group does not match " + space.describe());
    if (r->dim == 1) {
      res.stranded = StateVector{1.0, -1.0};
      res.detail = "SO(1) is trivial; [1, -1] is not reachable from [1, 1]";
      return res;
    }
    Rng rng(seed);
    for (int p = 0; p < pairs; ++p) {
      const Vector a = random_unit_vector(r->dim, rng);
      const Vector b = random_unit_vector(r->dim, rng);
      const Matrix rot = rotation_between(a, b);
      const bool good = (rot.transpose() * rot - Matrix::Identity(r->dim, r->dim)).norm() <= 1e-9 &&
                        rot.determinant() > 0.0 && (rot * a - b).norm() <= 1e-9;
      Vector fa(k), fb(k);
      fa << 1.0, a;
      fb << 1.0, b;
      if (!good) {
        res.from = StateVector(fa);
        res.stranded = StateVector(fb);
        res.detail = "rotation construction failed";
        return res;
      }
      if (p == 0) {
        res.from = StateVector(fa);
        res.to = StateVector(fb);
        res.map = rotation_action(rot);
      }
    }
    res.ok = true;
    res.detail = "explicit SO(" + std::to_string(r->dim) + ") maps between " + std::to_string(pairs) +
                 " sampled pure-state pairs";
    return res;
  }

  if (const auto* u = std::get_if<ParametricUnitaryConjugations>(&g.kind)) {
    if (!space.as<QuantumRep>() || u->levels * u->levels != k)
      throw InvalidGroupDescriptor("unitary group does not match " + space.describe());
    Rng rng(seed);
    for (int p = 0; p < pairs; ++p) {
      const CVector psi = random_unit_cvector(u->levels, rng);
      const CVector phi = random_unit_cvector(u->levels, rng);
      const CMatrix un = unitary_between(psi, phi);
      const Matrix t = unitary_action(un);
      const StateVector a(quantum::pure_coords(psi));
      const StateVector b(quantum::pure_coords(phi));
      const bool good =
          (un.adjoint() * un - CMatrix::Identity(u->levels, u->levels)).norm() <= 1e-9 &&
          (t * a.coords - b.coords).norm() <= 1e-9;
      if (!good) {
        res.from = a;
        res.stranded = b;
        res.detail = "unitary construction failed";
        return res;
      }
      if (p == 0) {
        res.from = a;
        res.to = b;
        res.map = t;
      }
    }
    res.ok = true;
    res.detail = "explicit unitaries map between " + std::to_string(pairs) + " sampled pure-state pairs";
    return res;
  }

  if (!space.has_finite_extreme_points()) {
    Rng rng(seed);
    res.from = random_pure_state(space, rng);
    res.stranded = random_pure_state(space, rng);
    res.detail = "a finite group cannot act transitively on a continuum of pure states";
    return res;
  }
  const auto verts = space.extreme_points();
  res.from = verts.front();
  if (verts.size() == 1) {
    res.ok = true;
    res.to = verts.front();
    res.map = Matrix::Identity(k, k);
    res.detail = "single pure state";
    return res;
  }
  const auto gens = generators(space);
  std::vector<std::optional<Matrix>> reach(verts.size());
  reach[0] = Matrix::Identity(k, k);
  std::vector<std::size_t> queue{0};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t i = queue[q];
    for (const auto& t : gens) {
      if (t.rows() != k || t.cols() != k) throw InvalidGroupDescriptor("group element has wrong shape");
      const auto j = find_vertex(verts, t * verts[i].coords);
      if (!j) throw InvalidGroupDescriptor("group element maps a vertex to a non-vertex");
      if (!reach[*j]) {
        reach[*j] = Matrix(t * *reach[i]);
        queue.push_back(*j);
      }
    }
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (!reach[i]) {
      res.stranded = verts[i];
      res.detail = "orbit of the first vertex has " + std::to_string(queue.size()) + " of " +
                   std::to_string(verts.size()) + " vertices";
      return res;
    }
  }
  res.ok = true;
  res.to = verts[queue.back()];
  res.map = *reach[queue.back()];
  res.detail = "single orbit of " + std::to_string(verts.size()) + " vertices";
  return res;
}

ContinuityResult continuity_check(const StateSpace& space, unsigned long long seed, int pairs) {
  ContinuityResult res;
  const auto& g = space.group();
  const std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0};
  Rng rng(seed);
  if (const auto* r = std::get_if<ParametricRotations>(&g.kind)) {
    const int d = r->dim;
    if (d < 2) {
      res.detail = "SO(1) is trivial";
      return res;
    }
    for (int p = 0; p < pairs; ++p) {
      const Vector a = random_unit_vector(d, rng);
      const Vector b = random_unit_vector(d, rng);
      Vector e2 = b - a.dot(b) * a;
      if (e2.norm() < 1e-12) {
        Eigen::Index k = 0;
        a.cwiseAbs().minCoeff(&k);
        e2 = Vector::Unit(d, k) - a(k) * a;
      }
      e2.normalize();
      const double theta = std::atan2(b.dot(e2), a.dot(b));
      for (double t : ts) {
        const Matrix plane = a * a.transpose() + e2 * e2.transpose();
        const Matrix gt = Matrix::Identity(d, d) + (std::cos(t * theta) - 1.0) * plane +
                          std::sin(t * theta) * (e2 * a.transpose() - a * e2.transpose());
        const bool orth = (gt.transpose() * gt - Matrix::Identity(d, d)).norm() <= 1e-9 && gt.determinant() > 0.0;
        if (!orth || (t == 0.0 && (gt - Matrix::Identity(d, d)).norm() > 1e-12) ||
            (t == 1.0 && (gt * a - b).norm() > 1e-9) || std::abs((gt * a).norm() - 1.0) > 1e-9) {
          res.detail = "rotation path check failed";
          return res;
        }
      }
    }
    res.ok = true;
    res.detail = "plane-rotation paths from the identity reach " + std::to_string(pairs) + " sampled targets";
    return res;
  }
  if (const auto* u = std::get_if<ParametricUnitaryConjugations>(&g.kind)) {
    const int n = u->levels;
    if (n < 2) {
      res.ok = true;
      res.detail = "single pure state";
      return res;
    }
    for (int p = 0; p < pairs; ++p) {
      const CVector psi = random_unit_cvector(n, rng);
      CVector phi = random_unit_cvector(n, rng);
      const Complex c = phi.dot(psi);
      if (std::abs(c) > 1e-15) phi *= c / std::abs(c);
      const double overlap = psi.dot(phi).real();
      CVector chi = phi - overlap * psi;
      if (chi.norm() < 1e-12) {
        chi = CVector::Unit(n, std::abs(psi[0]) < 0.5 ? 0 : 1);
        chi -= psi.dot(chi) * psi;
      }
      chi.normalize();
      const double theta = std::atan2(chi.dot(phi).real(), overlap);
      const StateVector target(quantum::pure_coords(phi));
      for (double t : ts) {
        const CMatrix plane = psi * psi.adjoint() + chi * chi.adjoint();
        const CMatrix gt = CMatrix::Identity(n, n) + (std::cos(t * theta) - 1.0) * plane +
                           std::sin(t * theta) * (chi * psi.adjoint() - psi * chi.adjoint());
        const bool unitary = (gt.adjoint() * gt - CMatrix::Identity(n, n)).norm() <= 1e-9;
        const Matrix act = unitary_action(gt);
        const StateVector img(act * quantum::pure_coords(psi));
        if (!unitary || (t == 0.0 && (gt - CMatrix::Identity(n, n)).norm() > 1e-12) ||
            (t == 1.0 && (img.coords - target.coords).norm() > 1e-9) || !contains_state(space, img, 1e-9)) {
          res.detail = "unitary path check failed";
          return res;
        }
      }
    }
    res.ok = true;
    res.detail = "one-parameter unitary paths from the identity reach " + std::to_string(pairs) +
                 " sampled targets";
    return res;
  }
  if (const auto* l = std::get_if<LocalProductGroup>(&g.kind)) {
    if (const auto* t = space.as<TensorRep>()) {
      const auto ca = continuity_check(*t->a, seed, pairs);
      const auto cb = continuity_check(*t->b, seed + 1, pairs);
      res.ok = ca.ok && cb.ok;
      res.detail = "factors: " + ca.detail + "; " + cb.detail;
      return res;
    }
    (void)l;
    res.detail = "local product of finite groups";
    return res;
  }
  res.detail = "group " + g.name() + " is finite; no continuous path between distinct pure states";
  return res;
}

StrictConvexityResult strict_convexity_check(const StateSpace& space) {
  StrictConvexityResult res;
  if (space.has_finite_extreme_points()) {
    const auto verts = space.extreme_points();
    if (verts.size() <= 2) {
      res.strictly_convex = true;
      res.detail = verts.size() == 1 ? "single point" : "segment";
      return res;
    }
    for (const auto& f : facets(space)) {
      std::vector<StateVector> on;
      for (const auto& v : verts)
        if (std::abs(f.functional.dot(v.coords)) <= 1e-9) on.push_back(v);
      if (on.size() >= 2) {
        res.witness = mix({on[0], on[1]}, {0.5, 0.5});
        res.support = f;
        res.detail = "midpoint of an edge lies on a facet";
        return res;
      }
    }
    res.detail = "no facet contains two vertices";
    return res;
  }
  if (space.as<BallRep>()) {
    res.strictly_convex = true;
    res.detail = "Euclidean ball";
    return res;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    if (n <= 2) {
      res.strictly_convex = true;
      res.detail = "qubit state space is a ball";
      return res;
    }
    CMatrix rho = CMatrix::Zero(n, n);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    res.witness = StateVector(quantum::density_to_coords(rho));
    const CVector last = CVector::Unit(n, n - 1);
    res.support = Effect(quantum::operator_to_functional(last * last.adjoint()));
    res.detail = "rank-two mixed state diag(1/2, 1/2, 0, ...) lies on the boundary";
    return res;
  }
  const auto& t = *space.as<TensorRep>();
  const auto ca = capacity(*t.a);
  const auto cb = capacity(*t.b);
  if (ca.witness.states.size() < 2 || cb.witness.states.size() < 2) {
    res.detail = "composite with a trivial factor";
    const auto inner = strict_convexity_check(ca.witness.states.size() < 2 ? *t.b : *t.a);
    res.strictly_convex = inner.strictly_convex;
    return res;
  }
  res.witness = StateVector(
      kron(ca.witness.states[0].coords, mix({cb.witness.states[0], cb.witness.states[1]}, {0.5, 0.5}).coords));
  res.support = Effect(kron(ca.witness.measurement.effects[1].functional, Vector::Unit(t.b->ambient_dim(), 0)));
  res.detail = "product of a pure state with a mixture lies on a product face";
  return res;
}

}  // namespace gptlab
