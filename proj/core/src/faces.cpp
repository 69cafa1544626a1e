#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>

#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab {

namespace {

constexpr double kFaceTol = 1e-7;

// Hermitian spanning set of the r x r matrices.
std::vector<CMatrix> hermitian_basis(int r) {
  std::vector<CMatrix> out;
  for (int i = 0; i < r; ++i) {
    CMatrix d = CMatrix::Zero(r, r);
    d(i, i) = 1.0;
    out.push_back(d);
  }
  for (const auto& b : quantum::gell_mann_basis(r)) {
    if ((b - b.diagonal().asDiagonal().toDenseMatrix()).norm() > 0.0) out.push_back(b);
  }
  return out;
}

}  // namespace

Face face_extract(const StateSpace& space, const Effect& e, double tol) {
  if (e.dim() != space.ambient_dim()) throw DimensionError("face_extract: dimension mismatch");
  const Range r = functional_range(space, e.functional);
  if (r.min < -tol || r.max > 1.0 + tol) throw DomainError("face_extract: functional is not an effect");
  if (r.max < 1.0 - tol)
    throw NoFaceError("effect reaches only " + std::to_string(r.max) + " on " + space.describe());
  Face f;
  f.parent = std::make_shared<const StateSpace>(space);
  f.effect = e;
  if (space.has_finite_extreme_points()) {
    FaceVertices fv;
    for (const auto& v : space.extreme_points())
      if (std::abs(evaluate(e, v) - 1.0) <= kFaceTol) fv.vertices.push_back(v);
    f.members = std::move(fv);
    return f;
  }
  if (space.as<BallRep>()) {
    const Vector h = e.functional.tail(e.dim() - 1);
    if (h.norm() <= 1e-12) {
      f.members = FaceWhole{};
    } else {
      Vector p(e.dim());
      p << 1.0, h / h.norm();
      f.members = FacePoint{StateVector(p)};
    }
    return f;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(quantum::functional_to_operator(e.functional, q->levels));
    std::vector<int> cols;
    for (int i = 0; i < q->levels; ++i)
      if (es.eigenvalues()[i] >= 1.0 - kFaceTol) cols.push_back(i);
    CMatrix basis(q->levels, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]);
    if (cols.size() == static_cast<std::size_t>(q->levels)) f.members = FaceWhole{};
    else if (cols.size() == 1) f.members = FacePoint{StateVector(quantum::pure_coords(basis.col(0)))};
    else f.members = FaceQuantumSupport{basis};
    return f;
  }
  throw UnsupportedRepresentation("face extraction on " + space.describe());
}

int Face::affine_dimension() const {
  if (const auto* v = std::get_if<FaceVertices>(&members)) {
    if (v->vertices.size() <= 1) return 0;
    Matrix d(static_cast<Eigen::Index>(v->vertices.size() - 1), v->vertices.front().dim());
    for (std::size_t i = 1; i < v->vertices.size(); ++i)
      d.row(static_cast<Eigen::Index>(i - 1)) = (v->vertices[i].coords - v->vertices[0].coords).transpose();
    return numerical_rank(d, 1e-9);
  }
  if (std::holds_alternative<FacePoint>(members)) return 0;
  if (std::holds_alternative<FaceWhole>(members)) return gptlab::affine_dimension(*parent);
  const auto& s = std::get<FaceQuantumSupport>(members);
  const int r = static_cast<int>(s.basis.cols());
  const auto herm = hermitian_basis(r);
  Matrix span(static_cast<Eigen::Index>(herm.size()), parent->ambient_dim());
  for (std::size_t i = 0; i < herm.size(); ++i)
    span.row(static_cast<Eigen::Index>(i)) =
        quantum::density_to_coords(s.basis * herm[i] * s.basis.adjoint()).transpose();
  return numerical_rank(span, 1e-9) - 1;
}

std::optional<std::size_t> Face::extreme_point_count() const {
  if (const auto* v = std::get_if<FaceVertices>(&members)) return v->vertices.size();
  if (std::holds_alternative<FacePoint>(members)) return 1;
  if (std::holds_alternative<FaceWhole>(members)) {
    if (parent->has_finite_extreme_points()) return parent->extreme_points().size();
    return std::nullopt;
  }
  return std::nullopt;
}

StateSpace Face::as_space() const {
  if (const auto* v = std::get_if<FaceVertices>(&members)) {
    if (v->vertices.size() == 1) return StateSpace::simplex(1);
    const auto& vs = v->vertices;
    Matrix d(vs.front().dim(), static_cast<Eigen::Index>(vs.size() - 1));
    for (std::size_t i = 1; i < vs.size(); ++i)
      d.col(static_cast<Eigen::Index>(i - 1)) = vs[i].coords - vs[0].coords;
    Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeThinU);
    const int r = affine_dimension();
    const Matrix u = svd.matrixU().leftCols(r);
    std::vector<StateVector> out;
    for (const auto& x : vs) {
      Vector c(r + 1);
      c[0] = 1.0;
      c.tail(r) = u.transpose() * (x.coords - vs[0].coords);
      out.emplace_back(std::move(c));
    }
    return StateSpace::polytope(std::move(out));
  }
  if (std::holds_alternative<FacePoint>(members)) return StateSpace::simplex(1);
  if (std::holds_alternative<FaceWhole>(members)) return *parent;
  return StateSpace::quantum(static_cast<int>(std::get<FaceQuantumSupport>(members).basis.cols()));
}

bool Face::members_on_face(double tol) const {
  if (const auto* v = std::get_if<FaceVertices>(&members)) {
    return std::all_of(v->vertices.begin(), v->vertices.end(),
                       [&](const StateVector& s) { return std::abs(evaluate(effect, s) - 1.0) <= tol; });
  }
  if (const auto* p = std::get_if<FacePoint>(&members)) return std::abs(evaluate(effect, p->point) - 1.0) <= tol;
  if (std::holds_alternative<FaceWhole>(members))
    return (effect.functional - parent->unit_effect().functional).lpNorm<Eigen::Infinity>() <= tol;
  const auto& s = std::get<FaceQuantumSupport>(members);
  for (Eigen::Index c = 0; c < s.basis.cols(); ++c) {
    if (std::abs(evaluate(effect, StateVector(quantum::pure_coords(s.basis.col(c)))) - 1.0) > tol) return false;
  }
  return true;
}

namespace {

// Width profile of the body in coordinates whitened by an invariant inner
// product: the identity on Bloch / Gell-Mann coordinates, the vertex
// covariance for polytopes. Constant widths mean ellipsoidal.
std::string radius_profile(const StateSpace& s) {
  const int dim = affine_dimension(s);
  if (dim <= 1) return "isotropic";
  const int k = s.ambient_dim();
  Matrix frame;  // k x dim: whitened direction -> functional hat
  if (s.has_finite_extreme_points()) {
    const auto verts = s.extreme_points();
    Vector mean = Vector::Zero(k);
    for (const auto& v : verts) mean += v.coords;
    mean /= static_cast<double>(verts.size());
    Matrix cov = Matrix::Zero(k, k);
    for (const auto& v : verts) cov += (v.coords - mean) * (v.coords - mean).transpose();
    cov /= static_cast<double>(verts.size());
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    frame = Matrix::Zero(k, dim);
    int c = 0;
    for (int i = k - 1; i >= 0 && c < dim; --i, ++c)
      frame.col(c) = es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()[i]);
  } else if (s.as<BallRep>() || s.as<QuantumRep>()) {
    frame = Matrix::Zero(k, dim);
    frame.bottomRows(dim) = Matrix::Identity(dim, dim);
  } else {
    return "unknown";
  }
  Rng rng(7);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vector f = frame * random_unit_vector(dim, rng);
    const Range r = functional_range(s, f);
    const double w = r.max - r.min;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  const double ratio = hi / lo;
  if (ratio - 1.0 <= 1e-6) return "isotropic";
  char buf[64];
  std::snprintf(buf, sizeof buf, "anisotropic(%.4f)", ratio);
  return buf;
}

bool isotropic(const std::string& p) { return p == "isotropic"; }

std::string capacity_text(const StateSpace& s) {
  const auto c = capacity(s);
  return (c.exact ? "" : ">=") + std::to_string(c.value);
}

std::string count_text(const StateSpace& s) {
  if (s.has_finite_extreme_points()) return std::to_string(s.extreme_points().size());
  return "continuum";
}

}  // namespace

EquivalenceResult equivalence_probe(const StateSpace& s1, const StateSpace& s2) {
  EquivalenceResult res;
  auto compare = [&](const std::string& name, const std::string& a, const std::string& b, bool equal) {
    res.compared.push_back(name);
    if (!equal) {
      res.invariant = name;
      res.left = a;
      res.right = b;
      return false;
    }
    return true;
  };
  const int d1 = affine_dimension(s1);
  const int d2 = affine_dimension(s2);
  if (!compare("affine dimension", std::to_string(d1), std::to_string(d2), d1 == d2)) return res;
  const auto c1 = capacity_text(s1);
  const auto c2 = capacity_text(s2);
  if (!compare("capacity", c1, c2, c1 == c2)) return res;
  const bool sc1 = strict_convexity_check(s1).strictly_convex;
  const bool sc2 = strict_convexity_check(s2).strictly_convex;
  if (!compare("strict convexity", sc1 ? "true" : "false", sc2 ? "true" : "false", sc1 == sc2)) return res;
  const auto n1 = count_text(s1);
  const auto n2 = count_text(s2);
  if (!compare("extreme-point count", n1, n2, n1 == n2)) return res;
  if (s1.as<BallRep>() || s2.as<BallRep>()) {
    const auto p1 = radius_profile(s1);
    const auto p2 = radius_profile(s2);
    if (!compare("radius profile", p1, p2, isotropic(p1) == isotropic(p2))) return res;
  }
  res.consistent = true;
  return res;
}

EquivalenceResult equivalence_probe(const Face& f, const StateSpace& s2) {
  return equivalence_probe(f.as_space(), s2);
}

bool two_bit_face_dimension_test(int d) {
  if (d < 1) throw DomainError("two_bit_face_dimension_test: d must be >= 1");
  const long long dd = d;
  return !(dd > 3 && (dd - 1) * (dd - 1) > dd + 1);
}

bool g2_exception(int d) { return d == 7; }

FiniteMatrixGroup polytope_symmetry_group(const std::vector<StateVector>& vertices, const SymmetryOptions& opts) {
  const std::size_t m = vertices.size();
  if (m == 0) throw ValidationError("symmetry group of an empty vertex list");
  if (m > opts.vertex_budget)
    throw BudgetExceeded("symmetry", "polytope has " + std::to_string(m) + " vertices; budget is " +
                                         std::to_string(opts.vertex_budget));
  const int k = vertices.front().dim();
  // A vertex basis of R^K.
  std::vector<std::size_t> basis;
  Matrix acc(0, k);
  for (std::size_t i = 0; i < m && static_cast<int>(basis.size()) < k; ++i) {
    Matrix next(acc.rows() + 1, k);
    next << acc, vertices[i].coords.transpose();
    if (numerical_rank(next, 1e-9) == next.rows()) {
      acc = next;
      basis.push_back(i);
    }
  }
  if (static_cast<int>(basis.size()) != k) throw ValidationError("vertices do not span the ambient space");
  Matrix vb(k, k);
  for (int c = 0; c < k; ++c) vb.col(c) = vertices[basis[static_cast<std::size_t>(c)]].coords;
  const Matrix vb_inv = vb.inverse();

  // Affinely invariant distances from the vertex covariance.
  Vector mean = Vector::Zero(k);
  for (const auto& v : vertices) mean += v.coords;
  mean /= static_cast<double>(m);
  Matrix cov = Matrix::Zero(k, k);
  for (const auto& v : vertices) cov += (v.coords - mean) * (v.coords - mean).transpose();
  const Matrix pinv = cov.completeOrthogonalDecomposition().pseudoInverse();
  auto dist = [&](const Vector& a, const Vector& b) { return (a - b).dot(pinv * (a - b)); };
  std::vector<std::vector<double>> dm(m, std::vector<double>(m));
  std::vector<double> dc(m);
  for (std::size_t i = 0; i < m; ++i) {
    dc[i] = dist(vertices[i].coords, mean);
    for (std::size_t j = 0; j < m; ++j) dm[i][j] = dist(vertices[i].coords, vertices[j].coords);
  }
  const double tol = 1e-7;

  FiniteMatrixGroup g;
  std::vector<std::size_t> img(basis.size());
  std::vector<bool> used(m, false);
  std::size_t candidates = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t level) {
    if (level == basis.size()) {
      Matrix vi(k, k);
      for (int c = 0; c < k; ++c) vi.col(c) = vertices[img[static_cast<std::size_t>(c)]].coords;
      const Matrix t = vi * vb_inv;
      std::vector<bool> hit(m, false);
      for (const auto& v : vertices) {
        const Vector x = t * v.coords;
        bool found = false;
        for (std::size_t j = 0; j < m && !found; ++j) {
          if (!hit[j] && (vertices[j].coords - x).lpNorm<Eigen::Infinity>() <= tol) hit[j] = found = true;
        }
        if (!found) return;
      }
      g.elements.push_back(t);
      return;
    }
    const std::size_t src = basis[level];
    for (std::size_t cand = 0; cand < m; ++cand) {
      if (used[cand] || std::abs(dc[cand] - dc[src]) > tol) continue;
      bool ok = true;
      for (std::size_t l = 0; l < level && ok; ++l) ok = std::abs(dm[cand][img[l]] - dm[src][basis[l]]) <= tol;
      if (!ok) continue;
      if (++candidates > opts.candidate_budget)
        throw BudgetExceeded("symmetry", "symmetry search exceeded its candidate budget");
      used[cand] = true;
      img[level] = cand;
      rec(level + 1);
      used[cand] = false;
    }
  };
  rec(0);
  return g;
}

}  // namespace gptlab
