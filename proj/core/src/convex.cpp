#include "gptlab/convex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "gptlab/error.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/polytope.hpp"
#include "gptlab/quantum_basis.hpp"

namespace gptlab {

StateVector::StateVector(std::initializer_list<double> values) : coords(values.size()) {
  Eigen::Index i = 0;
  for (double v : values) coords[i++] = v;
}

Effect::Effect(std::initializer_list<double> values) : functional(values.size()) {
  Eigen::Index i = 0;
  for (double v : values) functional[i++] = v;
}

Effect Effect::unit(int k) {
  Vector f = Vector::Zero(k);
  f[0] = 1.0;
  return Effect(std::move(f));
}

Effect Effect::complement() const { return Effect(unit(dim()).functional - functional); }

bool Measurement::sums_to_unit(double tol) const {
  if (effects.empty()) return false;
  Vector s = Vector::Zero(effects.front().dim());
  for (const auto& e : effects) {
    if (e.dim() != s.size()) return false;
    s += e.functional;
  }
  return (s - Effect::unit(static_cast<int>(s.size())).functional).lpNorm<Eigen::Infinity>() <= tol;
}

std::string to_string(CompositionRule r) { return r == CompositionRule::MinTensor ? "min" : "max"; }

CompositionRule parse_rule(const std::string& s) {
  if (s == "min" || s == "MinTensor") return CompositionRule::MinTensor;
  if (s == "max" || s == "MaxTensor") return CompositionRule::MaxTensor;
  throw ValidationError("unknown composition rule '" + s + "'");
}

namespace {

Matrix stack_rows(const std::vector<StateVector>& pts) {
  Matrix m(static_cast<Eigen::Index>(pts.size()), pts.front().dim());
  for (std::size_t i = 0; i < pts.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = pts[i].coords.transpose();
  return m;
}

// Is target a convex combination of pts (columns of the LP)?
bool in_hull(const std::vector<StateVector>& pts, const Vector& target, double tol,
             std::size_t skip = static_cast<std::size_t>(-1)) {
  std::vector<const StateVector*> use;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != skip) use.push_back(&pts[i]);
  if (use.empty()) return false;
  const int n = static_cast<int>(use.size());
  auto prog = lp::LinearProgram::with_variables(n);
  prog.eq_matrix.resize(target.size(), n);
  for (int j = 0; j < n; ++j) prog.eq_matrix.col(j) = use[static_cast<std::size_t>(j)]->coords;
  prog.eq_rhs = target;
  lp::SolverOptions o;
  o.feasibility_tol = tol;
  return lp::feasible(prog, o).feasible;
}

void check_dim(int expected, int got, const char* what) {
  if (expected != got)
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(got));
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

std::vector<Vector> simplex_vertices(int n) {
  std::vector<Vector> out;
  for (int i = 1; i <= n; ++i) {
    Vector v = Vector::Zero(n);
    v[0] = 1.0;
    if (i < n) v[i] = 1.0;
    out.push_back(v);
  }
  return out;
}

std::vector<Vector> simplex_readouts(int n) {
  std::vector<Vector> out;
  for (int i = 1; i < n; ++i) out.push_back(Vector::Unit(n, i));
  Vector last = -Vector::Ones(n);
  last[0] = 1.0;
  out.push_back(last);
  return out;
}

// Finite generators of the effect cone, scaled to max 1, when they exist.
std::optional<std::vector<Vector>> finite_rays(const StateSpace& s) {
  if (const auto* p = s.as<PolytopeRep>()) return p->facets;
  if (const auto* q = s.as<SimplexRep>()) return simplex_readouts(q->levels);
  if (const auto* b = s.as<BallRep>(); b && b->dim == 1) {
    return std::vector<Vector>{Vector{{0.5, 0.5}}, Vector{{0.5, -0.5}}};
  }
  if (const auto* q = s.as<QuantumRep>(); q && q->levels == 1) return std::vector<Vector>{Vector::Ones(1)};
  return std::nullopt;
}

std::optional<std::vector<Vector>> finite_points(const StateSpace& s) {
  if (!s.has_finite_extreme_points()) return std::nullopt;
  std::vector<Vector> out;
  for (const auto& p : s.extreme_points()) out.push_back(p.coords);
  return out;
}

using Oracle = std::function<std::pair<double, Vector>(const Vector&)>;

// min over x in X, y in Y of x^T W y, where the oracles minimize a linear
// functional over X and Y. Exact if either side is given by a finite list;
// otherwise alternating minimization from several starts (an upper bound).
std::pair<double, std::pair<Vector, Vector>> bilinear_min(
    const Matrix& w, const Oracle& oa, const std::optional<std::vector<Vector>>& fa, const Oracle& ob,
    const std::optional<std::vector<Vector>>& fb) {
  double best = std::numeric_limits<double>::infinity();
  Vector bx, by;
  if (fa) {
    for (const auto& x : *fa) {
      auto [v, y] = ob(w.transpose() * x);
      if (v < best) best = v, bx = x, by = y;
    }
    return {best, {bx, by}};
  }
  if (fb) {
    for (const auto& y : *fb) {
      auto [v, x] = oa(w * y);
      if (v < best) best = v, bx = x, by = y;
    }
    return {best, {bx, by}};
  }
  std::vector<Vector> starts;
  Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
  for (Eigen::Index k = 0; k < svd.matrixU().cols(); ++k) {
    starts.push_back(ob(w.transpose() * svd.matrixU().col(k)).second);
    starts.push_back(ob(-w.transpose() * svd.matrixU().col(k)).second);
  }
  std::mt19937_64 rng(0x5eedULL);
  std::normal_distribution<double> g;
  for (int k = 0; k < 16; ++k) {
    Vector c(w.cols());
    for (auto& x : c) x = g(rng);
    starts.push_back(ob(c).second);
  }
  for (auto y : starts) {
    double prev = std::numeric_limits<double>::infinity();
    Vector x;
    for (int it = 0; it < 300; ++it) {
      x = oa(w * y).second;
      auto [v, ny] = ob(w.transpose() * x);
      y = ny;
      if (v > prev - 1e-15 * (1.0 + std::abs(v))) {
        prev = std::min(prev, v);
        break;
      }
      prev = v;
    }
    if (prev < best) best = prev, bx = x, by = y;
  }
  return {best, {bx, by}};
}

Matrix as_matrix(const Vector& v, int ka, int kb) {
  Matrix w(ka, kb);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) w(i, j) = v[i * kb + j];
  return w;
}

Oracle state_oracle(const StateSpace& s) {
  return [&s](const Vector& c) {
    auto r = minimize_over_states(s, c);
    return std::make_pair(r.value, r.state.coords);
  };
}

Oracle ray_oracle(const StateSpace& s) {
  return [&s](const Vector& c) {
    auto r = cone_probe(s, c);
    return std::make_pair(r.value, r.minimizer.functional);
  };
}

bool ppt_applicable(const TensorRep& t) {
  auto fa = quantum_frame(*t.a);
  auto fb = quantum_frame(*t.b);
  return fa && fb && fa->levels * fb->levels <= 6;
}

bool ppt_contains(const TensorRep& t, const Vector& v, double tol) {
  auto fa = quantum_frame(*t.a);
  auto fb = quantum_frame(*t.b);
  const Vector q = kron(fa->to_quantum, fb->to_quantum) * v;
  const int na = fa->levels;
  const int nb = fb->levels;
  const CMatrix rho = quantum::bipartite_coords_to_density(q, na, nb);
  if (min_eigenvalue(rho) < -tol) return false;
  CMatrix pt(na * nb, na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < nb; ++l) pt(i * nb + j, k * nb + l) = rho(i * nb + l, k * nb + j);
  return min_eigenvalue(pt) >= -tol;
}

bool min_equals_max(const TensorRep& t) { return t.a->is_classical() || t.b->is_classical(); }

}  // namespace

StateSpace StateSpace::polytope(std::vector<StateVector> vertices, GroupDescriptor group, double tol) {
  if (vertices.empty()) throw ValidationError("polytope needs at least one vertex");
  const int k = vertices.front().dim();
  if (k < 1) throw ValidationError("polytope vertices must have positive dimension");
  std::vector<Vector> pts;
  for (const auto& v : vertices) {
    if (v.dim() != k) throw ValidationError("polytope vertices have mixed dimensions");
    if (!v.coords.allFinite()) throw ValidationError("polytope vertex has non-finite coordinates");
    if (std::abs(v.coords[0] - 1.0) > tol)
      throw ValidationError("polytope vertex is not normalized (coords[0] != 1)");
    pts.push_back(v.coords);
  }
  pts = polytope::canonicalize(std::move(pts), tol);
  std::vector<StateVector> canon;
  for (auto& p : pts) canon.emplace_back(std::move(p));
  if (numerical_rank(stack_rows(canon), 1e-9) != k)
    throw ValidationError("ambient dimension " + std::to_string(k) +
                          " exceeds 1 + affine dimension of the vertex set");
  for (std::size_t i = 0; i < canon.size() && canon.size() > 1; ++i) {
    if (in_hull(canon, canon[i].coords, tol, i))
      throw ValidationError("vertex " + std::to_string(i) + " is not extreme");
  }
  PolytopeRep rep;
  rep.vertices = std::move(canon);
  std::vector<Vector> raw;
  for (const auto& v : rep.vertices) raw.push_back(v.coords);
  polytope::DdOptions dd;
  dd.exact = raw.size() <= 32 && k <= 9;
  rep.facets = polytope::facet_functionals(raw, dd);
  return StateSpace(std::move(rep), k, std::move(group));
}

StateSpace StateSpace::simplex(int levels) {
  if (levels < 1) throw DomainError("simplex needs N >= 1");
  return StateSpace(SimplexRep{levels}, levels, GroupDescriptor{Permutations{levels}});
}

StateSpace StateSpace::ball(int dim) {
  if (dim < 1) throw DomainError("ball needs d >= 1");
  if (dim == 1) {
    // SO(1) is trivial; the reflection x -> -x is the only nontrivial symmetry.
    Matrix flip = Matrix::Identity(2, 2);
    flip(1, 1) = -1.0;
    return StateSpace(BallRep{1}, 2, GroupDescriptor{FiniteMatrixGroup{{Matrix::Identity(2, 2), flip}}});
  }
  return StateSpace(BallRep{dim}, dim + 1, GroupDescriptor{ParametricRotations{dim}});
}

StateSpace StateSpace::quantum(int levels) {
  if (levels < 1 || levels > 8) throw DomainError("quantum needs 1 <= N <= 8");
  return StateSpace(QuantumRep{levels}, levels * levels,
                    GroupDescriptor{ParametricUnitaryConjugations{levels}});
}

StateSpace StateSpace::tensor(std::shared_ptr<const StateSpace> a, std::shared_ptr<const StateSpace> b,
                              CompositionRule rule) {
  if (!a || !b) throw ValidationError("tensor needs two factors");
  const int k = a->ambient_dim() * b->ambient_dim();
  GroupDescriptor g{LocalProductGroup{std::make_shared<const GroupDescriptor>(a->group()),
                                      std::make_shared<const GroupDescriptor>(b->group()), a->ambient_dim(),
                                      b->ambient_dim()}};
  return StateSpace(TensorRep{std::move(a), std::move(b), rule}, k, std::move(g));
}

StateSpace StateSpace::with_group(GroupDescriptor g) const {
  StateSpace s = *this;
  s.group_ = std::move(g);
  return s;
}

bool StateSpace::has_finite_extreme_points() const {
  if (as<PolytopeRep>() || as<SimplexRep>()) return true;
  if (const auto* b = as<BallRep>()) return b->dim == 1;
  if (const auto* q = as<QuantumRep>()) return q->levels == 1;
  return false;
}

std::vector<StateVector> StateSpace::extreme_points() const {
  if (const auto* p = as<PolytopeRep>()) return p->vertices;
  std::vector<StateVector> out;
  if (const auto* s = as<SimplexRep>()) {
    for (auto& v : simplex_vertices(s->levels)) out.emplace_back(std::move(v));
    return out;
  }
  if (const auto* b = as<BallRep>(); b && b->dim == 1) return {StateVector{1.0, 1.0}, StateVector{1.0, -1.0}};
  if (const auto* q = as<QuantumRep>(); q && q->levels == 1) return {StateVector{1.0}};
  throw UnsupportedRepresentation("extreme points of " + describe() + " form a continuous family");
}

bool StateSpace::is_classical() const {
  if (as<SimplexRep>()) return true;
  if (const auto* p = as<PolytopeRep>()) return static_cast<int>(p->vertices.size()) == ambient_dim_;
  return has_finite_extreme_points();
}

std::string StateSpace::describe() const {
  struct V {
    std::string operator()(const PolytopeRep& p) const {
      return "polytope(" + std::to_string(p.vertices.size()) + " vertices)";
    }
    std::string operator()(const BallRep& b) const { return "ball(" + std::to_string(b.dim) + ")"; }
    std::string operator()(const SimplexRep& s) const { return "simplex(" + std::to_string(s.levels) + ")"; }
    std::string operator()(const QuantumRep& q) const { return "quantum(" + std::to_string(q.levels) + ")"; }
    std::string operator()(const TensorRep& t) const {
      return to_string(t.rule) + "-tensor(" + t.a->describe() + ", " + t.b->describe() + ")";
    }
  };
  return std::visit(V{}, rep_);
}

double evaluate(const Effect& e, const StateVector& s) {
  check_dim(e.dim(), s.dim(), "evaluate");
  return e.functional.dot(s.coords);
}

StateVector mix(const std::vector<StateVector>& states, const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    throw DomainError("mix: need one weight per state");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("mix: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("mix: weights do not sum to 1");
  Vector out = Vector::Zero(states.front().dim());
  for (std::size_t i = 0; i < states.size(); ++i) {
    check_dim(static_cast<int>(out.size()), states[i].dim(), "mix");
    out += weights[i] * states[i].coords;
  }
  return StateVector(std::move(out));
}

bool contains_state(const StateSpace& space, const StateVector& v, double tol) {
  check_dim(space.ambient_dim(), v.dim(), "contains_state");
  if (!v.coords.allFinite()) return false;
  if (std::abs(v.coords[0] - 1.0) > tol) return false;
  if (const auto* p = space.as<PolytopeRep>()) return in_hull(p->vertices, v.coords, tol);
  if (const auto* s = space.as<SimplexRep>()) {
    const int n = s->levels;
    double last = v.coords[0];
    for (int i = 1; i < n; ++i) {
      if (v.coords[i] < -tol) return false;
      last -= v.coords[i];
    }
    return last >= -tol;
  }
  if (space.as<BallRep>()) return v.hat().norm() <= 1.0 + tol;
  if (const auto* q = space.as<QuantumRep>())
    return min_eigenvalue(quantum::coords_to_density(v.coords, q->levels)) >= -tol;
  const auto& t = *space.as<TensorRep>();
  if (t.rule == CompositionRule::MaxTensor || min_equals_max(t))
    return cone_probe(space, v.coords).value >= -tol;
  if (ppt_applicable(t)) return ppt_contains(t, v.coords, tol);
  throw UnsupportedRepresentation("membership in " + space.describe() +
                                  " has no decision procedure beyond 2x2 and 2x3 quantum factors");
}

bool contains_effect(const StateSpace& space, const Effect& f, double tol) {
  check_dim(space.ambient_dim(), f.dim(), "contains_effect");
  const Range r = functional_range(space, f.functional);
  return r.min >= -tol && r.max <= 1.0 + tol;
}

StateOptimum minimize_over_states(const StateSpace& space, const Vector& f) {
  check_dim(space.ambient_dim(), static_cast<int>(f.size()), "minimize_over_states");
  StateOptimum out;
  if (space.has_finite_extreme_points()) {
    out.value = std::numeric_limits<double>::infinity();
    for (const auto& p : space.extreme_points()) {
      const double v = f.dot(p.coords);
      if (v < out.value) out.value = v, out.state = p;
    }
    return out;
  }
  if (space.as<BallRep>()) {
    const Vector fh = f.tail(f.size() - 1);
    const double n = fh.norm();
    Vector s = Vector::Zero(f.size());
    s[0] = 1.0;
    if (n > 0.0) s.tail(f.size() - 1) = -fh / n;
    else s[1] = 1.0;
    out.value = f[0] - n;
    out.state = StateVector(std::move(s));
    return out;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(quantum::functional_to_operator(f, q->levels));
    out.value = es.eigenvalues()[0];
    out.state = StateVector(quantum::pure_coords(es.eigenvectors().col(0)));
    return out;
  }
  const auto& t = *space.as<TensorRep>();
  if (t.rule == CompositionRule::MaxTensor && !min_equals_max(t))
    throw UnsupportedRepresentation("linear optimization over " + space.describe());
  const int ka = t.a->ambient_dim();
  const int kb = t.b->ambient_dim();
  auto [val, xy] = bilinear_min(as_matrix(f, ka, kb), state_oracle(*t.a), finite_points(*t.a),
                                state_oracle(*t.b), finite_points(*t.b));
  out.value = val;
  out.state = StateVector(kron(xy.first, xy.second));
  return out;
}

Range functional_range(const StateSpace& space, const Vector& f) {
  check_dim(space.ambient_dim(), static_cast<int>(f.size()), "functional_range");
  Range r;
  r.min = minimize_over_states(space, f).value;
  r.max = -minimize_over_states(space, -f).value;
  return r;
}

ConeProbe cone_probe(const StateSpace& space, const Vector& v) {
  check_dim(space.ambient_dim(), static_cast<int>(v.size()), "cone_probe");
  ConeProbe out;
  if (auto rays = finite_rays(space)) {
    out.value = std::numeric_limits<double>::infinity();
    for (const auto& r : *rays) {
      const double x = r.dot(v);
      if (x < out.value) out.value = x, out.minimizer = Effect(r);
    }
    return out;
  }
  if (space.as<BallRep>()) {
    const Vector vh = v.tail(v.size() - 1);
    const double n = vh.norm();
    Vector f = Vector::Zero(v.size());
    f[0] = 0.5;
    if (n > 0.0) f.tail(v.size() - 1) = -0.5 * vh / n;
    else f[1] = 0.5;
    out.value = 0.5 * (v[0] - n);
    out.minimizer = Effect(std::move(f));
    return out;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(quantum::coords_to_density(v, q->levels));
    const CVector psi = es.eigenvectors().col(0);
    out.value = es.eigenvalues()[0];
    out.minimizer = Effect(quantum::operator_to_functional(psi * psi.adjoint()));
    return out;
  }
  const auto& t = *space.as<TensorRep>();
  if (t.rule == CompositionRule::MinTensor && !min_equals_max(t))
    throw UnsupportedRepresentation("effect cone of " + space.describe() + " has non-product extreme rays");
  const int ka = t.a->ambient_dim();
  const int kb = t.b->ambient_dim();
  auto [val, fg] = bilinear_min(as_matrix(v, ka, kb), ray_oracle(*t.a), finite_rays(*t.a),
                                ray_oracle(*t.b), finite_rays(*t.b));
  out.value = val;
  out.minimizer = Effect(kron(fg.first, fg.second));
  return out;
}

std::vector<Effect> facets(const StateSpace& space) {
  std::vector<Vector> raw;
  if (const auto* p = space.as<PolytopeRep>()) raw = p->facets;
  else if (const auto* s = space.as<SimplexRep>()) raw = simplex_readouts(s->levels);
  else throw UnsupportedRepresentation("facets of " + space.describe());
  std::vector<Effect> out;
  for (auto& f : raw) out.emplace_back(std::move(f));
  return out;
}

std::vector<Effect> extremal_effects(const StateSpace& space) {
  if (!space.as<PolytopeRep>() && !space.as<SimplexRep>())
    throw UnsupportedRepresentation("extremal effects of " + space.describe() +
                                    " form a continuous family; use contains_effect");
  std::vector<Vector> verts;
  for (const auto& p : space.extreme_points()) verts.push_back(p.coords);
  polytope::DdOptions dd;
  dd.exact = verts.size() <= 20 && space.ambient_dim() <= 9;
  std::vector<Effect> out;
  for (auto& f : polytope::effect_polytope_vertices(verts, dd)) out.emplace_back(std::move(f));
  return out;
}

int affine_dimension(const StateSpace& space) {
  if (const auto* p = space.as<PolytopeRep>()) {
    if (p->vertices.size() == 1) return 0;
    Matrix d(static_cast<Eigen::Index>(p->vertices.size() - 1), space.ambient_dim());
    for (std::size_t i = 1; i < p->vertices.size(); ++i)
      d.row(static_cast<Eigen::Index>(i - 1)) = (p->vertices[i].coords - p->vertices[0].coords).transpose();
    return numerical_rank(d, 1e-9);
  }
  return space.ambient_dim() - 1;
}

std::optional<QuantumFrame> quantum_frame(const StateSpace& space) {
  if (const auto* q = space.as<QuantumRep>()) {
    const int k = space.ambient_dim();
    return QuantumFrame{q->levels, Matrix::Identity(k, k)};
  }
  if (const auto* b = space.as<BallRep>(); b && b->dim == 3) {
    Matrix m = Matrix::Identity(4, 4) / std::sqrt(2.0);
    m(0, 0) = 1.0;
    return QuantumFrame{2, m};
  }
  return std::nullopt;
}

}  // namespace gptlab
