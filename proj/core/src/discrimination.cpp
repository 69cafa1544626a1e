#include "gptlab/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "gptlab/error.hpp"
#include "gptlab/lp.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/symmetry.hpp"

namespace gptlab {

namespace {

// Columns: the unit effect first, then K - 1 functionals completing a basis.
// Effects are parametrized as E = H c and the LP minimizes |c_1| + ... so the
// solution stays sparse in a frame adapted to the candidate states.
Matrix adapted_frame(const StateSpace& space, const std::vector<StateVector>& states) {
  const int k = space.ambient_dim();
  if (const auto* b = space.as<BallRep>()) {
    const int d = b->dim;
    std::vector<Vector> dirs;
    auto push = [&](Vector v) {
      for (const auto& u : dirs) v -= u.dot(v) * u;
      if (v.norm() > 1e-8) dirs.push_back(v.normalized());
    };
    for (const auto& s : states) push(s.hat());
    for (int i = 0; i < d && static_cast<int>(dirs.size()) < d; ++i) push(Vector::Unit(d, i));
    Matrix h = Matrix::Zero(k, k);
    h(0, 0) = 1.0;
    for (int i = 0; i < d; ++i) h.block(1, i + 1, d, 1) = dirs[static_cast<std::size_t>(i)];
    return h;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    std::vector<CVector> frame;
    auto push = [&](CVector v) {
      for (const auto& u : frame) v -= u.dot(v) * u;
      if (v.norm() > 1e-8) frame.push_back(v.normalized());
    };
    for (const auto& s : states) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(quantum::coords_to_density(s.coords, n));
      for (int i = n - 1; i >= 0; --i)
        if (es.eigenvalues()[i] > 1e-9) push(es.eigenvectors().col(i));
    }
    for (int i = 0; i < n && static_cast<int>(frame.size()) < n; ++i) push(CVector::Unit(n, i));
    CMatrix w(n, n);
    for (int i = 0; i < n; ++i) w.col(i) = frame[static_cast<std::size_t>(i)];
    Matrix h(k, k);
    h.col(0) = Vector::Unit(k, 0);
    const auto& basis = quantum::gell_mann_basis(n);
    for (int i = 1; i < k; ++i)
      h.col(i) = quantum::operator_to_functional(w * basis[static_cast<std::size_t>(i - 1)] * w.adjoint());
    return h;
  }
  return Matrix::Identity(k, k);
}

// Points of the state cone used as the initial outer relaxation.
std::vector<Vector> initial_points(const StateSpace& space, const std::vector<StateVector>& states,
                                   const Matrix& frame) {
  std::vector<Vector> pts;
  if (space.has_finite_extreme_points()) {
    for (const auto& p : space.extreme_points()) pts.push_back(p.coords);
    return pts;
  }
  for (const auto& s : states) pts.push_back(s.coords);
  if (const auto* b = space.as<BallRep>()) {
    const int d = b->dim;
    const int lim = std::min(d, static_cast<int>(states.size()) + 2);
    auto add = [&](const Vector& dir) {
      Vector v(d + 1);
      v[0] = 1.0;
      v.tail(d) = dir.normalized();
      pts.push_back(v);
    };
    for (int i = 0; i < d; ++i) {
      const Vector bi = frame.block(1, i + 1, d, 1);
      add(bi);
      add(-bi);
      if (i >= lim) continue;
      for (int j = i + 1; j < lim; ++j) {
        const Vector bj = frame.block(1, j + 1, d, 1);
        add(bi + bj);
        add(bi - bj);
        add(-bi + bj);
        add(-bi - bj);
      }
    }
    return pts;
  }
  if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    // Recover the unitary frame from the first computational directions.
    std::vector<CVector> frame_vecs;
    for (const auto& s : states) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(quantum::coords_to_density(s.coords, n));
      for (int i = n - 1; i >= 0; --i)
        if (es.eigenvalues()[i] > 1e-9) {
          CVector v = es.eigenvectors().col(i);
          for (const auto& u : frame_vecs) v -= u.dot(v) * u;
          if (v.norm() > 1e-8) frame_vecs.push_back(v.normalized());
        }
    }
    for (int i = 0; i < n && static_cast<int>(frame_vecs.size()) < n; ++i) {
      CVector v = CVector::Unit(n, i);
      for (const auto& u : frame_vecs) v -= u.dot(v) * u;
      if (v.norm() > 1e-8) frame_vecs.push_back(v.normalized());
    }
    const Complex im(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      pts.push_back(quantum::pure_coords(frame_vecs[static_cast<std::size_t>(i)]));
      for (int j = i + 1; j < n; ++j) {
        const CVector& a = frame_vecs[static_cast<std::size_t>(i)];
        const CVector& c = frame_vecs[static_cast<std::size_t>(j)];
        pts.push_back(quantum::pure_coords(a + c));
        pts.push_back(quantum::pure_coords(a - c));
        pts.push_back(quantum::pure_coords(a + im * c));
        pts.push_back(quantum::pure_coords(a - im * c));
      }
    }
    return pts;
  }
  const auto& t = *space.as<TensorRep>();
  std::vector<Vector> pa = initial_points(*t.a, {}, adapted_frame(*t.a, {}));
  std::vector<Vector> pb = initial_points(*t.b, {}, adapted_frame(*t.b, {}));
  for (const auto& x : pa)
    for (const auto& y : pb) pts.push_back(kron(x, y));
  return pts;
}

// Solves the relaxation over the current point set. Returns the effects
// (columns) or nullopt when infeasible.
std::optional<std::vector<Vector>> solve_relaxation(const std::vector<Vector>& pts,
                                                    const std::vector<StateVector>& states,
                                                    const Matrix& frame, double tol) {
  const int k = static_cast<int>(frame.rows());
  const int n = static_cast<int>(states.size());
  // Per effect: a (free) then p_1..p_{k-1}, q_1..q_{k-1} >= 0.
  const int per = 1 + 2 * (k - 1);
  const int nv = n * per;
  auto prog = lp::LinearProgram::with_variables(nv);
  for (int i = 0; i < n; ++i) {
    prog.lower[i * per] = -lp::kInf;
    for (int j = 1; j < per; ++j) prog.objective[i * per + j] = -1.0;
  }
  auto effect_row = [&](int i, const Vector& point, Vector& row) {
    const Vector g = frame.transpose() * point;  // value of each basis functional
    row.segment(i * per, per).setZero();
    row[i * per] = g[0];
    for (int c = 1; c < k; ++c) {
      row[i * per + c] = g[c];
      row[i * per + (k - 1) + c] = -g[c];
    }
  };
  lp::RowBuffer le(nv), eq(nv);
  Vector row(nv);
  for (int i = 0; i < n; ++i) {
    for (const auto& p : pts) {
      row.setZero();
      effect_row(i, p, row);
      le.add(-row, 0.0);
    }
    for (int j = 0; j < n; ++j) {
      row.setZero();
      effect_row(i, states[static_cast<std::size_t>(j)].coords, row);
      eq.add(row, i == j ? 1.0 : 0.0);
    }
  }
  // Sum of effects is the unit effect: sum of a = 1, sums of p - q vanish.
  for (int c = 0; c < k; ++c) {
    row.setZero();
    for (int i = 0; i < n; ++i) {
      if (c == 0) {
        row[i * per] = 1.0;
      } else {
        row[i * per + c] = 1.0;
        row[i * per + (k - 1) + c] = -1.0;
      }
    }
    eq.add(row, c == 0 ? 1.0 : 0.0);
  }
  le.write(prog.le_matrix, prog.le_rhs);
  eq.write(prog.eq_matrix, prog.eq_rhs);
  lp::SolverOptions o;
  o.feasibility_tol = tol;
  const auto sol = lp::solve(prog, o);
  if (sol.status != lp::Status::Optimal) return std::nullopt;
  std::vector<Vector> effects;
  for (int i = 0; i < n; ++i) {
    Vector c(k);
    c[0] = sol.point[i * per];
    for (int j = 1; j < k; ++j) c[j] = sol.point[i * per + j] - sol.point[i * per + (k - 1) + j];
    effects.push_back(frame * c);
  }
  return effects;
}

}  // namespace

bool verify_witness(const StateSpace& space, const DistinguishabilityWitness& w, double tol) {
  const auto& es = w.measurement.effects;
  if (es.size() != w.states.size() || es.empty()) return false;
  if (!w.measurement.sums_to_unit(10 * tol)) return false;
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = 0; j < w.states.size(); ++j) {
      if (std::abs(evaluate(es[i], w.states[j]) - (i == j ? 1.0 : 0.0)) > 10 * tol) return false;
    }
    if (!contains_effect(space, es[i], 10 * tol)) return false;
  }
  return true;
}

DistinguishabilityResult decide_distinguishable(const StateSpace& space,
                                                const std::vector<StateVector>& states,
                                                const DistinguishOptions& opts) {
  DistinguishabilityResult res;
  for (const auto& s : states) {
    if (!contains_state(space, s, opts.tol))
      throw DomainError("decide_distinguishable: state is not in the space");
  }
  if (states.empty()) {
    res.verdict = Verdict::NotDistinguishable;
    return res;
  }
  const int k = space.ambient_dim();
  if (static_cast<int>(states.size()) > k) {
    // Perfectly distinguishable states are linearly independent.
    res.verdict = Verdict::NotDistinguishable;
    return res;
  }
  if (states.size() == 1) {
    res.verdict = Verdict::Distinguishable;
    res.witness = DistinguishabilityWitness{Measurement{{space.unit_effect()}}, states};
    return res;
  }
  const Matrix frame = adapted_frame(space, states);
  std::vector<Vector> pts = initial_points(space, states, frame);
  const bool exact = space.has_finite_extreme_points();
  for (int round = 1; round <= opts.max_rounds; ++round) {
    res.rounds = round;
    auto effects = solve_relaxation(pts, states, frame, opts.tol);
    if (!effects) {
      res.verdict = Verdict::NotDistinguishable;
      return res;
    }
    bool ok = true;
    if (!exact) {
      for (const auto& e : *effects) {
        const auto m = minimize_over_states(space, e);
        if (m.value < -opts.tol) {
          ok = false;
          pts.push_back(m.state.coords);
        }
      }
    }
    if (ok) {
      DistinguishabilityWitness w;
      w.states = states;
      for (auto& e : *effects) w.measurement.effects.emplace_back(std::move(e));
      res.verdict = Verdict::Distinguishable;
      res.witness = std::move(w);
      return res;
    }
  }
  res.verdict = Verdict::Unresolved;
  return res;
}

std::optional<DistinguishabilityWitness> distinguishable(const StateSpace& space,
                                                         const std::vector<StateVector>& states,
                                                         double tol) {
  DistinguishOptions o;
  o.tol = tol;
  return decide_distinguishable(space, states, o).witness;
}

namespace {

// Orbit label per position in `order`: the smallest position reachable by
// the averaging set, which consists of symmetries of the space.
std::vector<int> vertex_orbits(const StateSpace& space, const std::vector<StateVector>& pts,
                               const std::vector<int>& order) {
  const int m = static_cast<int>(order.size());
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  if (space.group().is_parametric()) return parent;
  std::vector<Matrix> set;
  try {
    set = averaging_set(space.group(), space.ambient_dim());
  } catch (const Error&) {
    return parent;
  }
  for (const auto& t : set)
    for (int a = 0; a < m; ++a) {
      const Vector img = t * pts[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])].coords;
      for (int b = 0; b < m; ++b)
        if ((img - pts[static_cast<std::size_t>(order[static_cast<std::size_t>(b)])].coords).norm() < 1e-7) {
          const int ra = find(a), rb = find(b);
          if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
          break;
        }
    }
  std::vector<int> out(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) out[static_cast<std::size_t>(a)] = find(a);
  return out;
}

CapacityResult finite_capacity(const StateSpace& space, const CapacityOptions& opts) {
  const auto pts = space.extreme_points();
  const int m = static_cast<int>(pts.size());
  const int upper = std::min(m, space.ambient_dim());
  CapacityResult res;
  // Vertex-facet incidence. A distinguishing effect for state i vanishes on
  // the others, so some facet must contain every other state but not state i.
  std::vector<std::vector<bool>> on;
  if (const auto* p = space.as<PolytopeRep>()) {
    for (const auto& v : pts) {
      std::vector<bool> row;
      for (const auto& f : p->facets) row.push_back(std::abs(f.dot(v.coords)) < 1e-9);
      on.push_back(std::move(row));
    }
  }
  auto face_separated = [&](const std::vector<int>& idx) {
    if (on.empty()) return true;
    const std::size_t nf = on.front().size();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      bool found = false;
      for (std::size_t f = 0; f < nf && !found; ++f) {
        if (on[static_cast<std::size_t>(idx[i])][f]) continue;
        bool all = true;
        for (std::size_t j = 0; j < idx.size() && all; ++j)
          if (j != i) all = on[static_cast<std::size_t>(idx[j])][f];
        found = all;
      }
      if (!found) return false;
    }
    return true;
  };
  auto test = [&](const std::vector<int>& idx) -> std::optional<DistinguishabilityWitness> {
    if (idx.size() > 1 && !face_separated(idx)) return std::nullopt;
    ++res.lps;
    std::vector<StateVector> s;
    for (int i : idx) s.push_back(pts[static_cast<std::size_t>(i)]);
    return distinguishable(space, s);
  };

  // Order by total distance to the other vertices, largest first.
  std::vector<double> spread(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      spread[static_cast<std::size_t>(i)] += (pts[static_cast<std::size_t>(i)].coords - pts[static_cast<std::size_t>(j)].coords).norm();
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return spread[static_cast<std::size_t>(a)] > spread[static_cast<std::size_t>(b)] + 1e-12;
  });

  // Greedy lower bound.
  std::vector<int> chosen{order.front()};
  res.witness = *test(chosen);
  for (std::size_t t = 1; t < order.size() && static_cast<int>(chosen.size()) < upper; ++t) {
    auto next = chosen;
    next.push_back(order[t]);
    if (auto w = test(next)) {
      chosen = std::move(next);
      res.witness = std::move(*w);
    }
  }
  res.value = static_cast<int>(chosen.size());
  if (res.value == upper) {
    res.exact = true;
    return res;
  }
  if (static_cast<std::size_t>(m) > opts.vertex_budget) {
    res.note = "vertex budget of " + std::to_string(opts.vertex_budget) + " exceeded; greedy lower bound";
    return res;
  }

  // Pairwise distinguishability graph, then a clique-style search over
  // distinguishable sets (subsets of distinguishable sets are distinguishable).
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(m), std::vector<bool>(static_cast<std::size_t>(m), false));
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const bool d = test({order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]}).has_value();
      adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = adj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = d;
    }
  bool budget_hit = false;
  std::vector<int> current;
  std::function<void(const std::vector<int>&)> grow = [&](const std::vector<int>& cand) {
    if (res.value == upper || budget_hit) return;
    // Greedy colouring from the back: the colours used on cand[c..] bound
    // the largest clique there.
    std::vector<int> colour(cand.size(), 0), bound(cand.size() + 1, 0);
    for (std::size_t c = cand.size(); c-- > 0;) {
      std::vector<bool> used(cand.size() + 1, false);
      for (std::size_t d = c + 1; d < cand.size(); ++d)
        if (adj[static_cast<std::size_t>(cand[c])][static_cast<std::size_t>(cand[d])]) used[static_cast<std::size_t>(colour[d])] = true;
      while (used[static_cast<std::size_t>(colour[c])]) ++colour[c];
      bound[c] = std::max(bound[c + 1], colour[c] + 1);
    }
    for (std::size_t c = 0; c < cand.size(); ++c) {
      if (current.size() + static_cast<std::size_t>(bound[c]) <= static_cast<std::size_t>(res.value)) return;
      if (res.lps >= opts.lp_budget) {
        budget_hit = true;
        return;
      }
      const int v = cand[c];
      current.push_back(v);
      std::optional<DistinguishabilityWitness> w;
      if (current.size() <= 2) {
        w = DistinguishabilityWitness{};
      } else {
        std::vector<int> idx;
        for (int i : current) idx.push_back(order[static_cast<std::size_t>(i)]);
        // distinguishable states are linearly independent
        Matrix cols(space.ambient_dim(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = pts[static_cast<std::size_t>(idx[i])].coords;
        Eigen::FullPivLU<Matrix> lu(cols);
        lu.setThreshold(1e-9);
        if (lu.rank() == static_cast<Eigen::Index>(idx.size())) w = test(idx);
      }
      if (w) {
        if (static_cast<int>(current.size()) > res.value) {
          std::vector<int> idx;
          for (int i : current) idx.push_back(order[static_cast<std::size_t>(i)]);
          res.value = static_cast<int>(current.size());
          res.witness = current.size() <= 2 ? *test(idx) : std::move(*w);
        }
        std::vector<int> next;
        for (std::size_t d = c + 1; d < cand.size(); ++d)
          if (adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(cand[d])]) next.push_back(cand[d]);
        grow(next);
      }
      current.pop_back();
      if (res.value == upper || budget_hit) return;
    }
  };
  // A symmetry maps distinguishable sets to distinguishable sets, so every
  // maximal set can be moved onto one orbit representative. Roots are tried
  // one orbit at a time; sets meeting an earlier orbit are already covered.
  const auto orbit = vertex_orbits(space, pts, order);
  std::vector<bool> done(static_cast<std::size_t>(m), false);
  for (int root = 0; root < m && res.value < upper && !budget_hit; ++root) {
    if (orbit[static_cast<std::size_t>(root)] != root) continue;
    current = {root};
    std::vector<int> cand;
    for (int v = 0; v < m; ++v)
      if (!done[static_cast<std::size_t>(orbit[static_cast<std::size_t>(v)])] && adj[static_cast<std::size_t>(root)][static_cast<std::size_t>(v)])
        cand.push_back(v);
    grow(cand);
    current.clear();
    done[static_cast<std::size_t>(root)] = true;
  }
  if (budget_hit) {
    res.note = "LP budget of " + std::to_string(opts.lp_budget) + " exhausted; lower bound";
    return res;
  }
  res.exact = true;
  return res;
}

}  // namespace

CapacityResult capacity(const StateSpace& space, const CapacityOptions& opts) {
  if (space.has_finite_extreme_points()) return finite_capacity(space, opts);
  CapacityResult res;
  const int k = space.ambient_dim();
  if (const auto* b = space.as<BallRep>()) {
    const int d = b->dim;
    Vector n = Vector::Unit(d, 0);
    Vector s1(k), s2(k), e1(k), e2(k);
    s1 << 1.0, n;
    s2 << 1.0, -n;
    e1 << 0.5, 0.5 * n;
    e2 << 0.5, -0.5 * n;
    res.witness.states = {StateVector(s1), StateVector(s2)};
    res.witness.measurement.effects = {Effect(e1), Effect(e2)};
    res.value = 2;
    res.exact = true;
  } else if (const auto* q = space.as<QuantumRep>()) {
    const int n = q->levels;
    for (int i = 0; i < n; ++i) {
      const CVector v = CVector::Unit(n, i);
      res.witness.states.emplace_back(quantum::pure_coords(v));
      res.witness.measurement.effects.emplace_back(quantum::operator_to_functional(v * v.adjoint()));
    }
    res.value = n;
    res.exact = true;
  } else {
    const auto& t = *space.as<TensorRep>();
    const auto ca = capacity(*t.a, opts);
    const auto cb = capacity(*t.b, opts);
    for (std::size_t i = 0; i < ca.witness.states.size(); ++i)
      for (std::size_t j = 0; j < cb.witness.states.size(); ++j) {
        res.witness.states.emplace_back(kron(ca.witness.states[i].coords, cb.witness.states[j].coords));
        res.witness.measurement.effects.emplace_back(
            kron(ca.witness.measurement.effects[i].functional, cb.witness.measurement.effects[j].functional));
      }
    res.value = ca.value * cb.value;
    res.exact = false;
    res.note = "product-witness lower bound for a composite with continuous factors";
    return res;
  }
  if (!verify_witness(space, res.witness))
    throw Error("capacity: closed-form witness failed verification");
  return res;
}

DistinguishabilityWitness complete_measurement(const StateSpace& space, const CapacityOptions& opts) {
  auto c = capacity(space, opts);
  if (!c.exact) throw BudgetExceeded("capacity", "capacity is indeterminate: " + c.note);
  return std::move(c.witness);
}

std::optional<int> fit_capacity_exponent(const std::vector<std::pair<int, int>>& pairs) {
  if (pairs.empty()) throw DomainError("fit_capacity_exponent: no pairs");
  std::optional<int> r;
  for (auto [n, k] : pairs) {
    if (n < 1 || k < 1) throw DomainError("fit_capacity_exponent: N and K must be >= 1");
    if (n == 1) {
      if (k != 1) return std::nullopt;
      continue;
    }
    long long p = 1;
    int e = 0;
    while (p < k) {
      p *= n;
      ++e;
    }
    if (p != k || e < 1) return std::nullopt;
    if (r && *r != e) return std::nullopt;
    r = e;
  }
  return r;
}

std::vector<int> admissible_bit_dimensions(int r_max) {
  if (r_max < 1) throw DomainError("admissible_bit_dimensions: r_max must be >= 1");
  if (r_max > 30) throw DomainError("admissible_bit_dimensions: r_max too large");
  std::vector<int> out;
  for (int r = 1; r <= r_max; ++r) out.push_back((1 << r) - 1);
  return out;
}

}  // namespace gptlab
