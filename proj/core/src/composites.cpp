#include "gptlab/composites.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/polytope.hpp"
#include "gptlab/sampling.hpp"

namespace gptlab {

StateVector product_state(const StateVector& a, const StateVector& b) {
  return StateVector(kron(a.coords, b.coords));
}

Effect product_effect(const Effect& a, const Effect& b) { return Effect(kron(a.functional, b.functional)); }

Composite compose(const StateSpace& a, const StateSpace& b, CompositionRule rule,
                  const ComposeOptions& opts) {
  auto pa = std::make_shared<const StateSpace>(a);
  auto pb = std::make_shared<const StateSpace>(b);
  GroupDescriptor g{LocalProductGroup{std::make_shared<const GroupDescriptor>(a.group()),
                                      std::make_shared<const GroupDescriptor>(b.group()), a.ambient_dim(),
                                      b.ambient_dim()}};
  if (a.has_finite_extreme_points() && b.has_finite_extreme_points()) {
    std::vector<StateVector> verts;
    const bool products = rule == CompositionRule::MinTensor || a.is_classical() || b.is_classical();
    if (products) {
      for (const auto& x : a.extreme_points())
        for (const auto& y : b.extreme_points()) verts.push_back(product_state(x, y));
    } else {
      std::vector<Vector> va, vb;
      for (const auto& x : a.extreme_points()) va.push_back(x.coords);
      for (const auto& y : b.extreme_points()) vb.push_back(y.coords);
      polytope::DdOptions dd;
      const std::size_t rows = facets(a).size() * facets(b).size();
      dd.exact = a.ambient_dim() * b.ambient_dim() <= 16 && rows <= 64;
      dd.max_rays = opts.vertex_budget;
      for (auto& v : polytope::max_tensor_vertices(va, vb, dd)) verts.emplace_back(std::move(v));
    }
    if (verts.size() > opts.vertex_budget)
      throw BudgetExceeded("compose", "composite has more than " + std::to_string(opts.vertex_budget) +
                                          " vertices");
    return Composite{pa, pb, rule, StateSpace::polytope(std::move(verts), std::move(g))};
  }
  StateSpace t = StateSpace::tensor(pa, pb, rule);
  return Composite{pa, pb, rule, std::move(t)};
}

StateVector reduced_state(const StateVector& w, int ka, int kb, Side keep) {
  if (w.dim() != ka * kb) throw DimensionError("reduced_state: dimension is not K_A * K_B");
  if (keep == Side::A) {
    Vector out(ka);
    for (int i = 0; i < ka; ++i) out[i] = w.coords[i * kb];
    return StateVector(std::move(out));
  }
  return StateVector(Vector(w.coords.head(kb)));
}

StateVector reduced_state(const Composite& c, const StateVector& w, Side keep) {
  return reduced_state(w, c.ka(), c.kb(), keep);
}

namespace {

Vector contract_b(const StateVector& w, const Effect& eb, int ka, int kb) {
  if (w.dim() != ka * kb || eb.dim() != kb) throw DimensionError("conditional: dimension mismatch");
  Vector out(ka);
  for (int i = 0; i < ka; ++i) out[i] = w.coords.segment(i * kb, kb).dot(eb.functional);
  return out;
}

}  // namespace

StateVector conditional_state(const StateVector& w, const Effect& eb, int ka, int kb, double tol) {
  const Vector un = contract_b(w, eb, ka, kb);
  if (!(un[0] > tol))
    throw ZeroProbabilityConditioning("conditioning on an outcome of probability " + std::to_string(un[0]));
  return StateVector(un / un[0]);
}

StateVector conditional_state(const Composite& c, const StateVector& w, const Effect& eb, double tol) {
  return conditional_state(w, eb, c.ka(), c.kb(), tol);
}

Vector marginal_from_measurement(const StateVector& w, const Measurement& mb, int ka, int kb, double tol) {
  if (!mb.sums_to_unit(1e-9)) throw DomainError("measurement effects do not sum to the unit effect");
  Vector m = Vector::Zero(ka);
  for (const auto& e : mb.effects) {
    const Vector un = contract_b(w, e, ka, kb);
    if (un[0] > tol) m += un;  // lambda * (un / lambda)
  }
  return m;
}

double signalling_deviation(const StateVector& w, const std::vector<Measurement>& mbs, int ka, int kb,
                            double tol) {
  std::vector<Vector> marg;
  for (const auto& mb : mbs) {
    for (const auto& e : mb.effects)
      if (contract_b(w, e, ka, kb)[0] < -tol) return std::numeric_limits<double>::infinity();
    marg.push_back(marginal_from_measurement(w, mb, ka, kb, tol));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < marg.size(); ++i)
    for (std::size_t j = i + 1; j < marg.size(); ++j)
      worst = std::max(worst, (marg[i] - marg[j]).lpNorm<Eigen::Infinity>());
  return worst;
}

bool no_signalling_check(const StateVector& w, const std::vector<Measurement>& mbs, int ka, int kb,
                         double tol) {
  return signalling_deviation(w, mbs, ka, kb, tol) <= tol;
}

double correlator(const StateVector& w, const Measurement& ma, const Measurement& mb, int ka, int kb) {
  if (ma.effects.size() != 2 || mb.effects.size() != 2)
    throw DomainError("CHSH measurements must have exactly two outcomes");
  if (w.dim() != ka * kb) throw DimensionError("correlator: dimension mismatch");
  double c = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const double sign = (x == y) ? 1.0 : -1.0;
      c += sign * evaluate(product_effect(ma.effects[static_cast<std::size_t>(x)], mb.effects[static_cast<std::size_t>(y)]), w);
    }
  return c;
}

double chsh_value(const StateVector& w, const ChshSettings& s, int ka, int kb) {
  const double v = correlator(w, s.alice[0], s.bob[0], ka, kb) + correlator(w, s.alice[0], s.bob[1], ka, kb) +
                   correlator(w, s.alice[1], s.bob[0], ka, kb) - correlator(w, s.alice[1], s.bob[1], ka, kb);
  return std::abs(v);
}

TomographyResult local_tomography(const Composite& c, unsigned long long seed) {
  TomographyResult r;
  const int k = c.space.ambient_dim();
  r.expected = c.ka() * c.kb() - 1;
  if (c.space.has_finite_extreme_points()) {
    r.affine_dim = affine_dimension(c.space);
  } else {
    Rng rng(seed);
    const int samples = 3 * k + 8;
    Matrix d(samples, k);
    const StateVector base = product_state(random_pure_state(*c.a, rng), random_pure_state(*c.b, rng));
    for (int i = 0; i < samples; ++i) {
      const StateVector s = product_state(random_pure_state(*c.a, rng), random_pure_state(*c.b, rng));
      d.row(i) = (s.coords - base.coords).transpose();
    }
    r.affine_dim = numerical_rank(d, 1e-9);
  }
  r.ok = r.affine_dim == r.expected && k == c.ka() * c.kb();
  return r;
}

bool local_tomography_check(const Composite& c, unsigned long long seed) { return local_tomography(c, seed).ok; }

MultiplicativityResult capacity_multiplicativity_check(const Composite& c) {
  MultiplicativityResult r;
  const auto ca = capacity(*c.a);
  const auto cb = capacity(*c.b);
  r.na = ca.value;
  r.nb = cb.value;
  if (!ca.exact || !cb.exact) {
    r.note = "factor capacity indeterminate";
    return r;
  }
  // Products of valid effects are valid on both composite rules, so the
  // product witness only needs the delta pattern.
  DistinguishabilityWitness w;
  for (std::size_t i = 0; i < ca.witness.states.size(); ++i)
    for (std::size_t j = 0; j < cb.witness.states.size(); ++j) {
      w.states.push_back(product_state(ca.witness.states[i], cb.witness.states[j]));
      w.measurement.effects.push_back(
          product_effect(ca.witness.measurement.effects[i], cb.witness.measurement.effects[j]));
    }
  bool delta = w.measurement.sums_to_unit(1e-9);
  for (std::size_t i = 0; i < w.states.size() && delta; ++i)
    for (std::size_t j = 0; j < w.states.size() && delta; ++j)
      delta = std::abs(evaluate(w.measurement.effects[i], w.states[j]) - (i == j ? 1.0 : 0.0)) <= 1e-9;
  for (const auto& s : w.states) delta = delta && contains_state(c.space, s);
  if (!delta) {
    r.note = "product witness failed verification";
    return r;
  }
  r.product_lower = static_cast<int>(w.states.size());
  if (c.space.has_finite_extreme_points()) {
    const auto cc = capacity(c.space);
    if (cc.exact) {
      r.composite_value = cc.value;
      r.ok = cc.value == r.na * r.nb;
      return r;
    }
    r.note = "composite capacity search incomplete: " + cc.note;
  } else {
    r.note = "continuous composite: product-witness lower bound only";
  }
  r.ok = r.product_lower == r.na * r.nb;
  return r;
}

}  // namespace gptlab
