#pragma once

#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gptlab/group.hpp"
#include "gptlab/linalg.hpp"

namespace gptlab {

/// Coordinates [omega_0, omega_1, ...]; omega_0 is the normalization.
struct StateVector {
  Vector coords;

  StateVector() = default;
  explicit StateVector(Vector c) : coords(std::move(c)) {}
  StateVector(std::initializer_list<double> values);

  int dim() const { return static_cast<int>(coords.size()); }
  double normalization() const { return coords[0]; }
  /// The sub-vector coords[1..].
  Vector hat() const { return coords.tail(coords.size() - 1); }
  bool operator==(const StateVector& o) const { return coords == o.coords; }
};

/// Linear functional; evaluation is the inner product with a state.
struct Effect {
  Vector functional;

  Effect() = default;
  explicit Effect(Vector f) : functional(std::move(f)) {}
  Effect(std::initializer_list<double> values);

  int dim() const { return static_cast<int>(functional.size()); }
  /// The unit effect e_0 of dimension k.
  static Effect unit(int k);
  /// 1 - E.
  Effect complement() const;
  bool operator==(const Effect& o) const { return functional == o.functional; }
};

struct Measurement {
  std::vector<Effect> effects;

  /// True when the effects sum to the unit effect within tol.
  bool sums_to_unit(double tol = kDefaultTol) const;
};

class StateSpace;

enum class CompositionRule { MinTensor, MaxTensor };

std::string to_string(CompositionRule r);
CompositionRule parse_rule(const std::string& s);

struct PolytopeRep {
  std::vector<StateVector> vertices;  // canonical order
  std::vector<Vector> facets;         // scaled to max value 1 over the vertices
};

struct BallRep {
  int dim = 0;
};

struct SimplexRep {
  int levels = 0;
};

struct QuantumRep {
  int levels = 0;
};

/// Bipartite composite with at least one continuous factor. Such spaces are
/// described through membership queries, never through a vertex list.
struct TensorRep {
  std::shared_ptr<const StateSpace> a;
  std::shared_ptr<const StateSpace> b;
  CompositionRule rule = CompositionRule::MinTensor;
};

class StateSpace {
 public:
  using Rep = std::variant<PolytopeRep, BallRep, SimplexRep, QuantumRep, TensorRep>;

  /// Validates normalization, ambient rank and vertex extremality, then
  /// canonicalizes the vertex order. Throws ValidationError.
  static StateSpace polytope(std::vector<StateVector> vertices, GroupDescriptor group = {},
                             double tol = kDefaultTol);
  static StateSpace simplex(int levels);
  static StateSpace ball(int dim);
  static StateSpace quantum(int levels);
  static StateSpace tensor(std::shared_ptr<const StateSpace> a, std::shared_ptr<const StateSpace> b,
                           CompositionRule rule);

  int ambient_dim() const { return ambient_dim_; }
  const Rep& rep() const { return rep_; }
  const GroupDescriptor& group() const { return group_; }
  Effect unit_effect() const { return Effect::unit(ambient_dim_); }

  StateSpace with_group(GroupDescriptor g) const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&rep_);
  }

  /// Polytope, Simplex, Ball(1) and Quantum(1) have finitely many extreme points.
  bool has_finite_extreme_points() const;
  /// Extreme points for the finite case; throws UnsupportedRepresentation otherwise.
  std::vector<StateVector> extreme_points() const;
  /// Polytope or simplex whose vertex count equals K (a classical system).
  bool is_classical() const;

  std::string describe() const;

 private:
  StateSpace(Rep rep, int k, GroupDescriptor g)
      : rep_(std::move(rep)), ambient_dim_(k), group_(std::move(g)) {}

  Rep rep_;
  int ambient_dim_ = 0;
  GroupDescriptor group_;
};

double evaluate(const Effect& e, const StateVector& s);

/// Throws DomainError unless weights are a probability vector.
StateVector mix(const std::vector<StateVector>& states, const std::vector<double>& weights);

bool contains_state(const StateSpace& space, const StateVector& v, double tol = kDefaultTol);
bool contains_effect(const StateSpace& space, const Effect& f, double tol = kDefaultTol);

/// Generators of the effect polytope {f : 0 <= f <= 1 on S}, including 0 and 1.
/// Polytope and Simplex only.
std::vector<Effect> extremal_effects(const StateSpace& space);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// min/max of a functional over the normalized states.
Range functional_range(const StateSpace& space, const Vector& f);

/// Linear optimization over the state set: minimizing state and value.
struct StateOptimum {
  double value = 0.0;
  StateVector state;
};
StateOptimum minimize_over_states(const StateSpace& space, const Vector& f);

/// Cone oracle for the unnormalized state cone. Minimizes r . v over the
/// extreme rays r of the effect cone, scaled so that max_S r = 1 (for the
/// quantum case: rank-one projectors). v lies in the state cone iff the value
/// is >= -tol.
struct ConeProbe {
  double value = 0.0;
  Effect minimizer;
};
ConeProbe cone_probe(const StateSpace& space, const Vector& v);

/// Facet functionals scaled to max value 1 (Polytope/Simplex).
std::vector<Effect> facets(const StateSpace& space);

/// Dimension of the affine hull of the state set.
int affine_dimension(const StateSpace& space);

/// Coordinate map of a qubit-like factor (Quantum(2) or Ball(3)) into the
/// Quantum(2) frame plus the level count; nullopt for other spaces.
struct QuantumFrame {
  int levels = 0;
  Matrix to_quantum;  // K x K, coordinates -> quantum coordinates
};
std::optional<QuantumFrame> quantum_frame(const StateSpace& space);

}  // namespace gptlab
