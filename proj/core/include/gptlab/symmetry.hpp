#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gptlab/convex.hpp"
#include "gptlab/sampling.hpp"

namespace gptlab {

/// Coordinate action of a rotation of the Bloch part: diag(1, R).
Matrix rotation_action(const Matrix& r);
/// Coordinate action of rho -> U rho U^dagger.
Matrix unitary_action(const CMatrix& u);
/// Coordinate action of a vertex permutation on Simplex(N): vertex i -> vertex perm[i].
Matrix permutation_action(const std::vector<int>& perm);

/// T omega; throws InvalidGroupDescriptor if the image leaves the space.
StateVector apply(const StateSpace& space, const Matrix& t, const StateVector& w,
                  double tol = 1e-7);

/// A random element of the space's group in coordinate form.
Matrix random_group_element(const StateSpace& space, Rng& rng);

/// A finite set whose uniform average equals the group average on
/// coordinates: all elements of finite groups, cyclic shifts for
/// permutations, sign-diagonal rotations, Weyl-Heisenberg unitaries, and
/// Kronecker products of these for local product groups.
std::vector<Matrix> averaging_set(const GroupDescriptor& g, int k);

/// Average of T omega over the averaging set.
StateVector group_average(const StateSpace& space, const StateVector& w);

/// Orbit average of a pure state for finite groups, closed form (the
/// invariant center) for parametric ones.
StateVector maximally_mixed(const StateSpace& space);

/// Sample-checks membership preservation (and closure for finite groups).
/// Throws InvalidGroupDescriptor with the offending element.
void validate_group(const StateSpace& space, unsigned long long seed = 0, int samples = 100);

struct TransitivityResult {
  bool ok = false;
  StateVector from;
  StateVector to;
  std::optional<Matrix> map;          // maps from -> to when ok
  std::optional<StateVector> stranded;  // pure state outside the orbit
  std::string detail;
};

TransitivityResult transitivity_check(const StateSpace& space, unsigned long long seed = 0, int pairs = 20);

struct ContinuityResult {
  bool ok = false;
  std::string detail;
};

/// Parametric groups: builds an explicit path G_t from the identity to a
/// transitivity witness and checks G_0 = 1, G_1 omega = phi and membership
/// along the path. Finite groups and permutations fail.
ContinuityResult continuity_check(const StateSpace& space, unsigned long long seed = 0, int pairs = 10);

struct StrictConvexityResult {
  bool strictly_convex = false;
  std::optional<StateVector> witness;  // mixed state on the boundary
  std::optional<Effect> support;       // effect with value 0 on the witness and >= 0 on S
  std::string detail;
};

StrictConvexityResult strict_convexity_check(const StateSpace& space);

struct FaceVertices {
  std::vector<StateVector> vertices;
};
struct FacePoint {
  StateVector point;
};
struct FaceWhole {};
struct FaceQuantumSupport {
  CMatrix basis;  // N x r isometry onto the support
};

struct Face {
  std::shared_ptr<const StateSpace> parent;
  Effect effect;
  std::variant<FaceVertices, FacePoint, FaceWhole, FaceQuantumSupport> members;

  int affine_dimension() const;
  /// nullopt for continuous faces.
  std::optional<std::size_t> extreme_point_count() const;
  /// The face as a state space of its own (affine coordinates).
  StateSpace as_space() const;
  /// Every recorded member satisfies |E(omega) - 1| <= tol.
  bool members_on_face(double tol = 1e-9) const;
};

/// {omega : E(omega) = 1}. Throws NoFaceError when max E < 1 - tol.
Face face_extract(const StateSpace& space, const Effect& e, double tol = 1e-9);

struct EquivalenceResult {
  bool consistent = false;
  std::string invariant;  // first differing invariant when inconsistent
  std::string left;
  std::string right;
  std::vector<std::string> compared;
};

/// Necessary conditions for affine equivalence; Consistent is not a proof.
EquivalenceResult equivalence_probe(const StateSpace& s1, const StateSpace& s2);
EquivalenceResult equivalence_probe(const Face& f, const StateSpace& s2);

/// Admissible iff not (d > 3 and (d - 1)^2 > d + 1).
bool two_bit_face_dimension_test(int d);
/// d = 7 corresponds to the exceptional G2 branch, flagged but not analysed.
bool g2_exception(int d);

struct SymmetryOptions {
  std::size_t vertex_budget = 16;
  std::size_t candidate_budget = 2000000;
};

/// Linear maps permuting the vertices of a polytope (its full finite symmetry
/// group), found by backtracking over images of a vertex basis.
FiniteMatrixGroup polytope_symmetry_group(const std::vector<StateVector>& vertices,
                                          const SymmetryOptions& opts = {});

}  // namespace gptlab
