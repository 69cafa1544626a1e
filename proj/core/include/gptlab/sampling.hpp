#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gptlab/convex.hpp"

namespace gptlab {

using Rng = std::mt19937_64;

Vector random_unit_vector(int d, Rng& rng);
CVector random_unit_cvector(int n, Rng& rng);
/// Haar-distributed orthogonal matrix with determinant +1.
Matrix random_rotation(int d, Rng& rng);
/// Haar-distributed unitary.
CMatrix random_unitary(int n, Rng& rng);
/// Uniform on the probability simplex.
std::vector<double> random_probability_vector(int n, Rng& rng);

/// A pure state (an extreme point). Tensor spaces give product states.
StateVector random_pure_state(const StateSpace& space, Rng& rng);

/// A state spread over the whole body: random mixtures of extreme points for
/// polytopes, uniform radius draws for balls, random mixed density matrices for
/// quantum, and mixtures of product states for tensor spaces (so max-tensor
/// samples only cover the separable part).
StateVector random_state(const StateSpace& space, Rng& rng);

/// A state on the topological boundary (a pure state for strictly convex
/// spaces, a random point on a random facet for polytopes, a rank-deficient
/// density matrix for quantum).
StateVector random_boundary_state(const StateSpace& space, Rng& rng);

}  // namespace gptlab
