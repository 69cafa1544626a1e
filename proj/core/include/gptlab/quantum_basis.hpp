#pragma once

#include <vector>

#include "gptlab/linalg.hpp"

/// Real coordinates for N-level density matrices and effect operators.
///
/// States use c_0 = Tr(rho) and c_k = Tr(rho B_k), where B_1..B_{N^2-1} are the
/// generalized Gell-Mann matrices normalized to Hilbert-Schmidt norm 1. The
/// reconstruction is rho = c_0 * I / N + sum_k c_k B_k, so normalized states
/// have leading coordinate 1. An effect operator M is the functional with
/// f_0 = Tr(M) / N and f_k = Tr(M B_k); then f . c = Tr(M rho).
namespace gptlab::quantum {

/// Traceless part of the basis: N^2 - 1 Hermitian matrices, HS-orthonormal.
/// Order: for each pair j < k the symmetric then antisymmetric element, then
/// the N - 1 diagonal elements.
const std::vector<CMatrix>& gell_mann_basis(int levels);

/// Inverse of K = N^2; throws DimensionError if k is not a perfect square.
int levels_from_dim(int k);

Vector density_to_coords(const CMatrix& rho);
CMatrix coords_to_density(const Vector& c, int levels);

Vector operator_to_functional(const CMatrix& m);
CMatrix functional_to_operator(const Vector& f, int levels);

/// Bipartite analogues; the joint index (i, j) maps to i * N_B^2 + j.
Vector bipartite_density_to_coords(const CMatrix& rho, int levels_a, int levels_b);
CMatrix bipartite_coords_to_density(const Vector& c, int levels_a, int levels_b);
Vector bipartite_operator_to_functional(const CMatrix& m, int levels_a, int levels_b);

/// |psi><psi| in coordinates.
Vector pure_coords(const CVector& psi);

/// Pauli matrices, for building qubit fixtures.
CMatrix pauli(int axis);  // 0 = identity, 1 = x, 2 = y, 3 = z

}  // namespace gptlab::quantum
