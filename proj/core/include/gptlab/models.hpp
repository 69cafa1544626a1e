#pragma once

#include <vector>

#include "gptlab/composites.hpp"
#include "gptlab/convex.hpp"

namespace gptlab::models {

/// Probability distributions on N outcomes, with all permutations.
StateSpace classical(int n);
/// Euclidean ball of dimension d, with SO(d) (O(1) for d = 1).
StateSpace gbit_ball(int d);
/// Square with vertices [1, x, y], x, y in {0, 1}, and its 8-element symmetry group.
StateSpace square_gbit();
/// Density matrices on C^N, 1 <= N <= 4, with unitary conjugations.
StateSpace quantum(int n);

StateVector square_vertex(int x, int y);
Effect square_x();
Effect square_y();

/// L(omega) = (omega_0 * 1 + omega_hat . sigma) / 2 as a 2 x 2 matrix.
CMatrix bloch_operator(const Vector& w);
/// Quantum(2) coordinates of L(omega); linear, so normalization is not required.
StateVector bloch_map(const StateVector& w);
/// L (x) L on the 16-dimensional two-ball tensor ambient space.
CMatrix bloch2_operator(const Vector& x);
/// |Tr(L2(x) L2(y)) - <x, y> / 4| <= tol.
bool bloch2_isometry_check(const Vector& x, const Vector& y, double tol = 1e-9);

/// Effect (1 + n . sigma) / 2 (or its complement) in Quantum(2) coordinates.
Effect qubit_effect(const Vector& n, bool plus = true);
/// Two-outcome measurement {(1 + n.sigma)/2, (1 - n.sigma)/2}.
Measurement qubit_measurement(const Vector& n);

/// PR box as a vertex of the max tensor of two squares; XOR(a, b) = x AND y
/// with X (resp. Y) the first outcome of measurement 0 (resp. 1).
StateVector pr_box_state();
/// Measurements {X, 1 - X} and {Y, 1 - Y} for both parties.
ChshSettings pr_box_settings();

/// |psi_u> = cos(u/2)|00> + sin(u/2)|11> in Quantum(2) (x) Quantum(2) coordinates.
StateVector psi_u(double u);
StateVector bell_state();
/// A: sigma_z, sigma_x. B: (sigma_z +/- sigma_x) / sqrt(2).
ChshSettings tsirelson_settings();

/// Schmidt coefficients (descending) of the dominant eigenvector of a
/// bipartite quantum state.
std::vector<double> schmidt_coefficients(const StateVector& w, int na, int nb);
/// Tr(rho^2) for quantum coordinates.
double purity(const StateVector& w, int levels);

}  // namespace gptlab::models
