#pragma once

#include <cstddef>
#include <vector>

#include "gptlab/linalg.hpp"

/// Vertex/facet conversion for pointed polyhedral cones (double description).
namespace gptlab::polytope {

struct DdOptions {
  bool exact = false;             // rational arithmetic throughout
  double eps = 1e-10;             // zero test for the floating path
  std::size_t max_rays = 100000;  // BudgetExceeded past this
};

/// Extreme rays of {y : r . y >= 0 for all rows r}. The rows must span R^D.
/// Rays are scaled to unit max-norm and returned in lexicographic order.
std::vector<Vector> cone_extreme_rays(const std::vector<Vector>& rows, const DdOptions& opts = {});

/// Facet functionals of conv(vertices): f with min_v f(v) = 0 and max_v f(v) = 1.
std::vector<Vector> facet_functionals(const std::vector<Vector>& vertices,
                                      const DdOptions& opts = {});

/// Vertices of {f : 0 <= f(v) <= 1 for all vertices v}.
std::vector<Vector> effect_polytope_vertices(const std::vector<Vector>& vertices,
                                             const DdOptions& opts = {});

/// Vertices of the normalized states x with (f (x) g)(x) >= 0 for every
/// pair of facet functionals of the two factors.
std::vector<Vector> max_tensor_vertices(const std::vector<Vector>& a,
                                        const std::vector<Vector>& b,
                                        const DdOptions& opts = {});

/// Lexicographic order with tolerance, duplicates (within tol) removed.
std::vector<Vector> canonicalize(std::vector<Vector> points, double tol = 1e-9);

/// Lexicographic comparison where entries within tol count as equal.
bool lex_less(const Vector& a, const Vector& b, double tol = 1e-9);

}  // namespace gptlab::polytope
