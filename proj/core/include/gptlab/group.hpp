#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gptlab/linalg.hpp"

namespace gptlab {

struct GroupDescriptor;

/// No reversible transformations beyond the identity are declared.
struct TrivialGroup {};

/// Explicit K x K matrices acting on coordinate vectors.
struct FiniteMatrixGroup {
  std::vector<Matrix> elements;
};

/// SO(d) acting on the Bloch part of Ball(d).
struct ParametricRotations {
  int dim = 0;
};

/// rho -> U rho U^dagger on Quantum(N).
struct ParametricUnitaryConjugations {
  int levels = 0;
};

/// All permutations of the N vertices of Simplex(N).
struct Permutations {
  int count = 0;
};

/// G_A x G_B acting factorwise on a composite.
struct LocalProductGroup {
  std::shared_ptr<const GroupDescriptor> a;
  std::shared_ptr<const GroupDescriptor> b;
  int ka = 0;  // factor ambient dimensions
  int kb = 0;
};

struct GroupDescriptor {
  using Kind = std::variant<TrivialGroup, FiniteMatrixGroup, ParametricRotations,
                            ParametricUnitaryConjugations, Permutations, LocalProductGroup>;
  Kind kind;

  GroupDescriptor() = default;
  GroupDescriptor(Kind k) : kind(std::move(k)) {}  // NOLINT(google-explicit-constructor)

  bool is_parametric() const {
    return std::holds_alternative<ParametricRotations>(kind) ||
           std::holds_alternative<ParametricUnitaryConjugations>(kind);
  }
  std::string name() const;
};

}  // namespace gptlab
