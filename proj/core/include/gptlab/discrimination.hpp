#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gptlab/convex.hpp"

namespace gptlab {

struct DistinguishabilityWitness {
  Measurement measurement;  // effects[i](states[j]) = delta_ij
  std::vector<StateVector> states;
};

enum class Verdict { Distinguishable, NotDistinguishable, Unresolved };

struct DistinguishabilityResult {
  Verdict verdict = Verdict::Unresolved;
  std::optional<DistinguishabilityWitness> witness;
  int rounds = 0;  // cutting-plane rounds used
};

struct DistinguishOptions {
  double tol = kDefaultTol;
  int max_rounds = 50;
};

/// Searches for a measurement with E_i(omega_j) = delta_ij. Finite spaces are
/// decided by one LP; continuous ones by an outer relaxation tightened with
/// exact cone cuts. Throws DomainError if a state is not in the space.
DistinguishabilityResult decide_distinguishable(const StateSpace& space,
                                                const std::vector<StateVector>& states,
                                                const DistinguishOptions& opts = {});

/// Witness when found; nullopt for "not distinguishable" and "unresolved".
std::optional<DistinguishabilityWitness> distinguishable(const StateSpace& space,
                                                         const std::vector<StateVector>& states,
                                                         double tol = kDefaultTol);

/// Re-checks a witness: delta pattern, unit sum and effect validity.
bool verify_witness(const StateSpace& space, const DistinguishabilityWitness& w,
                    double tol = kDefaultTol);

struct CapacityOptions {
  std::size_t vertex_budget = 64;
  std::size_t lp_budget = 50000;
};

struct CapacityResult {
  int value = 0;       // the capacity, or a lower bound when !exact
  bool exact = false;
  std::string note;    // why the result is only a bound
  DistinguishabilityWitness witness;
  std::size_t lps = 0;
};

/// Largest distinguishable set of extreme points (finite case), or the closed
/// forms Ball(d) -> 2 and Quantum(N) -> N with explicit witnesses. Tensor
/// spaces report the product-witness lower bound.
CapacityResult capacity(const StateSpace& space, const CapacityOptions& opts = {});

/// Witness of size capacity; throws BudgetExceeded if the capacity is not exact.
DistinguishabilityWitness complete_measurement(const StateSpace& space,
                                               const CapacityOptions& opts = {});

/// Unique r >= 1 with K = N^r for every pair; (1, 1) is implied.
std::optional<int> fit_capacity_exponent(const std::vector<std::pair<int, int>>& pairs);

/// {2^r - 1 : 1 <= r <= r_max}.
std::vector<int> admissible_bit_dimensions(int r_max);

}  // namespace gptlab
