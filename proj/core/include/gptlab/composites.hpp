#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gptlab/convex.hpp"

namespace gptlab {

/// Bipartite composite. Coordinates are indexed row-major: (i, j) -> i * K_B + j.
struct Composite {
  std::shared_ptr<const StateSpace> a;
  std::shared_ptr<const StateSpace> b;
  CompositionRule rule = CompositionRule::MinTensor;
  StateSpace space;

  int ka() const { return a->ambient_dim(); }
  int kb() const { return b->ambient_dim(); }
};

StateVector product_state(const StateVector& a, const StateVector& b);
Effect product_effect(const Effect& a, const Effect& b);

struct ComposeOptions {
  std::size_t vertex_budget = 20000;
};

/// Finite factors give an explicit polytope (product vertices for the min
/// rule, double-description enumeration for the max rule). A continuous factor
/// gives a tensor space queried through membership oracles.
/// Throws BudgetExceeded when enumeration passes the vertex budget.
Composite compose(const StateSpace& a, const StateSpace& b, CompositionRule rule,
                  const ComposeOptions& opts = {});

enum class Side { A, B };

/// Contraction of the other factor with its unit effect.
StateVector reduced_state(const StateVector& w, int ka, int kb, Side keep = Side::A);
StateVector reduced_state(const Composite& c, const StateVector& w, Side keep = Side::A);

/// omega_A^{E_B}: the A-state left after E_B fires on B. Throws
/// ZeroProbabilityConditioning when (1 (x) E_B)(w) <= tol.
StateVector conditional_state(const StateVector& w, const Effect& eb, int ka, int kb,
                              double tol = kDefaultTol);
StateVector conditional_state(const Composite& c, const StateVector& w, const Effect& eb,
                              double tol = kDefaultTol);

/// A-marginal reconstructed from the outcomes of one B measurement: the sum of
/// lambda_b * omega_A^{E_b} over outcomes with lambda_b > tol.
Vector marginal_from_measurement(const StateVector& w, const Measurement& mb, int ka, int kb,
                                 double tol = kDefaultTol);

/// Largest deviation between the reconstructed A-marginals of any two of the
/// measurements; +inf if some outcome probability is below -tol.
double signalling_deviation(const StateVector& w, const std::vector<Measurement>& mbs, int ka, int kb,
                            double tol = kDefaultTol);

bool no_signalling_check(const StateVector& w, const std::vector<Measurement>& mbs, int ka, int kb,
                         double tol = kDefaultTol);

/// Two binary measurements per party; the first effect is outcome +1.
struct ChshSettings {
  std::array<Measurement, 2> alice;
  std::array<Measurement, 2> bob;
};

/// Correlator <A_x B_y> under the +1/-1 outcome convention.
double correlator(const StateVector& w, const Measurement& ma, const Measurement& mb, int ka, int kb);

/// |C00 + C01 + C10 - C11|.
double chsh_value(const StateVector& w, const ChshSettings& s, int ka, int kb);

struct TomographyResult {
  bool ok = false;
  int affine_dim = 0;
  int expected = 0;  // K_A * K_B - 1
};

/// Affine dimension of the composite state set, from the vertex list or from
/// sampled product states (seeded) when the space is continuous.
TomographyResult local_tomography(const Composite& c, unsigned long long seed = 0);
bool local_tomography_check(const Composite& c, unsigned long long seed = 0);

struct MultiplicativityResult {
  bool ok = false;
  int na = 0;
  int nb = 0;
  int product_lower = 0;               // size of the verified product witness
  std::optional<int> composite_value;  // exact capacity of the composite when computed
  std::string note;
};

MultiplicativityResult capacity_multiplicativity_check(const Composite& c);

}  // namespace gptlab
