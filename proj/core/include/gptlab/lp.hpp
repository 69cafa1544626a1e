#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gptlab/error.hpp"
#include "gptlab/linalg.hpp"

namespace gptlab::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// maximize objective·x  s.t.  eq_matrix·x = eq_rhs,  le_matrix·x <= le_rhs,
/// lower <= x <= upper (entries may be ±inf).
struct LinearProgram {
  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix le_matrix;
  Vector le_rhs;
  Vector lower;
  Vector upper;

  /// n variables, zero objective, no constraints, bounds [0, +inf).
  static LinearProgram with_variables(int n);

  int num_variables() const { return static_cast<int>(objective.size()); }

  /// Throws DimensionError when rows, columns and bounds disagree.
  void validate() const;
};

/// Accumulates constraint rows before they are packed into a LinearProgram.
class RowBuffer {
 public:
  explicit RowBuffer(int cols) : cols_(cols) {}
  void add(const Vector& row, double rhs);
  int size() const { return static_cast<int>(rhs_.size()); }
  void write(Matrix& m, Vector& rhs) const;

 private:
  int cols_;
  std::vector<Vector> rows_;
  std::vector<double> rhs_;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string to_string(Status s);

struct Solution {
  Status status = Status::Infeasible;
  Vector point;  // set when Optimal
  double value = 0.0;
};

struct Feasibility {
  bool feasible = false;
  Vector witness;
};

struct SolverOptions {
  double feasibility_tol = kDefaultTol;
  double pivot_tol = 1e-10;
  std::size_t max_iterations = 500000;
};

/// Numeric breakdown: the tableau could not be brought to a verified vertex.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<int> basis)
      : Error(what), basis_(std::move(basis)) {}
  const std::vector<int>& basis() const noexcept { return basis_; }

 private:
  std::vector<int> basis_;
};

/// Two-phase dense tableau simplex, Bland's rule throughout.
/// Optimal points are basic (vertex) solutions, re-verified by substitution.
Solution solve(const LinearProgram& prog, const SolverOptions& opts = {});

/// Phase 1 only.
Feasibility feasible(const LinearProgram& prog, const SolverOptions& opts = {});

/// Largest violation of any constraint or bound at x.
double max_residual(const LinearProgram& prog, const Vector& x);

}  // namespace gptlab::lp
