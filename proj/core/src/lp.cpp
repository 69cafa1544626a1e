#include "gptlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gptlab::lp {

LinearProgram LinearProgram::with_variables(int n) {
  LinearProgram p;
  p.objective = Vector::Zero(n);
  p.eq_matrix = Matrix::Zero(0, n);
  p.eq_rhs = Vector::Zero(0);
  p.le_matrix = Matrix::Zero(0, n);
  p.le_rhs = Vector::Zero(0);
  p.lower = Vector::Zero(n);
  p.upper = Vector::Constant(n, kInf);
  return p;
}

void LinearProgram::validate() const {
  const auto n = objective.size();
  if (eq_matrix.cols() != n && eq_matrix.rows() != 0)
    throw DimensionError("lp: equality matrix has wrong column count");
  if (le_matrix.cols() != n && le_matrix.rows() != 0)
    throw DimensionError("lp: inequality matrix has wrong column count");
  if (eq_matrix.rows() != eq_rhs.size())
    throw DimensionError("lp: equality rhs length mismatch");
  if (le_matrix.rows() != le_rhs.size())
    throw DimensionError("lp: inequality rhs length mismatch");
  if (lower.size() != n || upper.size() != n)
    throw DimensionError("lp: bound vectors have wrong length");
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]))
      throw DomainError("lp: NaN bound");
  }
}

void RowBuffer::add(const Vector& row, double rhs) {
  if (row.size() != cols_) throw DimensionError("lp: row has wrong length");
  rows_.push_back(row);
  rhs_.push_back(rhs);
}

void RowBuffer::write(Matrix& m, Vector& rhs) const {
  m.resize(static_cast<Eigen::Index>(rows_.size()), cols_);
  rhs.resize(static_cast<Eigen::Index>(rhs_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = rows_[i].transpose();
    rhs[static_cast<Eigen::Index>(i)] = rhs_[i];
  }
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
  }
  return "?";
}

namespace {

// x_j = offset + sum(coef * y_col)
struct VarMap {
  double offset = 0.0;
  std::vector<std::pair<int, double>> terms;
};

struct StandardForm {
  Matrix a;  // rows x cols, y >= 0
  Vector b;
  Vector c;  // maximize c·y + c_const
  double c_const = 0.0;
  int num_y = 0;
  std::vector<VarMap> vars;
  std::vector<int> slack_of_row;  // column of the +1 slack in row, -1 if none
};

StandardForm to_standard(const LinearProgram& prog) {
  StandardForm sf;
  const int n = prog.num_variables();
  sf.vars.resize(static_cast<std::size_t>(n));
  std::vector<std::pair<int, double>> bound_rows;  // (y column, width)
  int ny = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = prog.lower[j];
    const double hi = prog.upper[j];
    if (lo > hi) {
      // empty box; caught below as an infeasible row 0 <= -1
      sf.vars[j].offset = lo;
      sf.vars[j].terms.push_back({ny, 1.0});
      bound_rows.push_back({ny, hi - lo});
      ++ny;
    } else if (std::isfinite(lo)) {
      sf.vars[j].offset = lo;
      sf.vars[j].terms.push_back({ny, 1.0});
      if (std::isfinite(hi)) bound_rows.push_back({ny, hi - lo});
      ++ny;
    } else if (std::isfinite(hi)) {
      sf.vars[j].offset = hi;
      sf.vars[j].terms.push_back({ny, -1.0});
      ++ny;
    } else {
      sf.vars[j].terms.push_back({ny, 1.0});
      sf.vars[j].terms.push_back({ny + 1, -1.0});
      ny += 2;
    }
  }
  sf.num_y = ny;

  const int meq = static_cast<int>(prog.eq_matrix.rows());
  const int mle = static_cast<int>(prog.le_matrix.rows());
  const int mb = static_cast<int>(bound_rows.size());
  const int m = meq + mle + mb;
  const int nslack = mle + mb;
  sf.a = Matrix::Zero(m, ny + nslack);
  sf.b = Vector::Zero(m);
  sf.slack_of_row.assign(static_cast<std::size_t>(m), -1);

  auto emit = [&](int row, const Eigen::Ref<const Vector>& coeffs, double rhs) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      const double aj = coeffs[j];
      if (aj == 0.0) continue;
      shift += aj * sf.vars[j].offset;
      for (auto [col, coef] : sf.vars[j].terms) sf.a(row, col) += aj * coef;
    }
    sf.b[row] = rhs - shift;
  };
  for (int i = 0; i < meq; ++i) emit(i, prog.eq_matrix.row(i).transpose(), prog.eq_rhs[i]);
  for (int i = 0; i < mle; ++i) {
    const int row = meq + i;
    emit(row, prog.le_matrix.row(i).transpose(), prog.le_rhs[i]);
    sf.a(row, ny + i) = 1.0;
    sf.slack_of_row[row] = ny + i;
  }
  for (int i = 0; i < mb; ++i) {
    const int row = meq + mle + i;
    sf.a(row, bound_rows[i].first) = 1.0;
    sf.a(row, ny + mle + i) = 1.0;
    sf.b[row] = bound_rows[i].second;
    sf.slack_of_row[row] = ny + mle + i;
  }

  sf.c = Vector::Zero(ny + nslack);
  for (int j = 0; j < n; ++j) {
    const double cj = prog.objective[j];
    sf.c_const += cj * sf.vars[j].offset;
    for (auto [col, coef] : sf.vars[j].terms) sf.c[col] += cj * coef;
  }
  return sf;
}

enum class RunResult { Optimal, Unbounded };

class Tableau {
 public:
  Tableau(Matrix t, std::vector<int> basis, double pivot_tol, std::size_t max_iter)
      : t_(std::move(t)), basis_(std::move(basis)), pivot_tol_(pivot_tol), max_iter_(max_iter) {}

  int rows() const { return static_cast<int>(t_.rows()); }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  const std::vector<int>& basis() const { return basis_; }
  Matrix& data() { return t_; }
  double rhs(int i) const { return t_(i, cols()); }

  void set_objective(const Vector& c) {
    obj_ = Vector::Zero(cols() + 1);
    obj_.head(cols()) = c;
    for (int i = 0; i < rows(); ++i) {
      const double cb = c[basis_[i]];
      if (cb != 0.0) obj_ -= cb * t_.row(i).transpose();
    }
  }

  double objective_value() const { return -obj_[cols()]; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    const double f = obj_[c];
    if (f != 0.0) obj_ -= f * t_.row(r).transpose();
    basis_[r] = c;
  }

  // Bland's rule. Columns >= active_cols never enter.
  RunResult run(int active_cols) {
    std::size_t iter = 0;
    for (;;) {
      if (++iter > max_iter_)
        throw SolverError("lp: iteration limit reached", basis_);
      int enter = -1;
      for (int j = 0; j < active_cols; ++j) {
        if (obj_[j] > cost_tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return RunResult::Optimal;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < rows(); ++i) {
        const double aij = t_(i, enter);
        if (aij <= pivot_tol_) continue;
        const double ratio = std::max(0.0, rhs(i)) / aij;
        const double eps = 1e-12 * (1.0 + std::abs(best));
        if (leave < 0 || ratio < best - eps) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + eps && basis_[i] < basis_[leave]) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return RunResult::Unbounded;
      pivot(leave, enter);
    }
  }

  void remove_row(int r) {
    const int m = rows();
    for (int i = r; i + 1 < m; ++i) t_.row(i) = t_.row(i + 1);
    t_.conservativeResize(m - 1, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
  }

  void truncate_columns(int keep) {
    Matrix nt(rows(), keep + 1);
    nt.leftCols(keep) = t_.leftCols(keep);
    nt.col(keep) = t_.col(cols());
    t_ = std::move(nt);
  }

 private:
  Matrix t_;
  Vector obj_;
  std::vector<int> basis_;
  double pivot_tol_;
  double cost_tol_ = 1e-10;
  std::size_t max_iter_;
};

struct CoreResult {
  Status status = Status::Infeasible;
  Vector y;
  std::vector<int> basis;
};

// Solves the standard form; phase1_only stops after a feasible basis is found.
CoreResult run_core(StandardForm& sf, const SolverOptions& opts, bool phase1_only) {
  const int m = static_cast<int>(sf.a.rows());
  const int n = static_cast<int>(sf.a.cols());

  // Flip rows so that b >= 0.
  std::vector<bool> flipped(static_cast<std::size_t>(m), false);
  for (int i = 0; i < m; ++i) {
    if (sf.b[i] < 0.0) {
      sf.a.row(i) *= -1.0;
      sf.b[i] = -sf.b[i];
      flipped[i] = true;
    }
  }
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i) {
    if (sf.slack_of_row[i] < 0 || flipped[i]) art_rows.push_back(i);
  }
  const int nart = static_cast<int>(art_rows.size());
  Matrix t = Matrix::Zero(m, n + nart + 1);
  t.leftCols(n) = sf.a;
  t.col(n + nart) = sf.b;
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    if (sf.slack_of_row[i] >= 0 && !flipped[i]) basis[i] = sf.slack_of_row[i];
  }
  for (int k = 0; k < nart; ++k) {
    t(art_rows[k], n + k) = 1.0;
    basis[art_rows[k]] = n + k;
  }

  Tableau tab(std::move(t), std::move(basis), opts.pivot_tol, opts.max_iterations);
  const double bscale = 1.0 + (m > 0 ? sf.b.cwiseAbs().maxCoeff() : 0.0);

  if (nart > 0) {
    Vector c1 = Vector::Zero(n + nart);
    c1.tail(nart).setConstant(-1.0);
    tab.set_objective(c1);
    tab.run(n + nart);
    if (-tab.objective_value() > opts.feasibility_tol * bscale) {
      CoreResult r;
      r.status = Status::Infeasible;
      r.basis = tab.basis();
      return r;
    }
    // Drive artificials out; drop rows that are linearly redundant.
    for (int i = tab.rows() - 1; i >= 0; --i) {
      if (tab.basis()[i] < n) continue;
      int best = -1;
      double mag = opts.pivot_tol;
      for (int j = 0; j < n; ++j) {
        const double v = std::abs(tab.data()(i, j));
        if (v > mag) {
          mag = v;
          best = j;
        }
      }
      if (best >= 0) {
        tab.set_objective(Vector::Zero(n + nart));
        tab.pivot(i, best);
      } else {
        tab.remove_row(i);
      }
    }
    tab.truncate_columns(n);
  }

  CoreResult res;
  if (!phase1_only) {
    tab.set_objective(sf.c);
    if (tab.run(n) == RunResult::Unbounded) {
      res.status = Status::Unbounded;
      res.basis = tab.basis();
      return res;
    }
  }

  Vector y = Vector::Zero(n);
  for (int i = 0; i < tab.rows(); ++i) y[tab.basis()[i]] = std::max(0.0, tab.rhs(i));

  // Recompute the basic solution from the original rows to shed pivot drift.
  if (tab.rows() > 0 && tab.rows() <= m) {
    const int mb = tab.rows();
    Matrix ab(m, mb);
    for (int k = 0; k < mb; ++k) ab.col(k) = sf.a.col(tab.basis()[k]);
    Eigen::ColPivHouseholderQR<Matrix> qr(ab);
    if (qr.rank() == mb) {
      Vector yb = qr.solve(sf.b);
      Vector cand = Vector::Zero(n);
      bool ok = true;
      for (int k = 0; k < mb; ++k) {
        if (yb[k] < -1e-9 * bscale) ok = false;
        cand[tab.basis()[k]] = std::max(0.0, yb[k]);
      }
      if (ok && (sf.a * cand - sf.b).cwiseAbs().maxCoeff() <=
                    (sf.a * y - sf.b).cwiseAbs().maxCoeff()) {
        y = cand;
      }
    }
  }
  res.status = Status::Optimal;
  res.y = std::move(y);
  res.basis = tab.basis();
  return res;
}

Vector recover(const StandardForm& sf, const Vector& y, int n) {
  Vector x(n);
  for (int j = 0; j < n; ++j) {
    double v = sf.vars[j].offset;
    for (auto [col, coef] : sf.vars[j].terms) v += coef * y[col];
    x[j] = v;
  }
  return x;
}

double residual_scale(const LinearProgram& prog, const Vector& x) {
  double s = 1.0 + (x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0);
  if (prog.eq_rhs.size() > 0) s = std::max(s, 1.0 + prog.eq_rhs.cwiseAbs().maxCoeff());
  if (prog.le_rhs.size() > 0) s = std::max(s, 1.0 + prog.le_rhs.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace

double max_residual(const LinearProgram& prog, const Vector& x) {
  double worst = 0.0;
  if (prog.eq_matrix.rows() > 0)
    worst = std::max(worst, (prog.eq_matrix * x - prog.eq_rhs).cwiseAbs().maxCoeff());
  if (prog.le_matrix.rows() > 0)
    worst = std::max(worst, (prog.le_matrix * x - prog.le_rhs).cwiseMax(0.0).maxCoeff());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, prog.lower[j] - x[j]);
    worst = std::max(worst, x[j] - prog.upper[j]);
  }
  return worst;
}

Solution solve(const LinearProgram& prog, const SolverOptions& opts) {
  prog.validate();
  StandardForm sf = to_standard(prog);
  CoreResult core = run_core(sf, opts, /*phase1_only=*/false);
  Solution sol;
  sol.status = core.status;
  if (core.status != Status::Optimal) return sol;
  sol.point = recover(sf, core.y, prog.num_variables());
  sol.value = prog.objective.dot(sol.point);
  const double res = max_residual(prog, sol.point);
  if (res > opts.feasibility_tol * residual_scale(prog, sol.point))
    throw SolverError("lp: optimal point fails substitution check (residual " +
                          std::to_string(res) + ")",
                      core.basis);
  return sol;
}

Feasibility feasible(const LinearProgram& prog, const SolverOptions& opts) {
  prog.validate();
  StandardForm sf = to_standard(prog);
  CoreResult core = run_core(sf, opts, /*phase1_only=*/true);
  Feasibility f;
  f.feasible = core.status == Status::Optimal;
  if (f.feasible) {
    f.witness = recover(sf, core.y, prog.num_variables());
    const double res = max_residual(prog, f.witness);
    if (res > opts.feasibility_tol * residual_scale(prog, f.witness))
      throw SolverError("lp: feasible point fails substitution check", core.basis);
  }
  return f;
}

}  // namespace gptlab::lp
