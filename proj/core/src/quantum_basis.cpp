#include "gptlab/quantum_basis.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gptlab/error.hpp"

namespace gptlab::quantum {

namespace {

constexpr int kMaxCachedLevels = 8;

std::vector<CMatrix> build_basis(int n) {
  std::vector<CMatrix> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      CMatrix s = CMatrix::Zero(n, n);
      s(j, k) = inv_sqrt2;
      s(k, j) = inv_sqrt2;
      out.push_back(s);
      CMatrix a = CMatrix::Zero(n, n);
      a(j, k) = Complex(0.0, -inv_sqrt2);
      a(k, j) = Complex(0.0, inv_sqrt2);
      out.push_back(a);
    }
  }
  for (int l = 1; l < n; ++l) {
    CMatrix d = CMatrix::Zero(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int m = 0; m < l; ++m) d(m, m) = scale;
    d(l, l) = -static_cast<double>(l) * scale;
    out.push_back(d);
  }
  return out;
}

// Coordinate functional F_i and reconstruction element R_i, Tr(F_i R_j) = delta_ij.
CMatrix coord_functional(int i, int n) {
  if (i == 0) return CMatrix::Identity(n, n);
  return gell_mann_basis(n)[static_cast<std::size_t>(i - 1)];
}

CMatrix reconstruction(int i, int n) {
  if (i == 0) return CMatrix::Identity(n, n) / static_cast<double>(n);
  return gell_mann_basis(n)[static_cast<std::size_t>(i - 1)];
}

double real_trace_product(const CMatrix& a, const CMatrix& b) {
  // Re Tr(a b) without forming the product.
  return (a.transpose().cwiseProduct(b)).sum().real();
}

}  // namespace

const std::vector<CMatrix>& gell_mann_basis(int levels) {
  static const std::array<std::vector<CMatrix>, kMaxCachedLevels + 1> cache = [] {
    std::array<std::vector<CMatrix>, kMaxCachedLevels + 1> c;
    for (int n = 1; n <= kMaxCachedLevels; ++n) c[static_cast<std::size_t>(n)] = build_basis(n);
    return c;
  }();
  if (levels < 1 || levels > kMaxCachedLevels)
    throw DomainError("quantum basis supports 1..8 levels, got " + std::to_string(levels));
  return cache[static_cast<std::size_t>(levels)];
}

int levels_from_dim(int k) {
  const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
  if (n < 1 || n * n != k)
    throw DimensionError("dimension " + std::to_string(k) + " is not a square");
  return n;
}

Vector density_to_coords(const CMatrix& rho) {
  const int n = static_cast<int>(rho.rows());
  const auto& basis = gell_mann_basis(n);
  Vector c(n * n);
  c[0] = rho.trace().real();
  for (int k = 1; k < n * n; ++k) c[k] = real_trace_product(rho, basis[static_cast<std::size_t>(k - 1)]);
  return c;
}

CMatrix coords_to_density(const Vector& c, int levels) {
  if (c.size() != levels * levels) throw DimensionError("quantum coordinates have wrong length");
  const auto& basis = gell_mann_basis(levels);
  CMatrix rho = CMatrix::Identity(levels, levels) * (c[0] / levels);
  for (int k = 1; k < levels * levels; ++k) rho += c[k] * basis[static_cast<std::size_t>(k - 1)];
  return rho;
}

Vector operator_to_functional(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  const auto& basis = gell_mann_basis(n);
  Vector f(n * n);
  f[0] = m.trace().real() / n;
  for (int k = 1; k < n * n; ++k) f[k] = real_trace_product(m, basis[static_cast<std::size_t>(k - 1)]);
  return f;
}

CMatrix functional_to_operator(const Vector& f, int levels) {
  if (f.size() != levels * levels) throw DimensionError("quantum functional has wrong length");
  const auto& basis = gell_mann_basis(levels);
  CMatrix m = CMatrix::Identity(levels, levels) * f[0];
  for (int k = 1; k < levels * levels; ++k) m += f[k] * basis[static_cast<std::size_t>(k - 1)];
  return m;
}

Vector bipartite_density_to_coords(const CMatrix& rho, int na, int nb) {
  const int ka = na * na;
  const int kb = nb * nb;
  Vector c(ka * kb);
  for (int i = 0; i < ka; ++i) {
    const CMatrix fi = coord_functional(i, na);
    for (int j = 0; j < kb; ++j) {
      c[i * kb + j] = real_trace_product(rho, kron(fi, coord_functional(j, nb)));
    }
  }
  return c;
}

CMatrix bipartite_coords_to_density(const Vector& c, int na, int nb) {
  const int ka = na * na;
  const int kb = nb * nb;
  if (c.size() != ka * kb) throw DimensionError("bipartite coordinates have wrong length");
  CMatrix rho = CMatrix::Zero(na * nb, na * nb);
  for (int i = 0; i < ka; ++i) {
    const CMatrix ri = reconstruction(i, na);
    for (int j = 0; j < kb; ++j) {
      const double w = c[i * kb + j];
      if (w != 0.0) rho += w * kron(ri, reconstruction(j, nb));
    }
  }
  return rho;
}

Vector bipartite_operator_to_functional(const CMatrix& m, int na, int nb) {
  const int ka = na * na;
  const int kb = nb * nb;
  Vector f(ka * kb);
  for (int i = 0; i < ka; ++i) {
    const CMatrix ri = reconstruction(i, na);
    for (int j = 0; j < kb; ++j) {
      f[i * kb + j] = real_trace_product(m, kron(ri, reconstruction(j, nb)));
    }
  }
  return f;
}

Vector pure_coords(const CVector& psi) {
  const CVector u = psi.normalized();
  return density_to_coords(u * u.adjoint());
}

CMatrix pauli(int axis) {
  CMatrix p = CMatrix::Zero(2, 2);
  switch (axis) {
    case 0: p(0, 0) = 1.0; p(1, 1) = 1.0; break;
    case 1: p(0, 1) = 1.0; p(1, 0) = 1.0; break;
    case 2: p(0, 1) = Complex(0.0, -1.0); p(1, 0) = Complex(0.0, 1.0); break;
    case 3: p(0, 0) = 1.0; p(1, 1) = -1.0; break;
    default: throw DomainError("pauli axis must be 0..3");
  }
  return p;
}

}  // namespace gptlab::quantum
