#include "gptlab/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "gptlab/error.hpp"

namespace gptlab::polytope {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
using Row = std::vector<S>;

double to_double(const double& v) { return v; }
double to_double(const Rational& v) { return v.template convert_to<double>(); }

template <class S>
S abs_of(const S& v) {
  return v < S(0) ? S(-v) : v;
}

// Zero sets as packed bit rows.
class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i / 64] |= std::uint64_t{1} << (i % 64); }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.w_.resize(w_.size());
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & o.w_[k];
    return r;
  }
  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  bool contains(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if ((o.w_[k] & ~w_[k]) != 0) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> w_;
};

template <class S>
struct Ray {
  Row<S> v;
  Bits zero;
};

template <class S>
S dot(const Row<S>& a, const Row<S>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class S>
void scale_unit(Row<S>& v) {
  S m(0);
  for (const auto& x : v) m = std::max(m, abs_of(x));
  if (m == S(0)) return;
  for (auto& x : v) x /= m;
}

template <class S>
S row_scale(const Row<S>& r) {
  S m(0);
  for (const auto& x : r) m = std::max(m, abs_of(x));
  return m;
}

// Sign with a tolerance; tol is zero on the exact path.
template <class S>
int sgn(const S& v, const S& tol) {
  if (v > tol) return 1;
  if (v < -tol) return -1;
  return 0;
}

template <class S>
std::vector<Row<S>> double_description(const std::vector<Row<S>>& rows, std::size_t dim,
                                       const S& eps, std::size_t max_rays) {
  const std::size_t m = rows.size();
  // Pick dim independent rows.
  std::vector<std::size_t> chosen;
  std::vector<Row<S>> echelon;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < m && chosen.size() < dim; ++i) {
    Row<S> r = rows[i];
    for (std::size_t b = 0; b < echelon.size(); ++b) {
      const S c = r[pivots[b]] / echelon[b][pivots[b]];
      if (c == S(0)) continue;
      for (std::size_t k = 0; k < dim; ++k) r[k] -= c * echelon[b][k];
    }
    std::size_t pc = 0;
    for (std::size_t k = 1; k < dim; ++k)
      if (abs_of(r[k]) > abs_of(r[pc])) pc = k;
    if (abs_of(r[pc]) > eps * (row_scale(rows[i]) + S(1))) {
      echelon.push_back(r);
      pivots.push_back(pc);
      chosen.push_back(i);
    }
  }
  if (chosen.size() < dim) throw ValidationError("cone is not pointed: constraint rows do not span");

  // Inverse of the chosen block; its columns are the initial rays.
  std::vector<Row<S>> a(dim, Row<S>(2 * dim, S(0)));
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = 0; k < dim; ++k) a[r][k] = rows[chosen[r]][k];
    a[r][dim + r] = S(1);
  }
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < dim; ++r)
      if (abs_of(a[r][col]) > abs_of(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    const S p = a[col][col];
    for (auto& x : a[col]) x /= p;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == col || a[r][col] == S(0)) continue;
      const S c = a[r][col];
      for (std::size_t k = 0; k < 2 * dim; ++k) a[r][k] -= c * a[col][k];
    }
  }
  std::vector<Ray<S>> rays;
  for (std::size_t k = 0; k < dim; ++k) {
    Ray<S> ray{Row<S>(dim), Bits(m)};
    for (std::size_t r = 0; r < dim; ++r) ray.v[r] = a[r][dim + k];
    scale_unit(ray.v);
    for (std::size_t j = 0; j < dim; ++j)
      if (j != k) ray.zero.set(chosen[j]);
    rays.push_back(std::move(ray));
  }

  std::vector<bool> used(m, false);
  for (auto c : chosen) used[c] = true;
  const int need = static_cast<int>(dim) - 2;

  for (std::size_t i = 0; i < m; ++i) {
    if (used[i]) continue;
    const S tol = eps * (row_scale(rows[i]) + S(1));
    std::vector<S> val(rays.size());
    std::vector<std::size_t> pos, neg, zer;
    for (std::size_t j = 0; j < rays.size(); ++j) {
      val[j] = dot(rows[i], rays[j].v);
      const int s = sgn(val[j], tol);
      (s > 0 ? pos : s < 0 ? neg : zer).push_back(j);
    }
    std::vector<Ray<S>> next;
    next.reserve(pos.size() + zer.size());
    for (auto j : pos) next.push_back(rays[j]);
    for (auto j : zer) {
      next.push_back(rays[j]);
      next.back().zero.set(i);
    }
    for (auto p : pos) {
      for (auto n : neg) {
        Bits common = rays[p].zero & rays[n].zero;
        if (common.count() < need) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r != p && r != n && rays[r].zero.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray<S> fresh{Row<S>(dim), common};
        for (std::size_t k = 0; k < dim; ++k)
          fresh.v[k] = val[p] * rays[n].v[k] - val[n] * rays[p].v[k];
        scale_unit(fresh.v);
        fresh.zero.set(i);
        next.push_back(std::move(fresh));
        if (next.size() > max_rays)
          throw BudgetExceeded("double-description",
                               "vertex enumeration exceeded " + std::to_string(max_rays) + " rays");
      }
    }
    rays = std::move(next);
  }

  std::vector<Row<S>> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

template <class S>
Row<S> to_row(const Vector& v) {
  Row<S> r(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) r[static_cast<std::size_t>(i)] = S(v[i]);
  return r;
}

template <class S>
Vector to_vector(const Row<S>& r) {
  Vector v(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) v[static_cast<Eigen::Index>(i)] = to_double(r[i]);
  return v;
}

template <class S>
S eps_of(const DdOptions& o);
template <>
double eps_of<double>(const DdOptions& o) { return o.eps; }
template <>
Rational eps_of<Rational>(const DdOptions&) { return Rational(0); }

template <class S>
std::vector<Row<S>> facets_impl(const std::vector<Row<S>>& verts, const DdOptions& opts) {
  if (verts.empty()) throw ValidationError("empty vertex list");
  const std::size_t dim = verts.front().size();
  auto rays = double_description(verts, dim, eps_of<S>(opts), opts.max_rays);
  for (auto& f : rays) {
    S top(0);
    for (const auto& v : verts) top = std::max(top, dot(f, v));
    for (auto& x : f) x /= top;
  }
  return rays;
}

template <class S>
std::vector<Vector> effect_vertices_impl(const std::vector<Vector>& vertices, const DdOptions& opts) {
  const std::size_t k = static_cast<std::size_t>(vertices.front().size());
  std::vector<Row<S>> rows;
  for (const auto& v : vertices) {
    Row<S> lo = to_row<S>(v);
    lo.push_back(S(0));
    Row<S> hi(k + 1);
    for (std::size_t j = 0; j < k; ++j) hi[j] = -lo[j];
    hi[k] = S(1);
    rows.push_back(std::move(lo));
    rows.push_back(std::move(hi));
  }
  Row<S> t(k + 1, S(0));
  t[k] = S(1);
  rows.push_back(t);
  const S eps = eps_of<S>(opts);
  std::vector<Vector> out;
  for (auto& r : double_description(rows, k + 1, eps, opts.max_rays)) {
    if (!(r[k] > eps)) continue;
    Row<S> f(r.begin(), r.end() - 1);
    for (auto& x : f) x /= r[k];
    out.push_back(to_vector(f));
  }
  return out;
}

template <class S>
std::vector<Vector> max_tensor_impl(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                    const DdOptions& opts) {
  std::vector<Row<S>> ra, rb;
  for (const auto& v : a) ra.push_back(to_row<S>(v));
  for (const auto& v : b) rb.push_back(to_row<S>(v));
  const auto fa = facets_impl(ra, opts);
  const auto fb = facets_impl(rb, opts);
  std::vector<Row<S>> rows;
  for (const auto& f : fa) {
    for (const auto& g : fb) {
      Row<S> r;
      r.reserve(f.size() * g.size());
      for (const auto& x : f)
        for (const auto& y : g) r.push_back(x * y);
      rows.push_back(std::move(r));
    }
  }
  const std::size_t dim = ra.front().size() * rb.front().size();
  std::vector<Vector> out;
  for (auto& r : double_description(rows, dim, eps_of<S>(opts), opts.max_rays)) {
    const S n = r[0];
    for (auto& x : r) x /= n;
    out.push_back(to_vector(r));
  }
  return out;
}

}  // namespace

bool lex_less(const Vector& a, const Vector& b, double tol) {
  const auto n = std::min(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a[i] < b[i] - tol) return true;
    if (a[i] > b[i] + tol) return false;
  }
  return a.size() < b.size();
}

std::vector<Vector> canonicalize(std::vector<Vector> points, double tol) {
  std::sort(points.begin(), points.end(),
            [tol](const Vector& x, const Vector& y) { return lex_less(x, y, tol); });
  std::vector<Vector> out;
  for (auto& p : points) {
    if (!out.empty() && out.back().size() == p.size() &&
        (out.back() - p).lpNorm<Eigen::Infinity>() <= tol)
      continue;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Vector> cone_extreme_rays(const std::vector<Vector>& rows, const DdOptions& opts) {
  if (rows.empty()) throw ValidationError("no constraint rows");
  const auto dim = static_cast<std::size_t>(rows.front().size());
  std::vector<Vector> out;
  if (opts.exact) {
    std::vector<Row<Rational>> rr;
    for (const auto& r : rows) rr.push_back(to_row<Rational>(r));
    for (const auto& r : double_description(rr, dim, Rational(0), opts.max_rays))
      out.push_back(to_vector(r));
  } else {
    std::vector<Row<double>> rr;
    for (const auto& r : rows) rr.push_back(to_row<double>(r));
    for (const auto& r : double_description(rr, dim, opts.eps, opts.max_rays))
      out.push_back(to_vector(r));
  }
  return canonicalize(std::move(out));
}

std::vector<Vector> facet_functionals(const std::vector<Vector>& vertices, const DdOptions& opts) {
  std::vector<Vector> out;
  if (opts.exact) {
    std::vector<Row<Rational>> rr;
    for (const auto& v : vertices) rr.push_back(to_row<Rational>(v));
    for (const auto& f : facets_impl(rr, opts)) out.push_back(to_vector(f));
  } else {
    std::vector<Row<double>> rr;
    for (const auto& v : vertices) rr.push_back(to_row<double>(v));
    for (const auto& f : facets_impl(rr, opts)) out.push_back(to_vector(f));
  }
  return canonicalize(std::move(out));
}

std::vector<Vector> effect_polytope_vertices(const std::vector<Vector>& vertices,
                                             const DdOptions& opts) {
  if (vertices.empty()) throw ValidationError("empty vertex list");
  auto out = opts.exact ? effect_vertices_impl<Rational>(vertices, opts)
                        : effect_vertices_impl<double>(vertices, opts);
  return canonicalize(std::move(out));
}

std::vector<Vector> max_tensor_vertices(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                        const DdOptions& opts) {
  if (a.empty() || b.empty()) throw ValidationError("empty vertex list");
  auto out = opts.exact ? max_tensor_impl<Rational>(a, b, opts) : max_tensor_impl<double>(a, b, opts);
  return canonicalize(std::move(out));
}

}  // namespace gptlab::polytope
