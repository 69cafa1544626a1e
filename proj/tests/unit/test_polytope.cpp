#include <doctest.h>

#include <algorithm>

#include "gptlab/error.hpp"
#include "gptlab/polytope.hpp"

using namespace gptlab;

namespace {

std::vector<Vector> square() {
  std::vector<Vector> v;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y) v.push_back((Vector(3) << 1.0, x, y).finished());
  return v;
}

std::vector<Vector> square_facets() {
  return {(Vector(3) << 0, 1, 0).finished(), (Vector(3) << 1, -1, 0).finished(),
          (Vector(3) << 0, 0, 1).finished(), (Vector(3) << 1, 0, -1).finished()};
}

// Every normalized point where 8 of the 16 product inequalities are tight and
// all hold: the vertices of the no-signalling polytope by exhaustion.
std::vector<Vector> brute_force_no_signalling() {
  std::vector<Vector> rows;
  for (const auto& f : square_facets())
    for (const auto& g : square_facets()) rows.push_back(kron(f, g));
  std::vector<Vector> out;
  std::vector<int> pick(16, 0);
  std::fill(pick.begin(), pick.begin() + 8, 1);
  std::sort(pick.begin(), pick.end());
  do {
    Matrix m(9, 9);
    Vector rhs = Vector::Zero(9);
    m.row(0) = Vector::Unit(9, 0).transpose();
    rhs[0] = 1.0;
    int r = 1;
    for (int i = 0; i < 16; ++i)
      if (pick[static_cast<std::size_t>(i)]) m.row(r++) = rows[static_cast<std::size_t>(i)].transpose();
    Eigen::FullPivLU<Matrix> lu(m);
    if (lu.rank() < 9) continue;
    const Vector x = lu.solve(rhs);
    bool ok = true;
    for (const auto& row : rows) ok = ok && row.dot(x) >= -1e-9;
    if (ok) out.push_back(x);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return polytope::canonicalize(out);
}

bool same_sets(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& y : b) hit = hit || (x - y).lpNorm<Eigen::Infinity>() <= tol;
    if (!hit) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("facets of the square") {
  const auto f = polytope::facet_functionals(square());
  CHECK(same_sets(f, square_facets(), 1e-12));
  for (const auto& x : f) {
    double lo = 1e9, hi = -1e9;
    for (const auto& v : square()) {
      lo = std::min(lo, x.dot(v));
      hi = std::max(hi, x.dot(v));
    }
    CHECK(lo == doctest::Approx(0.0));
    CHECK(hi == doctest::Approx(1.0));
  }
}

TEST_CASE("exact and floating facet enumeration agree on a cube") {
  std::vector<Vector> cube;
  for (int i = 0; i < 8; ++i) cube.push_back((Vector(4) << 1.0, i & 1, (i >> 1) & 1, (i >> 2) & 1).finished());
  polytope::DdOptions exact;
  exact.exact = true;
  const auto a = polytope::facet_functionals(cube);
  const auto b = polytope::facet_functionals(cube, exact);
  CHECK(a.size() == 6);
  CHECK(same_sets(a, b, 1e-12));
}

TEST_CASE("effect polytope of the square has six vertices") {
  const auto e = polytope::effect_polytope_vertices(square());
  CHECK(e.size() == 6);
}

TEST_CASE("cone rays of the positive orthant") {
  std::vector<Vector> rows;
  for (int i = 0; i < 3; ++i) rows.push_back(Vector::Unit(3, i));
  const auto r = polytope::cone_extreme_rays(rows);
  CHECK(r.size() == 3);
}

TEST_CASE("max tensor of two squares matches brute-force enumeration") {
  const auto oracle = brute_force_no_signalling();
  REQUIRE(oracle.size() == 24);
  polytope::DdOptions exact;
  exact.exact = true;
  const auto dd_float = polytope::max_tensor_vertices(square(), square());
  const auto dd_exact = polytope::max_tensor_vertices(square(), square(), exact);
  CHECK(same_sets(dd_float, oracle, 1e-9));
  CHECK(same_sets(dd_exact, oracle, 0.0));
  // 16 of them are products of square vertices, the other 8 have half entries
  int products = 0;
  for (const auto& v : dd_exact) {
    bool integral = true;
    for (Eigen::Index i = 0; i < v.size(); ++i) integral = integral && (v[i] == 0.0 || v[i] == 1.0);
    products += integral;
  }
  CHECK(products == 16);
}

TEST_CASE("ray budget is enforced") {
  polytope::DdOptions tight;
  tight.max_rays = 5;
  CHECK_THROWS_AS(polytope::max_tensor_vertices(square(), square(), tight), BudgetExceeded);
}

TEST_CASE("canonical order is lexicographic with duplicates removed") {
  std::vector<Vector> p{(Vector(2) << 1, 2).finished(), (Vector(2) << 0, 5).finished(),
                        (Vector(2) << 1, 2 + 1e-12).finished()};
  const auto c = polytope::canonicalize(p);
  REQUIRE(c.size() == 2);
  CHECK(c[0][0] == 0.0);
  CHECK(polytope::lex_less(c[0], c[1]));
}
