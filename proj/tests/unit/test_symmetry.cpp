#include <doctest.h>

#include <cmath>

#include "gptlab/discrimination.hpp"
#include "gptlab/error.hpp"
#include "gptlab/models.hpp"
#include "gptlab/quantum_basis.hpp"
#include "gptlab/symmetry.hpp"

using namespace gptlab;

namespace {

std::vector<StateSpace> builtins() {
  return {models::classical(2), models::classical(3), models::classical(4), models::gbit_ball(1),
          models::gbit_ball(2), models::gbit_ball(3),  models::gbit_ball(5),  models::square_gbit(),
          models::quantum(2),   models::quantum(3)};
}

Effect projector_effect(const CVector& v) { return Effect(quantum::operator_to_functional(v * v.adjoint())); }

}  // namespace

TEST_CASE("group action") {
  const auto b = models::gbit_ball(3);
  const StateVector w{1.0, 0.3, -0.2, 0.1};
  CHECK(apply(b, Matrix::Identity(4, 4), w) == w);
  Matrix rz = Matrix::Identity(3, 3);
  rz(0, 0) = rz(1, 1) = -1.0;  // rotation by pi about z
  const StateVector north{1.0, 0.0, 0.0, 1.0};
  CHECK(apply(b, rotation_action(rz), north).coords.isApprox(north.coords));

  const auto bit = models::classical(2);
  const auto v = bit.extreme_points();
  const Matrix swap = permutation_action({1, 0});
  const auto img = apply(bit, swap, v[0]);
  CHECK(img.coords.isApprox(v[1].coords));

  CHECK_THROWS_AS(apply(b, 2.0 * Matrix::Identity(4, 4), north), InvalidGroupDescriptor);
}

TEST_CASE("transitivity") {
  for (int d = 2; d <= 4; ++d) CHECK(transitivity_check(models::gbit_ball(d)).ok);
  for (int n = 2; n <= 5; ++n) CHECK(transitivity_check(models::classical(n)).ok);
  CHECK(transitivity_check(models::square_gbit()).ok);
  CHECK(transitivity_check(models::quantum(2)).ok);
  CHECK(transitivity_check(models::quantum(3)).ok);

  // a triangle with only the identity declared
  const auto tri = StateSpace::polytope({StateVector{1.0, 0.0, 0.0}, StateVector{1.0, 1.0, 0.0},
                                         StateVector{1.0, 0.0, 1.0}});
  const auto r = transitivity_check(tri);
  CHECK_FALSE(r.ok);
  REQUIRE(r.stranded);
  CHECK(contains_state(tri, *r.stranded));
}

TEST_CASE("transitivity witnesses on the ball preserve the norm") {
  const auto b = models::gbit_ball(3);
  for (unsigned long long seed = 0; seed < 10; ++seed) {
    const auto r = transitivity_check(b, seed, 5);
    REQUIRE(r.ok);
    REQUIRE(r.map);
    const Vector img = *r.map * r.from.coords;
    CHECK((img - r.to.coords).norm() < 1e-9);
    CHECK(std::abs(r.from.hat().norm() - 1.0) < 1e-9);
    CHECK(std::abs(r.to.hat().norm() - 1.0) < 1e-9);
    CHECK(std::abs(img.tail(3).norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("continuity") {
  CHECK(continuity_check(models::gbit_ball(3)).ok);
  CHECK(continuity_check(models::quantum(2)).ok);
  CHECK(continuity_check(models::quantum(3)).ok);
  CHECK_FALSE(continuity_check(models::classical(3)).ok);
  CHECK_FALSE(continuity_check(models::square_gbit()).ok);
  CHECK_FALSE(continuity_check(models::gbit_ball(1)).ok);
}

TEST_CASE("maximally mixed states") {
  CHECK(maximally_mixed(models::classical(3)).coords.isApprox(StateVector{1.0, 1.0 / 3, 1.0 / 3}.coords));
  CHECK(maximally_mixed(models::gbit_ball(4)).coords.isApprox(Vector::Unit(5, 0)));
  const Vector half = quantum::density_to_coords(CMatrix::Identity(2, 2) / 2.0);
  CHECK((maximally_mixed(models::quantum(2)).coords - half).norm() < 1e-12);
  CHECK(maximally_mixed(models::square_gbit()).coords.isApprox(StateVector{1.0, 0.5, 0.5}.coords));
}

TEST_CASE("maximally mixed state is invariant and equals the group average") {
  Rng rng(17);
  for (const auto& s : builtins()) {
    const auto mu = maximally_mixed(s);
    for (int t = 0; t < 100; ++t) {
      const Matrix g = random_group_element(s, rng);
      CHECK((g * mu.coords - mu.coords).norm() <= 1e-9);
    }
    const auto w = random_pure_state(s, rng);
    CHECK((group_average(s, w).coords - mu.coords).norm() <= 1e-9);
  }
}

TEST_CASE("declared groups are validated") {
  const auto sq = models::square_gbit();
  Matrix shear = Matrix::Identity(3, 3);
  shear(1, 2) = 0.5;
  CHECK_THROWS_AS(validate_group(sq.with_group(GroupDescriptor{FiniteMatrixGroup{{shear}}})), InvalidGroupDescriptor);
  for (const auto& s : builtins()) CHECK_NOTHROW(validate_group(s));
}

TEST_CASE("strict convexity") {
  for (int d = 1; d <= 5; ++d) CHECK(strict_convexity_check(models::gbit_ball(d)).strictly_convex);
  CHECK(strict_convexity_check(models::quantum(2)).strictly_convex);
  CHECK(strict_convexity_check(models::classical(2)).strictly_convex);

  for (const auto& s : {models::square_gbit(), models::classical(3), models::quantum(3)}) {
    const auto r = strict_convexity_check(s);
    CHECK_FALSE(r.strictly_convex);
    REQUIRE(r.witness);
    REQUIRE(r.support);
    // boundary: support effect is valid, vanishes on the witness
    CHECK(contains_state(s, *r.witness));
    CHECK(contains_effect(s, *r.support, 1e-9));
    CHECK(std::abs(evaluate(*r.support, *r.witness)) < 1e-9);
  }
  // mixed: the quantum witness is rank-deficient but not pure
  const auto q = strict_convexity_check(models::quantum(3));
  const CMatrix rho = quantum::coords_to_density(q.witness->coords, 3);
  CHECK(std::abs((rho * rho).trace().real() - 0.5) < 1e-9);
  // the square witness is an edge midpoint
  const auto sq = strict_convexity_check(models::square_gbit());
  const Vector h = sq.witness->hat();
  const bool on_edge = std::abs(h[0] - 0.5) < 1e-9 || std::abs(h[1] - 0.5) < 1e-9;
  CHECK(on_edge);
}

TEST_CASE("faces") {
  const Effect ee{0.5, 0.0, 0.0, 0.5};
  const auto fb = face_extract(models::gbit_ball(3), ee);
  CHECK(fb.affine_dimension() == 0);
  REQUIRE(std::holds_alternative<FacePoint>(fb.members));
  CHECK(std::get<FacePoint>(fb.members).point.coords.isApprox(StateVector{1.0, 0.0, 0.0, 1.0}.coords));
  CHECK(fb.members_on_face());

  const auto fs = face_extract(models::square_gbit(), models::square_x());
  CHECK(fs.extreme_point_count() == std::size_t{2});
  CHECK(fs.affine_dimension() == 1);

  CVector a = CVector::Zero(3), b = CVector::Zero(3);
  a[0] = 1.0;
  b[1] = 1.0;
  const Effect p(projector_effect(a).functional + projector_effect(b).functional);
  const auto fq = face_extract(models::quantum(3), p);
  CHECK(fq.affine_dimension() == 3);
  CHECK(fq.members_on_face());

  CHECK_THROWS_AS(face_extract(models::square_gbit(), Effect{0.5, 0.0, 0.0}), NoFaceError);
}

TEST_CASE("every built-in space has an exposed pure state") {
  CHECK(face_extract(models::classical(3), Effect{0.0, 1.0, 0.0}).extreme_point_count() == std::size_t{1});
  CHECK(face_extract(models::square_gbit(), Effect{0.0, 0.5, 0.5}).extreme_point_count() == std::size_t{1});
  CHECK(face_extract(models::gbit_ball(2), Effect{0.5, 0.5, 0.0}).affine_dimension() == 0);
  CVector v = CVector::Zero(2);
  v[0] = 1.0;
  CHECK(face_extract(models::quantum(2), projector_effect(v)).affine_dimension() == 0);
}

TEST_CASE("equivalence probes") {
  const auto edge = face_extract(models::square_gbit(), models::square_x());
  CHECK(equivalence_probe(edge, models::classical(2)).consistent);
  const auto r = equivalence_probe(models::square_gbit(), models::gbit_ball(2));
  CHECK_FALSE(r.consistent);
  CHECK(r.invariant == "strict convexity");
  CVector a = CVector::Zero(3), b = CVector::Zero(3);
  a[0] = 1.0;
  b[1] = 1.0;
  const Effect p(projector_effect(a).functional + projector_effect(b).functional);
  CHECK(equivalence_probe(face_extract(models::quantum(3), p), models::quantum(2)).consistent);
  CHECK(equivalence_probe(models::quantum(2), models::gbit_ball(3)).consistent);
  CHECK_FALSE(equivalence_probe(models::classical(3), models::classical(2)).consistent);
}

TEST_CASE("two-bit face dimension test") {
  for (int d = 1; d <= 31; ++d) CHECK(two_bit_face_dimension_test(d) == (d <= 3));
  CHECK(g2_exception(7));
  CHECK_FALSE(g2_exception(3));
  CHECK_THROWS_AS(two_bit_face_dimension_test(0), DomainError);
}

TEST_CASE("N distinguishable pure states average to the center") {
  std::vector<StateSpace> spaces;
  for (int n = 2; n <= 4; ++n) spaces.push_back(models::classical(n));
  for (int d = 1; d <= 5; ++d) spaces.push_back(models::gbit_ball(d));
  spaces.push_back(models::quantum(2));
  for (const auto& s : spaces) {
    const auto w = complete_measurement(s);
    CHECK(static_cast<int>(w.states.size()) == capacity(s).value);
    Vector mean = Vector::Zero(s.ambient_dim());
    for (const auto& x : w.states) mean += x.coords;
    mean /= static_cast<double>(w.states.size());
    CHECK((mean - maximally_mixed(s).coords).norm() <= 1e-9);
  }
}

TEST_CASE("symmetry groups of polygons") {
  auto polygon = [](int n) {
    std::vector<StateVector> v;
    for (int i = 0; i < n; ++i)
      v.push_back(StateVector{1.0, std::cos(2.0 * M_PI * i / n), std::sin(2.0 * M_PI * i / n)});
    return v;
  };
  CHECK(polytope_symmetry_group(polygon(3)).elements.size() == 6);
  CHECK(polytope_symmetry_group(polygon(4)).elements.size() == 8);
  CHECK(polytope_symmetry_group(polygon(6)).elements.size() == 12);
  const auto g = polytope_symmetry_group(polygon(5));
  // closed under products
  for (const auto& x : g.elements)
    for (const auto& y : g.elements) {
      bool found = false;
      for (const auto& z : g.elements) found = found || (x * y - z).norm() < 1e-9;
      CHECK(found);
    }
  std::vector<StateVector> many(20, StateVector{1.0, 0.0, 0.0});
  CHECK_THROWS_AS(polytope_symmetry_group(many), BudgetExceeded);
}
