#include <algorithm>
#include <cmath>
#include <numbers>

#include "certifem/convex_domain.hpp"
#include "certifem/error.hpp"
#include "certifem/fem.hpp"
#include "certifem/interp_constants.hpp"
#include "certifem/mesh.hpp"
#include "certifem/sources.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace certifem;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SourceTerm bare_source(double c) {
  SourceTerm f;
  f.name = "bare";
  f.evaluate = [c](const Point&) { return c; };
  f.sup_norm = std::abs(c);
  return f;
}

}  // namespace

TEST_CASE("local stiffness of the reference triangle") {
  const auto k = local_stiffness(Simplex::triangle({0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
  const double expect[3][3] = {{1, -0.5, -0.5}, {-0.5, 0.5, 0}, {-0.5, 0, 0.5}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(k[i][j] == Approx(expect[i][j]).epsilon(1e-14));
  }
  // 2D stiffness does not change under scaling.
  const auto k2 = local_stiffness(Simplex::triangle({0, 0, 0}, {3, 0, 0}, {0, 3, 0}));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(k2[i][j] == Approx(k[i][j]).epsilon(1e-13));
  }
  const auto t = local_stiffness(Simplex::tetrahedron({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}));
  for (int i = 0; i < 4; ++i) {
    double row = 0;
    for (int j = 0; j < 4; ++j) row += t[i][j];
    CHECK(std::abs(row) <= 1e-14);
  }
  CHECK(t[0][0] == Approx(0.5));
}

TEST_CASE("assembled matrices") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto mesh = generate_fan_refined(inscribed_regular_polygon(disk, 7), 2);
  const CsrMatrix k = assemble_stiffness(mesh);
  CHECK(k.is_symmetric(1e-14));
  std::vector<double> ones(mesh.node_count(), 1.0), y(mesh.node_count());
  k.multiply(ones, y);
  for (double v : y) CHECK(std::abs(v) <= 1e-12);
  const CsrMatrix m = assemble_mass(mesh);
  m.multiply(ones, y);
  double total = 0;
  for (double v : y) total += v;
  CHECK(total == Approx(mesh.measure()).epsilon(1e-13));
}

TEST_CASE("load vectors") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto poly = inscribed_regular_polygon(disk, 8);
  const auto mesh = generate_fan_refined(poly, 0);
  const auto one = constant_source(1.0, disk);
  for (FhMode mode : {FhMode::Exact, FhMode::Nodal, FhMode::Barycentric}) {
    const auto b = assemble_load(mesh, build_fh(mesh, one, mode));
    double sum = 0;
    for (double v : b) sum += v;
    CHECK(sum == Approx(poly.measure()).epsilon(1e-13));
    CHECK(b[8] == Approx(poly.measure() / 3).epsilon(1e-13));
  }
  CHECK(fh_l2_norm(mesh, build_fh(mesh, one, FhMode::Nodal)) ==
        Approx(std::sqrt(poly.measure())).epsilon(1e-13));
}

TEST_CASE("conjugate gradients on small systems") {
  const CsrMatrix a = CsrMatrix::from_triplets(1, {{0, 0, 4.0}});
  const std::vector<double> b{2.0};
  const CgResult r = solve_cg(a, b);
  CHECK(r.converged);
  CHECK(r.x[0] == Approx(0.5));

  const CsrMatrix e = CsrMatrix::from_triplets(0, {});
  const CgResult z = solve_cg(e, std::vector<double>{});
  CHECK(z.converged);
  CHECK(z.x.empty());

  const CsrMatrix d = CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 0, 1.0}, {1, 1, 3.0}, {0, 1, 1.0}, {1, 0, 1.0}});
  CHECK(d.at(0, 0) == 2.0);
  const CgResult s = solve_cg(d, std::vector<double>{3.0, 4.0});
  CHECK(s.x[0] == Approx(1.0));
  CHECK(s.x[1] == Approx(1.0));
}

TEST_CASE("P1 solve of the sine problem on the unit square") {
  const auto sq = ConvexDomain::unit_square();
  const auto mesh = generate_structured_rectangle(8, 8, {0, 0, 0}, {1, 1, 0});
  const auto f = sinsin_source(sq);
  const FemSolution sol = solve_poisson(mesh, build_fh(mesh, f, FhMode::Exact));
  REQUIRE(sol.converged);
  const double mx = *std::max_element(sol.nodal_values.begin(), sol.nodal_values.end());
  CHECK(std::abs(mx - 1.0) <= 0.05);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (mesh.is_boundary_node(static_cast<int>(i))) CHECK(sol.nodal_values[i] == 0.0);
  }
  const double err = l2_error_interior(mesh, sol.nodal_values, [](const Point& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  });
  CHECK(err < 0.05);
}

TEST_CASE("agreement with a dense cotangent solve") {
  const auto disk = ConvexDomain::disk(1.0);
  for (int m : {6, 11}) {
    const auto mesh = generate_fan_refined(inscribed_regular_polygon(disk, m), 2);
    const FemSolution sol = solve_poisson(mesh, build_fh(mesh, constant_source(1.0, disk), FhMode::Exact));
    const auto ref = oracle::dense_p1_solve_constant_f(mesh, 1.0);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
      CHECK(sol.nodal_values[i] == Approx(ref[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("discrete maximum principle and Poincare") {
  const auto disk = ConvexDomain::disk(1.0);
  const double cp = 2.0 / (std::sqrt(2.0) * kPi);
  for (int m : {8, 12, 20}) {
    const auto mesh = generate_fan_refined(inscribed_regular_polygon(disk, m), 2);
    REQUIRE(*quality(mesh).nonblunt);
    const FemSolution sol = solve_poisson(mesh, build_fh(mesh, constant_source(1.0, disk), FhMode::Nodal));
    for (double v : sol.nodal_values) CHECK(v >= 0.0);
    CHECK(p1_l2_norm(mesh, sol.nodal_values) <= cp * p1_h1_seminorm(mesh, sol.nodal_values));
  }
}

TEST_CASE("P1 norms and interpolation error") {
  const auto mesh = generate_structured_rectangle(4, 4, {0, 0, 0}, {1, 1, 0});
  std::vector<double> lin(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    lin[i] = 2 * mesh.nodes()[i][0] - mesh.nodes()[i][1];
  }
  CHECK(p1_h1_seminorm(mesh, lin) == Approx(std::sqrt(5.0)).epsilon(1e-13));
  // int (2x - y)^2 over the unit square = 4/3 - 1 + 1/3.
  CHECK(p1_l2_norm(mesh, lin) == Approx(std::sqrt(2.0 / 3)).epsilon(1e-13));
  CHECK(l2_error_interior(mesh, lin, [](const Point& x) { return 2 * x[0] - x[1]; }) <= 1e-14);
  CHECK(evaluate_p1(mesh, lin, 0, barycenter(mesh.element(0))) ==
        Approx(2 * barycenter(mesh.element(0))[0] - barycenter(mesh.element(0))[1]));
}

TEST_CASE("perturbation bounds") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto mesh = generate_fan_refined(inscribed_regular_polygon(disk, 10), 1);
  const auto q = quadratic_source({1.0, 0.5, -0.25, 2.0}, disk);
  const double h = quality(mesh).h;
  CHECK(fh_perturbation_bound(mesh, q, FhMode::Exact) == 0.0);
  CHECK(fh_perturbation_bound(mesh, q, FhMode::Barycentric) ==
        Approx(2.0 / 3 * h * std::sqrt(mesh.measure()) * *q.grad_sup_norm));
  CHECK(fh_perturbation_bound(mesh, q, FhMode::Nodal) ==
        Approx(e0_global(2, h) * *q.h2_seminorm));
  for (FhMode mode : {FhMode::Barycentric, FhMode::Nodal}) {
    CHECK(fh_error_l2(mesh, build_fh(mesh, q, mode)) <= fh_perturbation_bound(mesh, q, mode));
  }
  const auto bare = bare_source(1.0);
  CHECK_THROWS_AS(fh_perturbation_bound(mesh, bare, FhMode::Nodal), Error);
  try {
    fh_perturbation_bound(mesh, bare, FhMode::Barycentric);
    FAIL("expected MissingNormMetadata");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingNormMetadata);
  }
}

TEST_CASE("source term helpers") {
  const auto f = bare_source(2.0);
  CHECK(f.checked({0, 0, 0}) == 2.0);
  SourceTerm lying = f;
  lying.sup_norm = 1.0;
  CHECK_THROWS_AS(lying.checked({0, 0, 0}), Error);
  const auto g = f.scaled(3.0);
  CHECK(g.sup_norm == 6.0);
  CHECK(g.evaluate({0, 0, 0}) == 6.0);
  CHECK(parse_fh_mode("nodal") == FhMode::Nodal);
  CHECK(fh_mode_name(FhMode::Barycentric) == "barycentric");
  CHECK_THROWS_AS(parse_fh_mode("linear"), Error);
}
