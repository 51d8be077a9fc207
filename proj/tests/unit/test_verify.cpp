#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "certifem/error.hpp"
#include "certifem/verify.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace certifem;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

PolyApprox octahedron() {
  std::vector<Point> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::vector<std::array<int, 3>> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                       {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return PolyApprox::polytope(v, f);
}

// Octahedron split into 8 tetrahedra around the origin.
SimplicialMesh octahedron_mesh() {
  std::vector<Point> v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}, {0, 0, 0}};
  std::vector<Element> e = {{0, 2, 4, 6}, {2, 1, 4, 6}, {1, 3, 4, 6}, {3, 0, 4, 6},
                            {2, 0, 5, 6}, {1, 2, 5, 6}, {3, 1, 5, 6}, {0, 3, 5, 6}};
  return SimplicialMesh::build(3, v, e);
}

}  // namespace

TEST_CASE("registry of exact solutions") {
  CHECK(registry().size() == 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const auto& e : registry()) {
    // -Laplace u by central differences.
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
      Point x{0.5 + 0.3 * u(rng), 0.5 + 0.3 * u(rng), e.domain.dim() == 3 ? 0.3 * u(rng) : 0.0};
      if (e.name != "square2d") x = 0.5 * x;
      double lap = 0;
      for (int c = 0; c < e.domain.dim(); ++c) {
        Point p = x, q = x;
        p[c] += h;
        q[c] -= h;
        lap += (e.u(p) - 2 * e.u(x) + e.u(q)) / (h * h);
      }
      CHECK(-lap == Approx(e.neg_laplacian(x)).epsilon(1e-5));
      CHECK(e.f.evaluate(x) == Approx(e.neg_laplacian(x)).epsilon(1e-12));
    }
    // Homogeneous boundary data.
    for (int i = 0; i < 16; ++i) {
      CHECK(std::abs(e.u(e.domain.boundary_point(i / 16.0, 0.3))) <= 1e-14);
    }
  }
  CHECK(find_exact("disk2d").u_l2_norm == Approx(std::sqrt(kPi / 48)));
  CHECK(find_exact("ball3d").u_l2_norm == Approx(std::sqrt(8 * kPi / 945)));
  CHECK_THROWS_AS(find_exact("annulus"), Error);
}

TEST_CASE("gap integral against the tensor oracle") {
  for (int m : {4, 10, 50}) {
    CHECK(std::abs(gap_error_term(m) - oracle::gap_oracle(m)) <= 1e-10);
    CHECK(std::abs(gap_error_term(m) - gap_error_term_half(m)) <= 1e-14);
  }
  double prev = 1e300;
  for (int m = 3; m <= 60; ++m) {
    const double g = gap_error_term(m);
    CHECK(g < prev);
    prev = g;
  }
  const auto& disk2d = find_exact("disk2d");
  CHECK(gap_error_squared(disk2d, inscribed_regular_polygon(disk2d.domain, 10)) ==
        Approx(gap_error_term(10)).epsilon(1e-12));
  CHECK_THROWS_AS(gap_error_term(2), Error);
}

TEST_CASE("error with no interior nodes is the full norm") {
  const auto& disk2d = find_exact("disk2d");
  const auto poly = inscribed_regular_polygon(disk2d.domain, 6);
  // The fan of a 6-gon has one interior node; give it value 0 by hand.
  const auto mesh = generate_fan_refined(poly, 0);
  FemSolution zero;
  zero.nodal_values.assign(mesh.node_count(), 0.0);
  CHECK(std::abs(actual_l2_error(disk2d, poly, mesh, zero) - std::sqrt(kPi / 48)) <= 1e-6);
}

TEST_CASE("barrier check on the disk") {
  const auto& disk2d = find_exact("disk2d");
  const auto r10 = barrier_check(disk2d, inscribed_regular_polygon(disk2d.domain, 10), 0, 10000);
  CHECK(r10.passed);
  CHECK(r10.bound == Approx(4.89435e-2).epsilon(1e-5));
  CHECK(std::abs(r10.max_abs_u - std::pow(std::sin(kPi / 10), 2) / 4) <= 1e-6);
  CHECK(r10.samples == 10000);
  const auto r50 = barrier_check(disk2d, inscribed_regular_polygon(disk2d.domain, 50), 7, 10000);
  CHECK(r50.passed);
  CHECK(r50.bound == Approx(1.97327e-3).epsilon(1e-5));
  CHECK(std::abs(r50.max_abs_u - 9.8597e-4) <= 1e-6);
  // Seeded runs repeat.
  const auto again = barrier_check(disk2d, inscribed_regular_polygon(disk2d.domain, 50), 7, 10000);
  CHECK(again.max_abs_u == r50.max_abs_u);
}

TEST_CASE("ball3d on an octahedron") {
  const auto& ball3d = find_exact("ball3d");
  const auto poly = octahedron();
  const auto mesh = octahedron_mesh();
  const double gap = gap_error_squared(ball3d, poly);
  CHECK(gap > 0);
  CHECK(gap < ball3d.u_l2_norm * ball3d.u_l2_norm);
  const auto run = verify_on_mesh(ball3d, poly, mesh, FhMode::Exact, AhStrategy::Elementwise);
  CHECK(run.actual <= run.certified.total);
  CHECK(run.poincare_ok);
  const auto rep = barrier_check(ball3d, poly, 3, 2000);
  CHECK(rep.passed);
  CHECK_THROWS_AS(verify_convergence("ball3d"), Error);
}

TEST_CASE("refinement rule") {
  CHECK(default_refine_rule(6) == 0);
  CHECK(default_refine_rule(10) == 1);
  CHECK(default_refine_rule(20) == 2);
  CHECK(default_refine_rule(50) == 4);
}

TEST_CASE("disk pipeline rows") {
  const auto rows = run_table1({10, 20});
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.actual <= r.predicted);
    CHECK(r.actual <= r.certified.total);
    CHECK(r.certified.total <= r.predicted);
    CHECK(r.poincare_ok);
    CHECK(r.reference_actual.has_value());
  }
  CHECK(rows[1].actual < rows[0].actual);
  const auto csv = table1_csv(rows);
  CHECK(csv.rfind("m,h,A_m,actual,predicted,ratio\n", 0) == 0);
  const auto j = nlohmann::json::parse(table1_json(rows));
  CHECK(j.size() == 2);
  CHECK(j[0]["m"] == 10);
  CHECK(j[0]["certified"]["terms"]["source"] == 0.0);
}

TEST_CASE("fixture meshes replace the generated ones") {
  const auto dir = std::filesystem::temp_directory_path() / "certifem_fixture";
  std::filesystem::create_directories(dir);
  const auto& disk2d = find_exact("disk2d");
  const auto mesh = generate_fan_refined(inscribed_regular_polygon(disk2d.domain, 10), 2);
  save_mesh(mesh, (dir / "m10").string(), MeshFormat::NodeEle);
  const auto rows = run_table1({10, 20}, default_refine_rule, dir.string());
  CHECK(rows[0].refine == -1);
  CHECK(rows[0].mesh_source.find("m10") != std::string::npos);
  CHECK(rows[0].certified.metadata.elements == mesh.element_count());
  CHECK(rows[1].refine == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("convergence on the square") {
  const auto rep = verify_convergence("square2d", 3);
  CHECK(rep.bounds_hold);
  CHECK(rep.slope >= 1.8);
  CHECK(rep.slope <= 2.2);
  for (const auto& l : rep.levels) CHECK(l.closed_form.has_value());
  CHECK(nlohmann::json::parse(convergence_json(rep))["levels"].size() == 3);
}
