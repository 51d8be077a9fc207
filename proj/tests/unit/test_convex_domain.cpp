#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "certifem/convex_domain.hpp"
#include "certifem/error.hpp"
#include "doctest.h"

using namespace certifem;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

PolyApprox octahedron(double r = 1.0) {
  std::vector<Point> v = {{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}};
  std::vector<std::array<int, 3>> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                       {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return PolyApprox::polytope(v, f);
}

}  // namespace

TEST_CASE("support function examples") {
  const auto disk = ConvexDomain::disk(1.0);
  CHECK(disk.support({1, 0, 0}) == Approx(1.0));
  CHECK(disk.support({0.6, -0.8, 0}) == Approx(1.0));
  CHECK(ConvexDomain::disk(2.0, {1, 0, 0}).support({1, 0, 0}) == Approx(3.0));
  const double s = 1 / std::sqrt(2.0);
  CHECK(ConvexDomain::unit_square().support({s, s, 0}) == Approx(std::sqrt(2.0)));
  CHECK(code_of([&] { disk.support({1, 1, 0}); }) == ErrorCode::InvalidDirection);
}

TEST_CASE("support is sublinear and gives the diameter") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  const ConvexDomain doms[] = {ConvexDomain::disk(1.5, {0.2, -0.1, 0}), ConvexDomain::unit_square()};
  for (const auto& d : doms) {
    for (int i = 0; i < 500; ++i) {
      const double a = u(rng), b = u(rng);
      const Point d1{std::cos(a), std::sin(a), 0}, d2{std::cos(b), std::sin(b), 0};
      const Point sum = d1 + d2;
      const double n = norm(sum);
      if (n < 1e-6) continue;
      CHECK(n * d.support((1 / n) * sum) <= d.support(d1) + d.support(d2) + 1e-10);
    }
  }
  const auto disk = ConvexDomain::disk(1.5);
  CHECK(disk.diameter() == Approx(disk.support({1, 0, 0}) + disk.support({-1, 0, 0})));
  CHECK(ConvexDomain::unit_square().diameter() == Approx(std::sqrt(2.0)));
  CHECK(ConvexDomain::ball(2.0).measure() == Approx(4.0 / 3.0 * kPi * 8));
}

TEST_CASE("polygon validation") {
  CHECK(code_of([] { ConvexDomain::polygon({{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}); }) ==
        ErrorCode::InvalidPolygon);  // clockwise
  CHECK(code_of([] { ConvexDomain::polygon({{0, 0, 0}, {2, 0, 0}, {1, 0.2, 0}, {2, 2, 0}, {0, 2, 0}}); }) ==
        ErrorCode::InvalidPolygon);  // reflex
  CHECK(code_of([] { PolyApprox::polygon({{0, 0, 0}, {1, 0, 0}}); }) == ErrorCode::InvalidPolygon);
}

TEST_CASE("gap of inscribed regular polygons") {
  const auto disk = ConvexDomain::disk(1.0);
  CHECK(gap_delta(disk, inscribed_regular_polygon(disk, 50)).delta ==
        Approx(2 * std::pow(std::sin(kPi / 100), 2)).epsilon(1e-12));
  CHECK(gap_delta(disk, inscribed_regular_polygon(disk, 50)).delta == Approx(1.97327e-3).epsilon(1e-5));
  CHECK(gap_delta(disk, inscribed_regular_polygon(disk, 4)).delta == Approx(1 - std::cos(kPi / 4)));
  CHECK(gap_delta(disk, inscribed_regular_polygon(disk, 10)).delta == Approx(4.89435e-2).epsilon(1e-5));
  const auto sq = ConvexDomain::unit_square();
  CHECK(gap_delta(sq, exact_polygon(sq)).delta == 0.0);
  CHECK(code_of([&] { inscribed_regular_polygon(disk, 2); }) == ErrorCode::InvalidPolygon);
}

TEST_CASE("regular polygon geometry") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto p4 = inscribed_regular_polygon(disk, 4);
  REQUIRE(p4.vertices().size() == 4);
  CHECK(p4.vertices()[0][0] == Approx(1.0));
  CHECK(p4.vertices()[1][1] == Approx(1.0));
  CHECK(p4.vertices()[2][0] == Approx(-1.0));
  CHECK(p4.vertices()[3][1] == Approx(-1.0));
  const auto p3 = inscribed_regular_polygon(disk, 3);
  for (const auto& f : p3.facets()) CHECK(dot(f.normal, f.barycenter) == Approx(0.5));

  const auto p = inscribed_regular_polygon(ConvexDomain::disk(2.0, {0.5, 0.25, 0}), 17);
  for (const auto& f : p.facets()) {
    CHECK(norm(f.normal) == Approx(1.0).epsilon(1e-12));
    for (const auto& v : p.vertices()) CHECK(dot(f.normal, v - f.barycenter) <= 1e-12);
  }
}

TEST_CASE("gap scaling and rigid motion") {
  const auto disk = ConvexDomain::disk(1.0);
  const int m = 100;
  const double l = 2 * std::sin(kPi / m);
  const double ratio = gap_delta(disk, inscribed_regular_polygon(disk, m)).delta / (l * l);
  CHECK(std::abs(ratio - 0.125) <= 0.01 * 0.125);

  const Point shift{0.3, -1.7, 0};
  const auto moved = ConvexDomain::disk(1.0, shift);
  std::vector<Point> v;
  const auto p9 = inscribed_regular_polygon(disk, 9);
  for (const auto& p : p9.vertices()) {
    const double c = std::cos(0.4), s = std::sin(0.4);
    v.push_back(Point{c * p[0] - s * p[1], s * p[0] + c * p[1], 0} + shift);
  }
  CHECK(gap_delta(moved, PolyApprox::polygon(v)).delta ==
        Approx(gap_delta(disk, inscribed_regular_polygon(disk, 9)).delta).epsilon(1e-10));
}

TEST_CASE("inscription is validated") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto inner = PolyApprox::polygon({{0.5, 0, 0}, {0, 0.5, 0}, {-0.5, 0, 0}, {0, -0.5, 0}});
  CHECK(code_of([&] { validate_inscribed(disk, inner); }) == ErrorCode::NotInscribed);
  const auto outer = PolyApprox::polygon({{2, 0, 0}, {0, 2, 0}, {-2, 0, 0}, {0, -2, 0}});
  CHECK(code_of([&] { gap_delta(disk, outer); }) == ErrorCode::NotInscribed);
}

TEST_CASE("3D polytope in the ball") {
  const auto ball = ConvexDomain::ball(1.0);
  const auto oct = octahedron();
  validate_inscribed(ball, oct);
  const auto g = gap_delta(ball, oct);
  CHECK(g.delta == Approx(1 - 1 / std::sqrt(3.0)));
  CHECK(oct.measure() == Approx(4.0 / 3.0));
  CHECK(g.delta <= ball.diameter());

  const auto back = parse_polytope_json(polytope_to_json(oct));
  CHECK(back.facets().size() == 8);
  CHECK(back.measure() == Approx(oct.measure()));
  // Inward-facing facets are rejected.
  std::vector<std::array<int, 3>> flipped = {{0, 4, 2}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  CHECK(code_of([&] { PolyApprox::polytope(oct.vertices(), flipped); }) == ErrorCode::InvalidPolygon);
}

TEST_CASE("polytope JSON files") {
  const auto path = std::filesystem::temp_directory_path() / "certifem_poly_test.json";
  {
    std::ofstream f(path);
    f << R"({"dim":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]})";
  }
  const auto p = load_polytope_json(path.string());
  CHECK(p.measure() == Approx(1.0));
  {
    std::ofstream f(path);
    f << R"({"dim":2,"vertices":[[0,0],[1,0]],)";
  }
  CHECK(code_of([&] { load_polytope_json(path.string()); }) == ErrorCode::ParseError);
  std::filesystem::remove(path);
  CHECK(code_of([] { load_polytope_json("/nonexistent/poly.json"); }) == ErrorCode::IoError);
}
