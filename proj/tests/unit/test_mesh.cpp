#include <cmath>
#include <functional>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "certifem/convex_domain.hpp"
#include "certifem/error.hpp"
#include "certifem/mesh.hpp"
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

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("certifem_mesh_" + name);
}

}  // namespace

TEST_CASE("JSON ingestion derives the boundary") {
  auto one = parse_mesh_json(R"({"dim":2,"nodes":[[0,0],[1,0],[0,1]],"elements":[[0,1,2]]})");
  CHECK(one.boundary_nodes().size() == 3);
  CHECK(one.boundary_facets().size() == 3);
  auto two = parse_mesh_json(
      R"({"dim":2,"nodes":[[0,0],[1,0],[1,1],[0,1]],"elements":[[0,1,2],[0,2,3]]})");
  CHECK(two.boundary_nodes().size() == 4);
  CHECK(two.interior_node_count() == 0);
  CHECK(code_of([] {
          parse_mesh_json(R"({"dim":2,"nodes":[[0,0],[1,0],[0,1]],"elements":[[0,1,3]]})");
        }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_mesh_json(R"({"dim":2,"nodes":[[0,0]],)"); }) == ErrorCode::ParseError);
}

TEST_CASE("mesh validation errors") {
  // Clockwise elements are reoriented.
  auto cw = SimplicialMesh::build(2, {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}}, {{0, 1, 2, -1}});
  CHECK(signed_measure(cw.element(0)) > 0);
  CHECK(code_of([] {
          SimplicialMesh::build(2, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2, -1}});
        }) == ErrorCode::InvertedElement);
  // Three triangles on one edge.
  CHECK(code_of([] {
          SimplicialMesh::build(2, {{0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {0.5, -1, 0}, {0.5, 2, 0}},
                                {{0, 1, 2, -1}, {0, 1, 3, -1}, {0, 1, 4, -1}});
        }) == ErrorCode::NonConforming);
}

TEST_CASE("fan generator") {
  const auto sq = exact_polygon(ConvexDomain::unit_square());
  const auto m0 = generate_fan_refined(sq, 0);
  CHECK(m0.element_count() == 4);
  CHECK(m0.node_count() == 5);
  const auto disk = ConvexDomain::disk(1.0);
  const auto oct = inscribed_regular_polygon(disk, 8);
  CHECK(generate_fan_refined(oct, 2).element_count() == 128);
  const int m = 12;
  const auto fan = generate_fan_refined(inscribed_regular_polygon(disk, m), 0);
  for (std::size_t e = 0; e < fan.element_count(); ++e) {
    const auto el = fan.elements()[e];
    const auto a = angles(fan.element(e));
    for (int k = 0; k < 3; ++k) {
      if (el[k] == m) CHECK(a[k] == Approx(2 * kPi / m));
    }
  }
}

TEST_CASE("quality reports") {
  auto one = parse_mesh_json(R"({"dim":2,"nodes":[[0,0],[1,0],[0,1]],"elements":[[0,1,2]]})");
  const MeshQuality q = quality(one);
  CHECK(q.h == Approx(std::sqrt(2.0)));
  CHECK(q.r_h == Approx(std::sqrt(2.0) / 2));
  CHECK(*q.theta0 == Approx(kPi / 4));
  CHECK(*q.nonblunt);
  const double s3 = std::sqrt(3.0) / 2;
  auto eq = SimplicialMesh::build(2, {{0, 0, 0}, {1, 0, 0}, {0.5, s3, 0}}, {{0, 1, 2, -1}});
  CHECK(quality(eq).sigma == Approx(1.7320508).epsilon(1e-7));
  auto blunt = SimplicialMesh::build(2, {{0, 0, 0}, {2, 0, 0}, {1, 0.2, 0}}, {{0, 1, 2, -1}});
  CHECK_FALSE(*quality(blunt).nonblunt);
  CHECK(*quality(blunt).worst_blunt_element == 0);
}

TEST_CASE("refinement halves h and keeps the angles") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto poly = inscribed_regular_polygon(disk, 9);
  const auto m = generate_fan_refined(poly, 1);
  const auto r = refine_uniform(m);
  const auto q0 = quality(m), q1 = quality(r);
  CHECK(q1.h == Approx(q0.h / 2).epsilon(1e-14));
  CHECK(q1.r_h == Approx(q0.r_h / 2).epsilon(1e-14));
  CHECK(*q1.theta0 == Approx(*q0.theta0).epsilon(1e-12));
  // Euler characteristic of a disk.
  for (const auto* mesh : {&m, &r}) {
    const long chi = static_cast<long>(mesh->node_count()) - static_cast<long>(mesh->edge_count()) +
                     static_cast<long>(mesh->element_count());
    CHECK(chi == 1);
  }
  // The polygon is unchanged: the refined mesh still conforms.
  CHECK_NOTHROW(check_conforms_to(r, poly));
  CHECK(r.measure() == Approx(poly.measure()).epsilon(1e-13));
}

TEST_CASE("structured rectangle") {
  const auto m = generate_structured_rectangle(4, 3, {0, 0, 0}, {2, 1, 0});
  CHECK(m.element_count() == 24);
  CHECK(m.node_count() == 20);
  CHECK(m.interior_node_count() == 6);
  CHECK(m.measure() == Approx(2.0));
  CHECK(*quality(m).nonblunt);
}

TEST_CASE("conformity to the polytope") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto m10 = generate_fan_refined(inscribed_regular_polygon(disk, 10), 1);
  CHECK(code_of([&] { check_conforms_to(m10, inscribed_regular_polygon(disk, 12)); }) ==
        ErrorCode::NonConforming);
  const auto part = SimplicialMesh::build(2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}, {{0, 1, 2, -1}});
  CHECK(code_of([&] { check_conforms_to(part, inscribed_regular_polygon(disk, 4)); }) ==
        ErrorCode::NonConforming);
}

TEST_CASE("save and load round trips") {
  const auto disk = ConvexDomain::disk(1.0);
  const auto m = generate_fan_refined(inscribed_regular_polygon(disk, 8), 1);
  const auto json = temp("rt.json");
  save_mesh(m, json.string(), MeshFormat::Json);
  const auto a = load_mesh(json.string(), guess_mesh_format(json.string()));
  CHECK(quality_to_json(quality(a)) == quality_to_json(quality(m)));
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    for (int c = 0; c < 3; ++c) CHECK(a.nodes()[i][c] == m.nodes()[i][c]);
  }
  CHECK(a.elements() == m.elements());

  const auto base = temp("rt");
  save_mesh(m, base.string(), MeshFormat::NodeEle);
  const auto b = load_mesh(base.string() + ".node", MeshFormat::NodeEle);
  CHECK(b.boundary_nodes() == m.boundary_nodes());
  CHECK(b.elements() == m.elements());
  for (std::size_t i = 0; i < m.node_count(); ++i) {
    for (int c = 0; c < 3; ++c) CHECK(b.nodes()[i][c] == m.nodes()[i][c]);
  }

  CHECK(code_of([&] { save_mesh(m, "/nonexistent/dir/m.json", MeshFormat::Json); }) == ErrorCode::IoError);
  CHECK(code_of([] { load_mesh("/nonexistent/m.json", MeshFormat::Json); }) == ErrorCode::IoError);
  std::filesystem::remove(json);
  std::filesystem::remove(base.string() + ".node");
  std::filesystem::remove(base.string() + ".ele");
}

TEST_CASE("Triangle-style files with comments and markers") {
  const auto base = temp("tri");
  {
    std::ofstream node(base.string() + ".node");
    node << "# unit square\n4 2 0 1\n1 0 0 1\n2 1 0 1\n3 1 1 1\n4 0 1 1\n";
    std::ofstream ele(base.string() + ".ele");
    ele << "2 3 0\n1 1 2 3\n2 1 3 4\n";
  }
  const auto m = load_mesh(base.string(), MeshFormat::NodeEle);
  CHECK(m.element_count() == 2);
  CHECK(m.measure() == Approx(1.0));
  std::filesystem::remove(base.string() + ".node");
  std::filesystem::remove(base.string() + ".ele");
}

TEST_CASE("3D meshes") {
  const std::vector<Point> nodes = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  const auto m = SimplicialMesh::build(3, nodes, {{0, 1, 2, 3}, {1, 2, 3, 4}});
  CHECK(m.boundary_facets().size() == 6);
  CHECK(m.measure() == Approx(1.0 / 6 + 1.0 / 3));
  const auto q = quality(m);
  CHECK_FALSE(q.theta0.has_value());
  CHECK(q.sigma > 0);
  const auto back = parse_mesh_json(mesh_to_json(m));
  CHECK(back.elements() == m.elements());
}
