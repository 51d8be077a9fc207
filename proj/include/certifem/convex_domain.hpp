#ifndef CERTIFEM_CONVEX_DOMAIN_HPP
#define CERTIFEM_CONVEX_DOMAIN_HPP

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "certifem/geometry.hpp"

namespace certifem {

struct Disk {
  Point center{};
  double radius = 1.0;
};

struct Ball {
  Point center{};
  double radius = 1.0;
};

// Counterclockwise, convex.
struct ConvexPolygon {
  std::vector<Point> vertices;
};

enum class DomainKind { Disk, Ball, Polygon };

// The exact convex domain, described by one of the built-in shapes so that
// diameter, measure and support values are available in closed form.
class ConvexDomain {
 public:
  static ConvexDomain disk(double radius, Point center = {});
  static ConvexDomain ball(double radius, Point center = {});
  // Throws InvalidPolygon unless the vertices are convex and counterclockwise.
  static ConvexDomain polygon(std::vector<Point> ccw_vertices);
  static ConvexDomain unit_square();

  DomainKind kind() const;
  int dim() const;
  double diameter() const;
  double measure() const;

  // h(d) = max_{x in closure} d.x for a unit vector d; InvalidDirection if
  // |d| deviates from 1 by more than 1e-12.
  double support(const Point& direction) const;

  bool contains(const Point& x, double tol = 0.0) const;

  // Disk: s is the polar angle. Ball: s is the polar and t the azimuthal
  // angle. Polygon: s in [0,1) is the arclength fraction along the boundary.
  Point boundary_point(double s, double t = 0.0) const;

  // Distance from x to the boundary.
  double boundary_distance(const Point& x) const;

  // Axis-aligned bounding box {lower, upper}.
  std::array<Point, 2> bounding_box() const;

  const Disk* as_disk() const { return std::get_if<Disk>(&shape_); }
  const Ball* as_ball() const { return std::get_if<Ball>(&shape_); }
  const ConvexPolygon* as_polygon() const {
    return std::get_if<ConvexPolygon>(&shape_);
  }

  std::string describe() const;

 private:
  explicit ConvexDomain(std::variant<Disk, Ball, ConvexPolygon> shape)
      : shape_(std::move(shape)) {}

  std::variant<Disk, Ball, ConvexPolygon> shape_;
};

// A boundary facet of an inscribed polytope: an edge (2 vertices) in 2D or a
// triangle (3 vertices) in 3D.
struct PolyFacet {
  std::array<int, 3> vertices{};
  int vertex_count = 2;
  Point normal{};      // outward unit normal
  Point barycenter{};
};

// Convex polytope Omega_delta whose vertices lie on the boundary of the
// exact domain.
class PolyApprox {
 public:
  // 2D polygon from counterclockwise vertices; InvalidPolygon if not convex.
  static PolyApprox polygon(std::vector<Point> ccw_vertices);
  // 3D polytope from triangular facets with outward orientation.
  static PolyApprox polytope(std::vector<Point> vertices,
                             const std::vector<std::array<int, 3>>& facets);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<PolyFacet>& facets() const { return facets_; }

  double measure() const;
  double diameter() const;
  // Area centroid (2D) or vertex average (3D).
  Point centroid() const;

  // Signed distance p_F(x) = n_F.(x - g_F) to facet F.
  double facet_distance(std::size_t facet, const Point& x) const;
  // max_F p_F(x) <= tol.
  bool contains(const Point& x, double tol = 0.0) const;

 private:
  int dim_ = 2;
  std::vector<Point> vertices_;
  std::vector<PolyFacet> facets_;
};

struct GapResult {
  double delta = 0.0;
  std::vector<double> per_facet;
};

// delta_F = h_Omega(n_F) - n_F.g_F and delta = max_F delta_F.
// Throws NotInscribed if any delta_F < -1e-10.
GapResult gap_delta(const ConvexDomain& domain, const PolyApprox& poly);

// Checks that every polytope vertex lies on the boundary of the domain
// (1e-10, relative to the domain diameter). Throws NotInscribed.
void validate_inscribed(const ConvexDomain& domain, const PolyApprox& poly);

// Regular m-gon with vertices at angles 2*pi*k/m on the circle.
PolyApprox inscribed_regular_polygon(const ConvexDomain& disk, int m);

// The polygon domain's own vertex list as an exact (delta = 0) polytope.
PolyApprox exact_polygon(const ConvexDomain& polygon_domain);

// {"dim":2,"vertices":[[x,y],...]} or
// {"dim":3,"vertices":[[x,y,z],...],"facets":[[i,j,k],...]}.
PolyApprox load_polytope_json(const std::string& path);
PolyApprox parse_polytope_json(const std::string& text);
std::string polytope_to_json(const PolyApprox& poly);

}  // namespace certifem

#endif  // CERTIFEM_CONVEX_DOMAIN_HPP
