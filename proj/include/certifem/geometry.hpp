#ifndef CERTIFEM_GEOMETRY_HPP
#define CERTIFEM_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace certifem {

// Coordinates of a point in R^2 or R^3. For 2D data the third component is 0.
using Point = std::array<double, 3>;

inline Point operator+(const Point& a, const Point& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Point operator*(double s, const Point& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

bool is_finite(const Point& p);

// A triangle (dim 2) or tetrahedron (dim 3). Only the first dim+1 vertices
// are meaningful.
struct Simplex {
  int dim = 2;
  std::array<Point, 4> vertices{};

  std::size_t vertex_count() const { return static_cast<std::size_t>(dim) + 1; }

  static Simplex triangle(const Point& a, const Point& b, const Point& c) {
    return Simplex{2, {a, b, c, Point{}}};
  }
  static Simplex tetrahedron(const Point& a, const Point& b, const Point& c,
                             const Point& d) {
    return Simplex{3, {a, b, c, d}};
  }
};

// Oriented measure: positive for counterclockwise triangles and for
// tetrahedra with (b-a, c-a, d-a) right-handed. Performs no validity checks.
double signed_measure(const Simplex& s);

// Area (2D) or volume (3D). Throws DegenerateSimplex when the measure is
// below 1e-14 * h_T^n.
double measure(const Simplex& s);

// Longest edge h_T.
double longest_edge(const Simplex& s);

// All edge lengths sorted in descending order (3 for triangles, 6 for tets).
std::vector<double> edge_lengths(const Simplex& s);

// Circumcenter from the perpendicular-bisector system, solved with partial
// pivoting.
Point circumcenter(const Simplex& s);
double circumradius(const Simplex& s);

// R = ABC / (4S); triangles only.
double circumradius_from_edges(const Simplex& t);

// Radius of the inscribed ball, n * measure / (sum of facet measures).
double inradius(const Simplex& s);

// Interior angles of a triangle in radians; angle k sits at vertex k.
std::array<double, 3> angles(const Simplex& t);

inline constexpr double kNonBluntTolerance = 1e-12;

// True iff every interior angle is at most pi/2 (+1e-12).
bool is_nonblunt(const Simplex& t);

Point barycenter(const Simplex& s);

}  // namespace certifem

#endif  // CERTIFEM_GEOMETRY_HPP
