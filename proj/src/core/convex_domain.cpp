#include "certifem/convex_domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "certifem/error.hpp"

namespace certifem {

namespace {

constexpr double kPi = std::numbers::pi;

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

double max_pairwise_distance(const std::vector<Point>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      d = std::max(d, distance(pts[i], pts[j]));
    }
  }
  return d;
}

double shoelace(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    a += cross2(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * a;
}

// Convex, counterclockwise, winding once.
void check_convex_ccw(const std::vector<Point>& v) {
  if (v.size() < 3) {
    throw Error(ErrorCode::InvalidPolygon, "a polygon needs at least 3 vertices");
  }
  for (const auto& p : v) {
    if (!is_finite(p) || p[2] != 0.0) {
      throw Error(ErrorCode::InvalidPolygon, "polygon vertices must be finite 2D points");
    }
  }
  const double scale = max_pairwise_distance(v);
  if (scale <= 0.0) throw Error(ErrorCode::InvalidPolygon, "all vertices coincide");
  const double area = shoelace(v);
  if (area <= 1e-14 * scale * scale) {
    throw Error(ErrorCode::InvalidPolygon,
                "polygon must be counterclockwise with positive area");
  }
  double turning = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point e0 = v[(i + 1) % n] - v[i];
    const Point e1 = v[(i + 2) % n] - v[(i + 1) % n];
    if (norm(e0) <= 1e-14 * scale) {
      throw Error(ErrorCode::InvalidPolygon, "repeated polygon vertex");
    }
    const double c = cross2(e0, e1);
    if (c < -1e-12 * scale * scale) {
      std::ostringstream msg;
      msg << "reflex turn at vertex " << (i + 1) % n;
      throw Error(ErrorCode::InvalidPolygon, msg.str());
    }
    turning += std::atan2(c, dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * kPi) > 1e-9) {
    throw Error(ErrorCode::InvalidPolygon, "polygon boundary winds more than once");
  }
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(x - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(x, a + t * ab);
}

Point read_point(const nlohmann::json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw Error(ErrorCode::ParseError, "vertex must have exactly dim coordinates");
  }
  Point p{};
  for (int c = 0; c < dim; ++c) {
    if (!j[c].is_number()) throw Error(ErrorCode::ParseError, "non-numeric coordinate");
    p[c] = j[c].get<double>();
  }
  if (!is_finite(p)) throw Error(ErrorCode::ParseError, "non-finite coordinate");
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexDomain

ConvexDomain ConvexDomain::disk(double radius, Point center) {
  if (!(radius > 0.0) || !std::isfinite(radius) || center[2] != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "disk needs a positive radius and 2D center");
  }
  return ConvexDomain(Disk{center, radius});
}

ConvexDomain ConvexDomain::ball(double radius, Point center) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidArgument, "ball needs a positive radius");
  }
  return ConvexDomain(Ball{center, radius});
}

ConvexDomain ConvexDomain::polygon(std::vector<Point> ccw_vertices) {
  check_convex_ccw(ccw_vertices);
  return ConvexDomain(ConvexPolygon{std::move(ccw_vertices)});
}

ConvexDomain ConvexDomain::unit_square() {
  return polygon({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
}

DomainKind ConvexDomain::kind() const {
  if (as_disk()) return DomainKind::Disk;
  if (as_ball()) return DomainKind::Ball;
  return DomainKind::Polygon;
}

int ConvexDomain::dim() const { return kind() == DomainKind::Ball ? 3 : 2; }

double ConvexDomain::diameter() const {
  if (const auto* d = as_disk()) return 2.0 * d->radius;
  if (const auto* b = as_ball()) return 2.0 * b->radius;
  return max_pairwise_distance(as_polygon()->vertices);
}

double ConvexDomain::measure() const {
  if (const auto* d = as_disk()) return kPi * d->radius * d->radius;
  if (const auto* b = as_ball()) return 4.0 / 3.0 * kPi * std::pow(b->radius, 3);
  return shoelace(as_polygon()->vertices);
}

double ConvexDomain::support(const Point& direction) const {
  if (std::abs(norm(direction) - 1.0) > 1e-12 || (dim() == 2 && direction[2] != 0.0)) {
    throw Error(ErrorCode::InvalidDirection, "support direction must be a unit vector");
  }
  if (const auto* d = as_disk()) return d->radius + dot(direction, d->center);
  if (const auto* b = as_ball()) return b->radius + dot(direction, b->center);
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& v : as_polygon()->vertices) h = std::max(h, dot(direction, v));
  return h;
}

bool ConvexDomain::contains(const Point& x, double tol) const {
  if (const auto* d = as_disk()) return distance(x, d->center) <= d->radius + tol;
  if (const auto* b = as_ball()) return distance(x, b->center) <= b->radius + tol;
  const auto& v = as_polygon()->vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point e = v[(i + 1) % v.size()] - v[i];
    // Signed distance to the edge line, positive outside.
    if (-cross2(e, x - v[i]) / norm(e) > tol) return false;
  }
  return true;
}

Point ConvexDomain::boundary_point(double s, double t) const {
  if (const auto* d = as_disk()) {
    return d->center + d->radius * Point{std::cos(s), std::sin(s), 0.0};
  }
  if (const auto* b = as_ball()) {
    return b->center +
           b->radius * Point{std::sin(s) * std::cos(t), std::sin(s) * std::sin(t), std::cos(s)};
  }
  const auto& v = as_polygon()->vertices;
  double perimeter = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) perimeter += distance(v[i], v[(i + 1) % v.size()]);
  double target = (s - std::floor(s)) * perimeter;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double len = distance(a, b);
    if (target <= len) return a + (target / len) * (b - a);
    target -= len;
  }
  return v.front();
}

double ConvexDomain::boundary_distance(const Point& x) const {
  if (const auto* d = as_disk()) return std::abs(distance(x, d->center) - d->radius);
  if (const auto* b = as_ball()) return std::abs(distance(x, b->center) - b->radius);
  const auto& v = as_polygon()->vertices;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    best = std::min(best, segment_distance(x, v[i], v[(i + 1) % v.size()]));
  }
  return best;
}

std::array<Point, 2> ConvexDomain::bounding_box() const {
  std::array<Point, 2> box{};
  for (int c = 0; c < 3; ++c) {
    if (c >= dim()) continue;
    Point e{};
    e[c] = 1.0;
    box[1][c] = support(e);
    e[c] = -1.0;
    box[0][c] = -support(e);
  }
  return box;
}

std::string ConvexDomain::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (const auto* d = as_disk()) {
    out << "disk(R=" << d->radius << ", c=(" << d->center[0] << "," << d->center[1] << "))";
  } else if (const auto* b = as_ball()) {
    out << "ball(R=" << b->radius << ")";
  } else {
    out << "polygon(" << as_polygon()->vertices.size() << " vertices)";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// PolyApprox

PolyApprox PolyApprox::polygon(std::vector<Point> ccw_vertices) {
  check_convex_ccw(ccw_vertices);
  PolyApprox p;
  p.dim_ = 2;
  p.vertices_ = std::move(ccw_vertices);
  const int n = static_cast<int>(p.vertices_.size());
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    const Point e = p.vertices_[j] - p.vertices_[i];
    const double len = norm(e);
    PolyFacet f;
    f.vertices = {i, j, -1};
    f.vertex_count = 2;
    f.normal = {e[1] / len, -e[0] / len, 0.0};
    f.barycenter = 0.5 * (p.vertices_[i] + p.vertices_[j]);
    p.facets_.push_back(f);
  }
  return p;
}

PolyApprox PolyApprox::polytope(std::vector<Point> vertices,
                                const std::vector<std::array<int, 3>>& facets) {
  if (vertices.size() < 4 || facets.size() < 4) {
    throw Error(ErrorCode::InvalidPolygon, "a polytope needs at least 4 vertices and facets");
  }
  for (const auto& v : vertices) {
    if (!is_finite(v)) throw Error(ErrorCode::InvalidPolygon, "non-finite vertex");
  }
  PolyApprox p;
  p.dim_ = 3;
  p.vertices_ = std::move(vertices);
  const double scale = p.diameter();
  const Point inner = p.centroid();
  const int nv = static_cast<int>(p.vertices_.size());
  for (const auto& tri : facets) {
    for (int idx : tri) {
      if (idx < 0 || idx >= nv) throw Error(ErrorCode::InvalidPolygon, "facet index out of range");
    }
    const Point& a = p.vertices_[tri[0]];
    const Point& b = p.vertices_[tri[1]];
    const Point& c = p.vertices_[tri[2]];
    const Point n = cross(b - a, c - a);
    const double len = norm(n);
    if (len <= 1e-14 * scale * scale) throw Error(ErrorCode::InvalidPolygon, "degenerate facet");
    PolyFacet f;
    f.vertices = tri;
    f.vertex_count = 3;
    f.normal = (1.0 / len) * n;
    f.barycenter = (1.0 / 3.0) * (a + b + c);
    if (dot(f.normal, inner - f.barycenter) >= 0.0) {
      throw Error(ErrorCode::InvalidPolygon, "facet is not outward oriented");
    }
    p.facets_.push_back(f);
  }
  for (std::size_t fi = 0; fi < p.facets_.size(); ++fi) {
    for (const auto& v : p.vertices_) {
      if (p.facet_distance(fi, v) > 1e-12 * std::max(1.0, scale)) {
        throw Error(ErrorCode::InvalidPolygon, "polytope is not convex");
      }
    }
  }
  return p;
}

double PolyApprox::measure() const {
  if (dim_ == 2) return shoelace(vertices_);
  double vol = 0.0;
  for (const auto& f : facets_) {
    const Point& a = vertices_[f.vertices[0]];
    const Point& b = vertices_[f.vertices[1]];
    const Point& c = vertices_[f.vertices[2]];
    vol += dot(a, cross(b, c)) / 6.0;
  }
  return vol;
}

double PolyApprox::diameter() const { return max_pairwise_distance(vertices_); }

Point PolyApprox::centroid() const {
  if (dim_ == 3) {
    Point g{};
    for (const auto& v : vertices_) g = g + v;
    return (1.0 / static_cast<double>(vertices_.size())) * g;
  }
  // Area centroid relative to the first vertex for conditioning.
  const Point& o = vertices_.front();
  Point acc{};
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
    const Point a = vertices_[i] - o;
    const Point b = vertices_[i + 1] - o;
    const double w = 0.5 * cross2(a, b);
    acc = acc + (w / 3.0) * (a + b);
    area += w;
  }
  return o + (1.0 / area) * acc;
}

double PolyApprox::facet_distance(std::size_t facet, const Point& x) const {
  const auto& f = facets_.at(facet);
  return dot(f.normal, x - f.barycenter);
}

bool PolyApprox::contains(const Point& x, double tol) const {
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (facet_distance(i, x) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

GapResult gap_delta(const ConvexDomain& domain, const PolyApprox& poly) {
  if (domain.dim() != poly.dim()) {
    throw Error(ErrorCode::InvalidArgument, "domain and polytope dimensions differ");
  }
  GapResult out;
  out.per_facet.reserve(poly.facets().size());
  for (std::size_t i = 0; i < poly.facets().size(); ++i) {
    const auto& f = poly.facets()[i];
    const double d = domain.support(f.normal) - dot(f.normal, f.barycenter);
    if (d < -1e-10) {
      std::ostringstream msg;
      msg << "facet " << i << " lies outside the domain (delta_F = " << d << ")";
      throw Error(ErrorCode::NotInscribed, msg.str());
    }
    out.per_facet.push_back(std::max(d, 0.0));
    out.delta = std::max(out.delta, out.per_facet.back());
  }
  return out;
}

void validate_inscribed(const ConvexDomain& domain, const PolyApprox& poly) {
  if (domain.dim() != poly.dim()) {
    throw Error(ErrorCode::NotInscribed, "domain and polytope dimensions differ");
  }
  const double tol = 1e-10 * std::max(1.0, domain.diameter());
  for (std::size_t i = 0; i < poly.vertices().size(); ++i) {
    const double r = domain.boundary_distance(poly.vertices()[i]);
    if (r > tol || !domain.contains(poly.vertices()[i], tol)) {
      std::ostringstream msg;
      msg << "vertex " << i << " is " << r << " away from the domain boundary";
      throw Error(ErrorCode::NotInscribed, msg.str());
    }
  }
}

PolyApprox inscribed_regular_polygon(const ConvexDomain& disk, int m) {
  const auto* d = disk.as_disk();
  if (d == nullptr) throw Error(ErrorCode::InvalidArgument, "regular polygons need a disk domain");
  if (m < 3) throw Error(ErrorCode::InvalidPolygon, "a regular polygon needs m >= 3");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * kPi * k / m;
    v.push_back(d->center + d->radius * Point{std::cos(t), std::sin(t), 0.0});
  }
  return PolyApprox::polygon(std::move(v));
}

PolyApprox exact_polygon(const ConvexDomain& polygon_domain) {
  const auto* p = polygon_domain.as_polygon();
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, "domain is not a polygon");
  return PolyApprox::polygon(p->vertices);
}

PolyApprox parse_polytope_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("vertices")) {
    throw Error(ErrorCode::ParseError, "polytope JSON needs \"dim\" and \"vertices\"");
  }
  const int dim = j["dim"].get<int>();
  if (dim != 2 && dim != 3) throw Error(ErrorCode::ParseError, "dim must be 2 or 3");
  std::vector<Point> vertices;
  for (const auto& v : j["vertices"]) vertices.push_back(read_point(v, dim));
  if (dim == 2) return PolyApprox::polygon(std::move(vertices));
  if (!j.contains("facets")) throw Error(ErrorCode::ParseError, "3D polytope needs \"facets\"");
  std::vector<std::array<int, 3>> facets;
  for (const auto& f : j["facets"]) {
    if (!f.is_array() || f.size() != 3) throw Error(ErrorCode::ParseError, "facets are index triples");
    facets.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  }
  return PolyApprox::polytope(std::move(vertices), facets);
}

PolyApprox load_polytope_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_polytope_json(buf.str());
}

std::string polytope_to_json(const PolyApprox& poly) {
  nlohmann::json j;
  j["dim"] = poly.dim();
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : poly.vertices()) {
    if (poly.dim() == 2) {
      j["vertices"].push_back({v[0], v[1]});
    } else {
      j["vertices"].push_back({v[0], v[1], v[2]});
    }
  }
  if (poly.dim() == 3) {
    j["facets"] = nlohmann::json::array();
    for (const auto& f : poly.facets()) {
      j["facets"].push_back({f.vertices[0], f.vertices[1], f.vertices[2]});
    }
  }
  return j.dump();
}

}  // namespace certifem
