#include "certifem/geometry.hpp"

#include <algorithm>
#include <functional>
#include <numbers>
#include <sstream>

#include "certifem/error.hpp"

namespace certifem {

namespace {

constexpr double kDegeneracyRatio = 1e-14;

Point edge(const Simplex& s, std::size_t i, std::size_t j) {
  return s.vertices[j] - s.vertices[i];
}

// Solves the n x n system A y = b in place (n <= 3), partial pivoting.
Point solve_small(std::array<std::array<double, 3>, 3> a, Point b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) {
      throw Error(ErrorCode::DegenerateSimplex, "singular circumcenter system");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  Point y{};
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * y[c];
    y[r] = acc / a[r][r];
  }
  return y;
}

double triangle_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

}  // namespace

bool is_finite(const Point& p) {
  return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
}

double signed_measure(const Simplex& s) {
  if (s.dim == 2) {
    const Point e1 = edge(s, 0, 1);
    const Point e2 = edge(s, 0, 2);
    return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
  }
  return dot(edge(s, 0, 1), cross(edge(s, 0, 2), edge(s, 0, 3))) / 6.0;
}

double longest_edge(const Simplex& s) {
  double h = 0.0;
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    for (std::size_t j = i + 1; j < s.vertex_count(); ++j) {
      h = std::max(h, distance(s.vertices[i], s.vertices[j]));
    }
  }
  return h;
}

double measure(const Simplex& s) {
  if (s.dim != 2 && s.dim != 3) {
    throw Error(ErrorCode::InvalidArgument, "simplex dimension must be 2 or 3");
  }
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    if (!is_finite(s.vertices[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
    }
  }
  const double m = std::abs(signed_measure(s));
  const double h = longest_edge(s);
  if (!(m >= kDegeneracyRatio * std::pow(h, s.dim)) || m == 0.0) {
    std::ostringstream msg;
    msg << "measure " << m << " below " << kDegeneracyRatio << " * h_T^" << s.dim;
    throw Error(ErrorCode::DegenerateSimplex, msg.str());
  }
  return m;
}

std::vector<double> edge_lengths(const Simplex& s) {
  std::vector<double> out;
  out.reserve(6);
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    for (std::size_t j = i + 1; j < s.vertex_count(); ++j) {
      out.push_back(distance(s.vertices[i], s.vertices[j]));
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Point circumcenter(const Simplex& s) {
  measure(s);
  std::array<std::array<double, 3>, 3> a{};
  Point b{};
  for (int i = 0; i < s.dim; ++i) {
    const Point e = edge(s, 0, static_cast<std::size_t>(i) + 1);
    for (int c = 0; c < s.dim; ++c) a[i][c] = 2.0 * e[c];
    b[i] = dot(e, e);
  }
  return s.vertices[0] + solve_small(a, b, s.dim);
}

double circumradius(const Simplex& s) {
  return distance(circumcenter(s), s.vertices[0]);
}

double circumradius_from_edges(const Simplex& t) {
  const double area = measure(t);
  const double a = distance(t.vertices[1], t.vertices[2]);
  const double b = distance(t.vertices[0], t.vertices[2]);
  const double c = distance(t.vertices[0], t.vertices[1]);
  return a * b * c / (4.0 * area);
}

double inradius(const Simplex& s) {
  const double m = measure(s);
  double boundary = 0.0;
  if (s.dim == 2) {
    for (const double e : edge_lengths(s)) boundary += e;
    return 2.0 * m / boundary;
  }
  const auto& v = s.vertices;
  boundary = triangle_area(v[1], v[2], v[3]) + triangle_area(v[0], v[2], v[3]) +
             triangle_area(v[0], v[1], v[3]) + triangle_area(v[0], v[1], v[2]);
  return 3.0 * m / boundary;
}

std::array<double, 3> angles(const Simplex& t) {
  if (t.dim != 2) {
    throw Error(ErrorCode::InvalidArgument, "angles() requires a triangle");
  }
  measure(t);
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const Point u = t.vertices[(k + 1) % 3] - t.vertices[k];
    const Point w = t.vertices[(k + 2) % 3] - t.vertices[k];
    out[k] = std::atan2(norm(cross(u, w)), dot(u, w));
  }
  return out;
}

bool is_nonblunt(const Simplex& t) {
  const auto a = angles(t);
  return std::all_of(a.begin(), a.end(), [](double x) {
    return x <= std::numbers::pi / 2.0 + kNonBluntTolerance;
  });
}

Point barycenter(const Simplex& s) {
  Point g{};
  for (std::size_t i = 0; i < s.vertex_count(); ++i) g = g + s.vertices[i];
  return (1.0 / static_cast<double>(s.vertex_count())) * g;
}

}  // namespace certifem
