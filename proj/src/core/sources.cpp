#include "certifem/sources.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "certifem/error.hpp"
#include "certifem/quadrature.hpp"

namespace certifem {

namespace {

constexpr double kPi = std::numbers::pi;

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "bad number '" + text + "' in " + what);
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number(item, what));
  return out;
}

bool is_unit_square(const ConvexDomain& domain) {
  const auto* p = domain.as_polygon();
  if (!p || p->vertices.size() != 4) return false;
  const Point corners[4] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  for (std::size_t s = 0; s < 4; ++s) {
    bool match = true;
    for (std::size_t i = 0; i < 4; ++i) match = match && distance(p->vertices[(i + s) % 4], corners[i]) < 1e-14;
    if (match) return true;
  }
  return false;
}

// Center and radius of a ball containing the domain.
std::pair<Point, double> enclosing_ball(const ConvexDomain& domain) {
  if (const auto* d = domain.as_disk()) return {d->center, d->radius};
  if (const auto* b = domain.as_ball()) return {b->center, b->radius};
  const auto& v = domain.as_polygon()->vertices;
  Point c{};
  for (const auto& p : v) c = c + p;
  c = (1.0 / static_cast<double>(v.size())) * c;
  double r = 0.0;
  for (const auto& p : v) r = std::max(r, distance(p, c));
  return {c, r};
}

// Integral of g over the domain, exact for polynomials of degree <= 4.
double integrate_quartic(const ConvexDomain& domain, const std::function<double(const Point&)>& g) {
  const GaussLegendre radial = gauss_legendre(4);
  constexpr int kAzimuth = 12;
  if (const auto* d = domain.as_disk()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = 0.5 * d->radius * (radial.nodes[i] + 1.0);
      const double wr = 0.5 * d->radius * radial.weights[i] * r;
      for (int k = 0; k < kAzimuth; ++k) {
        const double phi = 2.0 * kPi * k / kAzimuth;
        sum += wr * (2.0 * kPi / kAzimuth) *
               g(d->center + Point{r * std::cos(phi), r * std::sin(phi), 0.0});
      }
    }
    return sum;
  }
  if (const auto* b = domain.as_ball()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      const double r = 0.5 * b->radius * (radial.nodes[i] + 1.0);
      const double wr = 0.5 * b->radius * radial.weights[i] * r * r;
      for (std::size_t j = 0; j < radial.nodes.size(); ++j) {
        const double z = radial.nodes[j];
        const double s = std::sqrt(1.0 - z * z);
        for (int k = 0; k < kAzimuth; ++k) {
          const double phi = 2.0 * kPi * k / kAzimuth;
          sum += wr * radial.weights[j] * (2.0 * kPi / kAzimuth) *
                 g(b->center + Point{r * s * std::cos(phi), r * s * std::sin(phi), r * z});
        }
      }
    }
    return sum;
  }
  const auto& v = domain.as_polygon()->vertices;
  const QuadratureRule& rule = triangle_degree4();
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Simplex t = Simplex::triangle(v[0], v[i], v[i + 1]);
    const double area = measure(t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) sum += area * rule.weights[q] * g(rule.map(t, q));
  }
  return sum;
}

}  // namespace

ConvexDomain parse_domain_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "square" && arg.empty()) return ConvexDomain::unit_square();
  if (kind == "disk" || kind == "ball") {
    const double r = arg.empty() ? 1.0 : parse_number(arg, "domain spec");
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
    return kind == "disk" ? ConvexDomain::disk(r) : ConvexDomain::ball(r);
  }
  if (kind == "polygon" && !arg.empty()) {
    const PolyApprox p = load_polytope_json(arg);
    if (p.dim() != 2) throw Error(ErrorCode::InvalidArgument, "polygon domain file must be 2D");
    return ConvexDomain::polygon(p.vertices());
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown domain spec '" + spec + "' (disk:R, ball:R, square, polygon:<file>)");
}

SourceTerm constant_source(double c, const ConvexDomain& domain) {
  SourceTerm f;
  std::ostringstream name;
  name.precision(17);
  name << "const:" << c;
  f.name = name.str();
  f.evaluate = [c](const Point&) { return c; };
  f.gradient = [](const Point&) { return Point{}; };
  f.sup_norm = std::abs(c);
  f.grad_sup_norm = 0.0;
  f.h2_seminorm = 0.0;
  f.l2_norm = std::abs(c) * std::sqrt(domain.measure());
  return f;
}

SourceTerm sinsin_source(const ConvexDomain& domain) {
  if (!is_unit_square(domain)) {
    throw Error(ErrorCode::InvalidArgument, "sinsin source needs the unit square domain");
  }
  const double pi2 = kPi * kPi;
  SourceTerm f;
  f.name = "sinsin";
  f.evaluate = [pi2](const Point& x) { return 2.0 * pi2 * std::sin(kPi * x[0]) * std::sin(kPi * x[1]); };
  f.gradient = [pi2](const Point& x) {
    const double c = 2.0 * pi2 * kPi;
    return Point{c * std::cos(kPi * x[0]) * std::sin(kPi * x[1]),
                 c * std::sin(kPi * x[0]) * std::cos(kPi * x[1]), 0.0};
  };
  f.sup_norm = 2.0 * pi2;
  f.grad_sup_norm = 2.0 * pi2 * kPi;
  f.h2_seminorm = 2.0 * pi2 * pi2;
  f.l2_norm = pi2;
  return f;
}

SourceTerm quadratic_source(const std::vector<double>& coefficients, const ConvexDomain& domain) {
  const int n = domain.dim();
  if (coefficients.size() != static_cast<std::size_t>(n + 2)) {
    throw Error(ErrorCode::InvalidArgument,
                "poly source needs " + std::to_string(n + 2) + " coefficients a,b1..b" +
                    std::to_string(n) + ",q");
  }
  const double a = coefficients[0];
  const Point b{coefficients[1], coefficients[2], n == 3 ? coefficients[3] : 0.0};
  const double q = coefficients.back();
  const auto value = [a, b, q](const Point& x) { return a + dot(b, x) + q * dot(x, x); };

  SourceTerm f;
  std::ostringstream name;
  name.precision(17);
  name << "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) name << (i ? "," : "") << coefficients[i];
  f.name = name.str();
  f.evaluate = value;
  f.gradient = [b, q](const Point& x) { return b + (2.0 * q) * x; };

  // Taylor expansion about the center c is exact: f(x) = f(c) + g.(x-c) + q|x-c|^2.
  const auto [c, rho] = enclosing_ball(domain);
  const Point grad_c = b + (2.0 * q) * c;
  const double slack = 1.0 + 1e-12;
  f.sup_norm = slack * (std::abs(value(c)) + norm(grad_c) * rho + std::abs(q) * rho * rho);
  f.grad_sup_norm = slack * (norm(grad_c) + 2.0 * std::abs(q) * rho);
  f.h2_seminorm = 2.0 * std::abs(q) * std::sqrt(n * domain.measure());
  f.l2_norm = slack * std::sqrt(integrate_quartic(domain, [&](const Point& x) {
    const double v = value(x);
    return v * v;
  }));
  return f;
}

SourceTerm parse_source_spec(const std::string& spec, const ConvexDomain& domain) {
  if (spec == "sinsin") return sinsin_source(domain);
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "const" && !arg.empty()) return constant_source(parse_number(arg, "source spec"), domain);
  if (kind == "poly" && !arg.empty()) return quadratic_source(parse_list(arg, "source spec"), domain);
  throw Error(ErrorCode::InvalidArgument,
              "unknown source spec '" + spec + "' (const:c, sinsin, poly:a,b1,..,bn,q)");
}

}  // namespace certifem
