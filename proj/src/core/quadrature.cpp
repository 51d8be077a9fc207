#include "certifem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

#include "certifem/error.hpp"

namespace certifem {

Point QuadratureRule::map(const Simplex& s, std::size_t q) const {
  Point x{};
  for (int i = 0; i <= dim; ++i) x = x + points[q][i] * s.vertices[i];
  return x;
}

const QuadratureRule& triangle_degree4() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.dim = 2;
    const double a1 = 0.445948490915965, b1 = 1.0 - 2.0 * a1;
    const double a2 = 0.091576213509771, b2 = 1.0 - 2.0 * a2;
    const double w1 = 0.223381589678011, w2 = 1.0 / 3.0 - w1;
    for (const auto& [a, b, w] : {std::tuple{a1, b1, w1}, std::tuple{a2, b2, w2}}) {
      r.points.push_back({b, a, a, 0.0});
      r.points.push_back({a, b, a, 0.0});
      r.points.push_back({a, a, b, 0.0});
      r.weights.insert(r.weights.end(), 3, w);
    }
    return r;
  }();
  return rule;
}

const QuadratureRule& tetrahedron_degree4() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    r.dim = 3;
    // Keast's 11-point rule, weights rescaled from volume 1/6 to 1.
    r.points.push_back({0.25, 0.25, 0.25, 0.25});
    r.weights.push_back(-74.0 / 5625.0 * 6.0);
    const double c = 1.0 / 14.0;
    for (int k = 0; k < 4; ++k) {
      std::array<double, 4> p{c, c, c, c};
      p[k] = 11.0 / 14.0;
      r.points.push_back(p);
      r.weights.push_back(343.0 / 45000.0 * 6.0);
    }
    const double s = std::sqrt(5.0 / 14.0);
    const double a = (1.0 + s) / 4.0, b = (1.0 - s) / 4.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        std::array<double, 4> p{b, b, b, b};
        p[i] = a;
        p[j] = a;
        r.points.push_back(p);
        r.weights.push_back(56.0 / 2250.0 * 6.0);
      }
    }
    return r;
  }();
  return rule;
}

const QuadratureRule& degree4_rule(int dim) {
  return dim == 2 ? triangle_degree4() : tetrahedron_degree4();
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre needs n >= 1");
  GaussLegendre g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    g.nodes[static_cast<std::size_t>(i)] = x;
    g.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

QuadratureRule triangle_collapsed_gauss(int n) {
  const GaussLegendre g = gauss_legendre(n);
  QuadratureRule r;
  r.dim = 2;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    const double wu = 0.5 * g.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      const double wv = 0.5 * g.weights[j];
      const double x = u, y = v * (1.0 - u);
      r.points.push_back({1.0 - x - y, x, y, 0.0});
      // Reference area 1/2 normalised to 1.
      r.weights.push_back(2.0 * wu * wv * (1.0 - u));
    }
  }
  return r;
}

}  // namespace certifem
