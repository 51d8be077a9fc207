#include "certifem/interp_constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "certifem/error.hpp"
#include "certifem/parallel.hpp"
#include "certifem/quadrature.hpp"

namespace certifem {

RhoConvention parse_rho_convention(std::string_view name) {
  if (name == "radius") return RhoConvention::Radius;
  if (name == "diameter") return RhoConvention::Diameter;
  throw Error(ErrorCode::InvalidArgument, "rho convention must be 'radius' or 'diameter'");
}

std::string_view rho_convention_name(RhoConvention rho) {
  return rho == RhoConvention::Radius ? "radius" : "diameter";
}

double e1_liu_at_angle(double alpha, double beta, double theta) {
  const double a2 = alpha * alpha, b2 = beta * beta;
  const double inner = std::max(0.0, a2 * a2 + 2.0 * a2 * b2 * std::cos(2.0 * theta) + b2 * b2);
  return kLiuConstant * (1.0 + std::abs(std::cos(theta))) / std::sin(theta) *
         std::sqrt((a2 + b2 + std::sqrt(inner)) / 2.0);
}

namespace {

std::array<double, 3> liu_per_angle(const Simplex& t) {
  const auto theta = angles(t);
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double alpha = distance(t.vertices[k], t.vertices[(k + 1) % 3]);
    const double beta = distance(t.vertices[k], t.vertices[(k + 2) % 3]);
    out[k] = e1_liu_at_angle(alpha, beta, theta[k]);
  }
  return out;
}

}  // namespace

double e1_liu(const Simplex& t) {
  if (t.dim != 2) throw Error(ErrorCode::InvalidArgument, "Liu's bound is for triangles");
  const auto v = liu_per_angle(t);
  return *std::min_element(v.begin(), v.end());
}

double e1_liu_min_angle(const Simplex& t) {
  if (t.dim != 2) throw Error(ErrorCode::InvalidArgument, "Liu's bound is for triangles");
  const auto theta = angles(t);
  const auto k = static_cast<std::size_t>(std::min_element(theta.begin(), theta.end()) - theta.begin());
  return liu_per_angle(t)[k];
}

double e1_kobayashi_2d(const Simplex& t) {
  if (t.dim != 2) throw Error(ErrorCode::InvalidArgument, "Kobayashi's 2D bound is for triangles");
  const double s = measure(t);
  const double a2 = std::pow(distance(t.vertices[1], t.vertices[2]), 2);
  const double b2 = std::pow(distance(t.vertices[0], t.vertices[2]), 2);
  const double c2 = std::pow(distance(t.vertices[0], t.vertices[1]), 2);
  const double s2 = s * s;
  const double lead = a2 * b2 * c2 / (16.0 * s2);
  const double radicand =
      lead - (a2 + b2 + c2) / 30.0 - (s2 / 5.0) * (1.0 / a2 + 1.0 / b2 + 1.0 / c2);
  if (radicand < 0.0) {
    if (radicand < -1e-12 * lead) {
      throw Error(ErrorCode::NegativeRadicand, "Kobayashi radicand is negative");
    }
    return 0.0;
  }
  return std::sqrt(radicand);
}

double e1_kobayashi_3d(const Simplex& t, RhoConvention rho) {
  if (t.dim != 3) throw Error(ErrorCode::InvalidArgument, "Kobayashi's 3D bound is for tetrahedra");
  const double h = longest_edge(t);
  const double r = inradius(t);
  const double rho_t = rho == RhoConvention::Diameter ? 2.0 * r : r;
  return kKobayashi3dConstant * h * h / rho_t;
}

ElementConstants element_constants(const Simplex& s, RhoConvention rho) {
  ElementConstants c;
  const double h = longest_edge(s);
  if (s.dim == 2) {
    c.e1_liu = e1_liu(s);
    c.e1_kobayashi = e1_kobayashi_2d(s);
    c.e1_best = std::min(*c.e1_liu, c.e1_kobayashi);
  } else {
    c.e1_kobayashi = e1_kobayashi_3d(s, rho);
    c.e1_best = c.e1_kobayashi;
  }
  c.e0_bound = e0_global(s.dim, h);
  return c;
}

double e0_global(int dim, double h) {
  return dim == 2 ? std::sqrt(3.0 / 83.0) * h * h : 8.0 * h * h;
}

double e0_global(const MeshQuality& q) { return e0_global(q.dim, q.h); }

double minangle_bound(double theta0, double h) {
  const double c = std::cos(theta0 / 2.0);
  return kMinAngleConstant * c * c / std::sin(theta0 / 2.0) * h;
}

double nonblunt_bound(double h) { return std::sqrt(11.0 / 60.0) * h; }

double regularity_bound(const MeshQuality& q, RhoConvention rho) {
  // q.sigma uses rho_T = 2 * inradius.
  const double sigma = rho == RhoConvention::Diameter ? q.sigma : 2.0 * q.sigma;
  return kKobayashi3dConstant * sigma * q.h;
}

GlobalConstants a_h(const SimplicialMesh& mesh, RhoConvention rho) {
  const std::size_t n = mesh.element_count();
  std::vector<double> best(n);
  parallel_for(n, [&](std::size_t e) { best[e] = element_constants(mesh.element(e), rho).e1_best; });

  GlobalConstants g;
  g.dim = mesh.dim();
  g.rho = rho;
  for (std::size_t e = 0; e < n; ++e) {
    if (best[e] > g.a_h_elementwise) {
      g.a_h_elementwise = best[e];
      g.worst_element = e;
    }
  }
  const MeshQuality q = quality(mesh);
  g.e0_global = e0_global(q);
  if (mesh.dim() == 2) {
    g.a_h_circumradius = q.r_h;
    g.a_h_minangle = minangle_bound(*q.theta0, q.h);
    if (*q.nonblunt) g.a_h_nonblunt = nonblunt_bound(q.h);
  } else {
    g.a_h_regularity = regularity_bound(q, rho);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Rayleigh-quotient oracle

namespace {

struct Monomial {
  int a = 0;
  int b = 0;
};

double ipow(double x, int k) { return k < 0 ? 0.0 : std::pow(x, k); }

}  // namespace

RayleighResult rayleigh_lower_bound_detail(const Simplex& t, int degree) {
  if (t.dim != 2) throw Error(ErrorCode::InvalidArgument, "the oracle is implemented for triangles");
  if (degree < 2 || degree > 6) throw Error(ErrorCode::InvalidArgument, "degree must be in [2, 6]");
  const double area = measure(t);
  const Point g = barycenter(t);
  const double scale = longest_edge(t);

  std::vector<Monomial> basis;
  for (int total = 0; total <= degree; ++total) {
    for (int a = total; a >= 0; --a) basis.push_back({a, total - a});
  }
  const auto nb = static_cast<Eigen::Index>(basis.size());

  // Gram matrices of the H^1 and H^2 seminorms in physical coordinates.
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd g2 = Eigen::MatrixXd::Zero(nb, nb);
  const QuadratureRule rule = triangle_collapsed_gauss(degree + 1);
  Eigen::MatrixXd grad(2, nb), hess(3, nb);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = rule.map(t, q);
    const double X = (x[0] - g[0]) / scale, Y = (x[1] - g[1]) / scale;
    for (Eigen::Index j = 0; j < nb; ++j) {
      const int a = basis[j].a, b = basis[j].b;
      grad(0, j) = a * ipow(X, a - 1) * ipow(Y, b) / scale;
      grad(1, j) = b * ipow(X, a) * ipow(Y, b - 1) / scale;
      hess(0, j) = a * (a - 1) * ipow(X, a - 2) * ipow(Y, b) / (scale * scale);
      hess(1, j) = a * b * ipow(X, a - 1) * ipow(Y, b - 1) / (scale * scale);
      hess(2, j) = b * (b - 1) * ipow(X, a) * ipow(Y, b - 2) / (scale * scale);
    }
    const double w = area * rule.weights[q];
    g1.noalias() += w * grad.transpose() * grad;
    Eigen::MatrixXd weighted = hess;
    weighted.row(1) *= 2.0;  // mixed derivative counted twice in |v|_2^2
    g2.noalias() += w * hess.transpose() * weighted;
  }

  // Vanishing at the three vertices.
  Eigen::MatrixXd constraint(3, nb);
  for (int i = 0; i < 3; ++i) {
    const double X = (t.vertices[i][0] - g[0]) / scale;
    const double Y = (t.vertices[i][1] - g[1]) / scale;
    for (Eigen::Index j = 0; j < nb; ++j) constraint(i, j) = ipow(X, basis[j].a) * ipow(Y, basis[j].b);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraint, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(2) <= 1e-10 * sv(0)) {
    throw Error(ErrorCode::ConstraintRankDeficiency, "vertex constraints are rank deficient");
  }
  const Eigen::MatrixXd z = svd.matrixV().rightCols(nb - 3);

  const Eigen::MatrixXd k1 = z.transpose() * g1 * z;
  const Eigen::MatrixXd k2 = z.transpose() * g2 * z;
  Eigen::LLT<Eigen::MatrixXd> llt(k2);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::ConstraintRankDeficiency, "H^2 form is not definite on the constrained space");
  }
  // M = L^{-1} K1 L^{-T}, symmetric positive semidefinite.
  const Eigen::MatrixXd lower = llt.matrixL();
  Eigen::MatrixXd tmp = lower.triangularView<Eigen::Lower>().solve(k1);
  Eigen::MatrixXd m = lower.triangularView<Eigen::Lower>().solve(tmp.transpose());
  m = 0.5 * (m + m.transpose());

  RayleighResult result;
  result.subspace_dimension = static_cast<int>(m.rows());
  // Deterministic start vector with no symmetry, so it is not orthogonal to
  // the dominant eigenspace of symmetric triangles.
  Eigen::VectorXd x(m.rows());
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(k) + 0.3);
  x.normalize();
  double lambda = x.dot(m * x);
  for (int it = 1; it <= 10000; ++it) {
    const Eigen::VectorXd y = m * x;
    const double ny = y.norm();
    if (ny == 0.0) break;
    x = y / ny;
    const Eigen::VectorXd mx = m * x;
    const double next = x.dot(mx);
    lambda = std::max(lambda, next);
    result.iterations = it;
    // The eigenvalue error is quadratic in the residual.
    if ((mx - next * x).norm() <= 1e-5 * next) {
      result.converged = true;
      break;
    }
  }
  result.value = std::sqrt(std::max(lambda, 0.0));
  return result;
}

double rayleigh_lower_bound(const Simplex& t, int degree) {
  return rayleigh_lower_bound_detail(t, degree).value;
}

}  // namespace certifem
