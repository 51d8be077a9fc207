#include "certifem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "certifem/error.hpp"
#include "certifem/interp_constants.hpp"
#include "certifem/quadrature.hpp"

namespace certifem {

namespace {

// Rows are grad(lambda_1..lambda_n); grad(lambda_0) is minus their sum.
std::array<Point, 4> barycentric_gradients(const Simplex& s) {
  std::array<Point, 4> g{};
  const Point e1 = s.vertices[1] - s.vertices[0];
  const Point e2 = s.vertices[2] - s.vertices[0];
  if (s.dim == 2) {
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    g[1] = {e2[1] / det, -e2[0] / det, 0.0};
    g[2] = {-e1[1] / det, e1[0] / det, 0.0};
  } else {
    const Point e3 = s.vertices[3] - s.vertices[0];
    const double det = dot(e1, cross(e2, e3));
    g[1] = (1.0 / det) * cross(e2, e3);
    g[2] = (1.0 / det) * cross(e3, e1);
    g[3] = (1.0 / det) * cross(e1, e2);
  }
  for (int i = 1; i <= s.dim; ++i) g[0] = g[0] - g[i];
  return g;
}

double vector_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double quadratic_form(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(x.size());
  a.multiply(x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

double SourceTerm::checked(const Point& x) const {
  const double v = evaluate(x);
  if (!std::isfinite(v) || std::abs(v) > sup_norm + 1e-10 * std::max(1.0, sup_norm)) {
    std::ostringstream msg;
    msg << "source '" << name << "' has |f| = " << std::abs(v) << " above its declared sup norm "
        << sup_norm;
    throw Error(ErrorCode::InvalidSourceTerm, msg.str());
  }
  return v;
}

SourceTerm SourceTerm::scaled(double c) const {
  SourceTerm out = *this;
  auto base = evaluate;
  out.evaluate = [base, c](const Point& x) { return c * base(x); };
  if (gradient) {
    auto g = gradient;
    out.gradient = [g, c](const Point& x) { return c * g(x); };
  }
  out.sup_norm *= c;
  if (out.grad_sup_norm) *out.grad_sup_norm *= c;
  if (out.h2_seminorm) *out.h2_seminorm *= c;
  if (out.l2_norm) *out.l2_norm *= c;
  return out;
}

FhMode parse_fh_mode(std::string_view name) {
  if (name == "barycentric") return FhMode::Barycentric;
  if (name == "nodal") return FhMode::Nodal;
  if (name == "exact") return FhMode::Exact;
  throw Error(ErrorCode::InvalidArgument, "f_h mode must be barycentric, nodal or exact");
}

std::string_view fh_mode_name(FhMode mode) {
  switch (mode) {
    case FhMode::Barycentric: return "barycentric";
    case FhMode::Nodal: return "nodal";
    case FhMode::Exact: return "exact";
  }
  return "exact";
}

// ---------------------------------------------------------------------------
// CsrMatrix

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += values[k] * x[cols[k]];
    y[i] = acc;
  }
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) return 0.0;
  return values[static_cast<std::size_t>(it - cols.begin())];
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows);
  for (std::size_t i = 0; i < rows; ++i) d[i] = at(i, i);
  return d;
}

bool CsrMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(cols[k]);
      if (std::abs(values[k] - at(j, i)) > tol) return false;
    }
  }
  return true;
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows = n;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& first = triplets[k];
    double sum = 0.0;
    while (k < triplets.size() && triplets[k].row == first.row && triplets[k].col == first.col) {
      sum += triplets[k].value;
      ++k;
    }
    m.cols.push_back(first.col);
    m.values.push_back(sum);
    ++m.row_ptr[static_cast<std::size_t>(first.row) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

// ---------------------------------------------------------------------------
// Assembly

std::array<std::array<double, 4>, 4> local_stiffness(const Simplex& s) {
  const double vol = measure(s);
  const auto g = barycentric_gradients(s);
  std::array<std::array<double, 4>, 4> k{};
  for (int i = 0; i <= s.dim; ++i) {
    for (int j = 0; j <= s.dim; ++j) k[i][j] = vol * dot(g[i], g[j]);
  }
  return k;
}

CsrMatrix assemble_stiffness(const SimplicialMesh& mesh) {
  std::vector<Triplet> triplets;
  const int nloc = mesh.dim() + 1;
  triplets.reserve(mesh.element_count() * static_cast<std::size_t>(nloc * nloc));
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const auto k = local_stiffness(mesh.element(e));
    const auto& el = mesh.elements()[e];
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        triplets.push_back({el[i], el[j], k[i][j]});
      }
    }
  }
  return CsrMatrix::from_triplets(mesh.node_count(), std::move(triplets));
}

CsrMatrix assemble_mass(const SimplicialMesh& mesh) {
  std::vector<Triplet> triplets;
  const int nloc = mesh.dim() + 1;
  const double denom = mesh.dim() == 2 ? 12.0 : 20.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double vol = measure(mesh.element(e));
    const auto& el = mesh.elements()[e];
    for (int i = 0; i < nloc; ++i) {
      for (int j = 0; j < nloc; ++j) {
        triplets.push_back({el[i], el[j], vol / denom * (i == j ? 2.0 : 1.0)});
      }
    }
  }
  return CsrMatrix::from_triplets(mesh.node_count(), std::move(triplets));
}

DiscreteSource build_fh(const SimplicialMesh& mesh, const SourceTerm& f, FhMode mode) {
  DiscreteSource fh;
  fh.mode = mode;
  fh.f = f;
  if (mode == FhMode::Barycentric) {
    fh.values.resize(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      fh.values[e] = f.checked(barycenter(mesh.element(e)));
    }
  } else if (mode == FhMode::Nodal) {
    fh.values.resize(mesh.node_count());
    for (std::size_t i = 0; i < mesh.node_count(); ++i) fh.values[i] = f.checked(mesh.nodes()[i]);
  }
  return fh;
}

double fh_l2_norm(const SimplicialMesh& mesh, const DiscreteSource& fh) {
  switch (fh.mode) {
    case FhMode::Barycentric: {
      double acc = 0.0;
      for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        acc += fh.values[e] * fh.values[e] * measure(mesh.element(e));
      }
      return std::sqrt(acc);
    }
    case FhMode::Nodal:
      return p1_l2_norm(mesh, fh.values);
    case FhMode::Exact: {
      const auto& rule = degree4_rule(mesh.dim());
      double acc = 0.0;
      for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const Simplex s = mesh.element(e);
        const double vol = measure(s);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
          const double v = fh.f.checked(rule.map(s, q));
          acc += vol * rule.weights[q] * v * v;
        }
      }
      return std::sqrt(std::max(acc, 0.0));
    }
  }
  return 0.0;
}

std::vector<double> assemble_load(const SimplicialMesh& mesh, const DiscreteSource& fh) {
  std::vector<double> b(mesh.node_count(), 0.0);
  const int nloc = mesh.dim() + 1;
  if (fh.mode == FhMode::Nodal) {
    const CsrMatrix mass = assemble_mass(mesh);
    mass.multiply(fh.values, b);
    return b;
  }
  const auto& rule = degree4_rule(mesh.dim());
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const Simplex s = mesh.element(e);
    const double vol = measure(s);
    const auto& el = mesh.elements()[e];
    if (fh.mode == FhMode::Barycentric) {
      for (int i = 0; i < nloc; ++i) b[el[i]] += fh.values[e] * vol / nloc;
    } else {
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double v = vol * rule.weights[q] * fh.f.checked(rule.map(s, q));
        for (int i = 0; i < nloc; ++i) b[el[i]] += v * rule.points[q][i];
      }
    }
  }
  return b;
}

LinearSystem reduce_dirichlet(const SimplicialMesh& mesh, const CsrMatrix& stiffness,
                              std::span<const double> load) {
  LinearSystem sys;
  std::vector<int> node_to_unknown(mesh.node_count(), -1);
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    if (!mesh.is_boundary_node(static_cast<int>(i))) {
      node_to_unknown[i] = static_cast<int>(sys.unknown_to_node.size());
      sys.unknown_to_node.push_back(static_cast<int>(i));
    }
  }
  const std::size_t n = sys.unknown_to_node.size();
  sys.matrix.rows = n;
  sys.matrix.row_ptr.assign(n + 1, 0);
  sys.rhs.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    const auto node = static_cast<std::size_t>(sys.unknown_to_node[u]);
    sys.rhs[u] = load[node];
    for (std::size_t k = stiffness.row_ptr[node]; k < stiffness.row_ptr[node + 1]; ++k) {
      const int col = node_to_unknown[static_cast<std::size_t>(stiffness.cols[k])];
      if (col < 0) continue;
      sys.matrix.cols.push_back(col);
      sys.matrix.values.push_back(stiffness.values[k]);
    }
    sys.matrix.row_ptr[u + 1] = sys.matrix.cols.size();
  }
  return sys;
}

CgResult solve_cg(const CsrMatrix& a, std::span<const double> b, double tol, int maxiter) {
  const std::size_t n = a.rows;
  CgResult out;
  out.x.assign(n, 0.0);
  const double bnorm = vector_norm(b);
  if (n == 0 || bnorm == 0.0) {
    out.converged = true;
    return out;
  }
  const std::vector<double> diag = a.diagonal();
  std::vector<double> r(b.begin(), b.end()), z(n), p(n), q(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += r[i] * z[i];

  // b - Ax accumulated in extended precision so that the check is not
  // dominated by rounding in the product itself.
  auto true_residual = [&](const std::vector<double>& x, std::vector<double>& res) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      long double s = b[i];
      for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
        s -= static_cast<long double>(a.values[k]) * x[static_cast<std::size_t>(a.cols[k])];
      }
      res[i] = static_cast<double>(s);
      acc += s * s;
    }
    return static_cast<double>(std::sqrt(acc)) / bnorm;
  };
  std::vector<double> check(n);

  for (int it = 1; it <= maxiter; ++it) {
    a.multiply(p, q);
    double pq = 0.0;
    for (std::size_t i = 0; i < n; ++i) pq += p[i] * q[i];
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    out.iterations = it;
    bool restart = false;
    if (vector_norm(r) <= tol * bnorm) {
      out.residual = true_residual(out.x, check);
      if (out.residual <= tol) {
        out.converged = true;
        return out;
      }
      // The recurrence drifted from the true residual; restart from it.
      r = check;
      restart = true;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    double rz_next = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_next += r[i] * z[i];
    const double beta = restart ? 0.0 : rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  out.residual = true_residual(out.x, check);
  out.converged = out.residual <= tol;
  return out;
}

FemSolution solve_poisson(const SimplicialMesh& mesh, const DiscreteSource& fh, double tol,
                          int maxiter) {
  const CsrMatrix k = assemble_stiffness(mesh);
  const std::vector<double> load = assemble_load(mesh, fh);
  const LinearSystem sys = reduce_dirichlet(mesh, k, load);
  const CgResult cg = solve_cg(sys.matrix, sys.rhs, tol, maxiter);
  FemSolution sol;
  sol.nodal_values.assign(mesh.node_count(), 0.0);
  for (std::size_t u = 0; u < sys.unknown_to_node.size(); ++u) {
    sol.nodal_values[static_cast<std::size_t>(sys.unknown_to_node[u])] = cg.x[u];
  }
  sol.iterations = cg.iterations;
  sol.residual = cg.residual;
  sol.converged = cg.converged;
  sol.unknowns = sys.unknown_to_node.size();
  return sol;
}

// ---------------------------------------------------------------------------
// Norms

double evaluate_p1(const SimplicialMesh& mesh, std::span<const double> nodal, std::size_t e,
                   const Point& x) {
  const Simplex s = mesh.element(e);
  const auto g = barycentric_gradients(s);
  const auto& el = mesh.elements()[e];
  double v = 0.0;
  for (int i = 0; i <= s.dim; ++i) {
    // lambda_i(x) = 1_{i=0} + grad(lambda_i).(x - v0)
    const double lambda = (i == 0 ? 1.0 : 0.0) + dot(g[i], x - s.vertices[0]);
    v += lambda * nodal[el[i]];
  }
  return v;
}

double l2_error_interior(const SimplicialMesh& mesh, std::span<const double> nodal,
                         const std::function<double(const Point&)>& exact) {
  const auto& rule = degree4_rule(mesh.dim());
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const Simplex s = mesh.element(e);
    const double vol = measure(s);
    const auto& el = mesh.elements()[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      double uh = 0.0;
      for (int i = 0; i <= mesh.dim(); ++i) uh += rule.points[q][i] * nodal[el[i]];
      const double d = exact(rule.map(s, q)) - uh;
      acc += vol * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

double p1_l2_norm(const SimplicialMesh& mesh, std::span<const double> nodal) {
  return std::sqrt(std::max(0.0, quadratic_form(assemble_mass(mesh), nodal)));
}

double p1_h1_seminorm(const SimplicialMesh& mesh, std::span<const double> nodal) {
  return std::sqrt(std::max(0.0, quadratic_form(assemble_stiffness(mesh), nodal)));
}

double fh_error_l2(const SimplicialMesh& mesh, const DiscreteSource& fh) {
  if (fh.mode == FhMode::Exact) return 0.0;
  const auto& rule = degree4_rule(mesh.dim());
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const Simplex s = mesh.element(e);
    const double vol = measure(s);
    const auto& el = mesh.elements()[e];
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      double approx = 0.0;
      if (fh.mode == FhMode::Barycentric) {
        approx = fh.values[e];
      } else {
        for (int i = 0; i <= mesh.dim(); ++i) approx += rule.points[q][i] * fh.values[el[i]];
      }
      const double d = fh.f.evaluate(rule.map(s, q)) - approx;
      acc += vol * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(std::max(acc, 0.0));
}

double fh_perturbation_bound(const SimplicialMesh& mesh, const SourceTerm& f, FhMode mode) {
  switch (mode) {
    case FhMode::Exact:
      return 0.0;
    case FhMode::Barycentric: {
      if (!f.grad_sup_norm) {
        throw Error(ErrorCode::MissingNormMetadata, "barycentric f_h needs ||grad f||_inf");
      }
      const double n = mesh.dim();
      return n / (n + 1.0) * quality(mesh).h * std::sqrt(mesh.measure()) * *f.grad_sup_norm;
    }
    case FhMode::Nodal: {
      if (!f.h2_seminorm) throw Error(ErrorCode::MissingNormMetadata, "nodal f_h needs |f|_2");
      return e0_global(quality(mesh)) * *f.h2_seminorm;
    }
  }
  return 0.0;
}

}  // namespace certifem
