#include "certifem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "certifem/error.hpp"
#include "certifem/interp_constants.hpp"
#include "certifem/parallel.hpp"
#include "certifem/quadrature.hpp"
#include "certifem/sources.hpp"

namespace certifem {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ExactSolution> build_registry() {
  std::vector<ExactSolution> out;
  {
    const ConvexDomain d = ConvexDomain::disk(1.0);
    out.push_back({"disk2d", d, [](const Point& x) { return (1.0 - dot(x, x)) / 4.0; },
                   [](const Point&) { return 1.0; }, constant_source(1.0, d),
                   std::sqrt(kPi / 48.0)});
  }
  {
    const ConvexDomain b = ConvexDomain::ball(1.0);
    out.push_back({"ball3d", b, [](const Point& x) { return (1.0 - dot(x, x)) / 6.0; },
                   [](const Point&) { return 1.0; }, constant_source(1.0, b),
                   std::sqrt(8.0 * kPi / 945.0)});
  }
  {
    const ConvexDomain s = ConvexDomain::unit_square();
    out.push_back({"square2d", s,
                   [](const Point& x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]); },
                   [](const Point& x) {
                     return 2.0 * kPi * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
                   },
                   sinsin_source(s), 0.5});
  }
  return out;
}

// Adaptive Simpson with the usual Richardson correction.
template <typename F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

double segment_integrand(double d, double theta) {
  const double c = std::cos(theta);
  const double v = std::max(0.0, 1.0 - d * d / (c * c));
  return v * v * v / 96.0;
}

// Closed-form radial integral for the ball: int_a^1 ((1-r^2)/6)^2 r^2 dr.
double ball_radial(double a) {
  const auto p = [](double r) {
    const double r3 = r * r * r;
    return r3 / 3.0 - 2.0 * r3 * r * r / 5.0 + r3 * r3 * r / 7.0;
  };
  return (p(1.0) - p(a)) / 36.0;
}

double poly_gap_sum(const PolyApprox& poly, const std::function<double(std::size_t)>& per_facet) {
  double sum = 0.0;
  for (std::size_t f = 0; f < poly.facets().size(); ++f) sum += per_facet(f);
  return sum;
}

bool poincare_holds(const SimplicialMesh& mesh, const FemSolution& sol, double diameter) {
  const double l2 = p1_l2_norm(mesh, sol.nodal_values);
  const double h1 = p1_h1_seminorm(mesh, sol.nodal_values);
  return l2 <= poincare_bound(mesh.dim(), diameter) * h1 * (1.0 + 1e-12);
}

FemSolution solve_checked(const SimplicialMesh& mesh, const DiscreteSource& fh) {
  FemSolution sol = solve_poisson(mesh, fh);
  if (!sol.converged) {
    throw Error(ErrorCode::MaxIterExceeded, "conjugate gradients did not converge");
  }
  return sol;
}

std::array<Point, 2> tangent_basis(const Point& n, int dim) {
  if (dim == 2) return {Point{-n[1], n[0], 0.0}, Point{}};
  const Point axis = std::abs(n[0]) < 0.6 ? Point{1, 0, 0} : Point{0, 1, 0};
  Point e1 = cross(n, axis);
  e1 = (1.0 / norm(e1)) * e1;
  return {e1, cross(n, e1)};
}

}  // namespace

const std::vector<ExactSolution>& registry() {
  static const std::vector<ExactSolution> r = build_registry();
  return r;
}

const ExactSolution& find_exact(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw Error(ErrorCode::InvalidArgument,
              "unknown exact solution '" + name + "' (disk2d, ball3d, square2d)");
}

double disk_segment_term(double d) {
  if (d >= 1.0) return 0.0;
  const double alpha = std::acos(std::max(-1.0, d));
  return adaptive_simpson([d](double t) { return segment_integrand(d, t); }, -alpha, alpha, 1e-14);
}

double gap_error_term(int m) {
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "m must be at least 3");
  return m * disk_segment_term(std::cos(kPi / m));
}

double gap_error_term_half(int m) {
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "m must be at least 3");
  const double c = std::cos(kPi / m);
  return 2.0 * m *
         adaptive_simpson([c](double t) { return segment_integrand(c, t); }, 0.0, kPi / m, 0.5e-14);
}

double gap_error_squared(const ExactSolution& exact, const PolyApprox& poly) {
  validate_inscribed(exact.domain, poly);
  const GapResult gap = gap_delta(exact.domain, poly);
  if (exact.domain.kind() == DomainKind::Polygon) {
    if (gap.delta <= 1e-12 * exact.domain.diameter() &&
        std::abs(poly.measure() - exact.domain.measure()) <= 1e-12 * exact.domain.measure()) {
      return 0.0;
    }
    throw Error(ErrorCode::InvalidArgument,
                "gap integral for polygon domains needs the exact polygon");
  }
  if (exact.name == "disk2d") {
    return poly_gap_sum(poly, [&](std::size_t f) {
      const PolyFacet& F = poly.facets()[f];
      return disk_segment_term(dot(F.normal, F.barycenter));
    });
  }
  if (exact.name == "ball3d") {
    const QuadratureRule rule = triangle_collapsed_gauss(20);
    return poly_gap_sum(poly, [&](std::size_t f) {
      const PolyFacet& F = poly.facets()[f];
      const auto& v = poly.vertices();
      const Simplex t = Simplex::triangle(v[F.vertices[0]], v[F.vertices[1]], v[F.vertices[2]]);
      const double d = dot(F.normal, F.barycenter);
      const double area = measure(t);
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double r = norm(rule.map(t, q));
        sum += area * rule.weights[q] * ball_radial(r) * d / (r * r * r);
      }
      return sum;
    });
  }
  throw Error(ErrorCode::InvalidArgument, "no gap integral for exact solution '" + exact.name + "'");
}

double actual_l2_error(const ExactSolution& exact, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const FemSolution& sol) {
  const double inner = l2_error_interior(mesh, sol.nodal_values, exact.u);
  return std::sqrt(gap_error_squared(exact, poly) + inner * inner);
}

BarrierReport barrier_check(const ExactSolution& exact, const PolyApprox& poly,
                            std::uint64_t seed, std::size_t samples) {
  const ConvexDomain& dom = exact.domain;
  validate_inscribed(dom, poly);
  const GapResult gap = gap_delta(dom, poly);
  BarrierReport rep;
  rep.delta = gap.delta;
  rep.bound = 0.5 * dom.diameter() * gap.delta * exact.f.sup_norm;
  if (gap.delta <= 0.0) return rep;

  const auto visit = [&](const Point& x) {
    const double v = std::abs(exact.u(x));
    if (v > rep.max_abs_u) {
      rep.max_abs_u = v;
      rep.argmax = x;
    }
  };

  const int dim = poly.dim();
  const auto& verts = poly.vertices();
  std::vector<std::size_t> open;
  for (std::size_t f = 0; f < poly.facets().size(); ++f) {
    if (gap.per_facet[f] <= 0.0) continue;
    open.push_back(f);
    const PolyFacet& F = poly.facets()[f];
    visit(F.barycenter);
    constexpr int kGrid = 16;
    const Point a = verts[F.vertices[0]], b = verts[F.vertices[1]];
    if (dim == 2) {
      for (int i = 0; i <= kGrid; ++i) {
        const double s = static_cast<double>(i) / kGrid;
        visit((1.0 - s) * a + s * b);
      }
    } else {
      const Point c = verts[F.vertices[2]];
      for (int i = 0; i <= kGrid; ++i) {
        for (int j = 0; i + j <= kGrid; ++j) {
          const double s = static_cast<double>(i) / kGrid, t = static_cast<double>(j) / kGrid;
          visit((1.0 - s - t) * a + s * b + t * c);
        }
      }
    }
  }

  // Sampling boxes: [0, delta_F] along the normal, and across the cap of the
  // domain cut off by the facet plane.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t max_attempts = std::max<std::size_t>(samples, 1) * 100000;
  std::size_t attempts = 0;
  std::size_t k = 0;
  while (rep.samples < samples && attempts < max_attempts) {
    const PolyFacet& F = poly.facets()[open[k++ % open.size()]];
    const auto basis = tangent_basis(F.normal, dim);
    Point base = F.barycenter;
    double half = dom.diameter();
    if (const auto* d = dom.as_disk()) {
      const double dc = dot(F.normal, F.barycenter - d->center);
      base = d->center + dc * F.normal;
      half = std::sqrt(std::max(0.0, d->radius * d->radius - dc * dc));
    } else if (const auto* bl = dom.as_ball()) {
      const double dc = dot(F.normal, F.barycenter - bl->center);
      base = bl->center + dc * F.normal;
      half = std::sqrt(std::max(0.0, bl->radius * bl->radius - dc * dc));
    }
    const double depth = gap.per_facet[&F - poly.facets().data()];
    ++attempts;
    Point x = base + (unit(rng) * depth) * F.normal + ((2.0 * unit(rng) - 1.0) * half) * basis[0];
    if (dim == 3) x = x + ((2.0 * unit(rng) - 1.0) * half) * basis[1];
    if (!dom.contains(x) || poly.contains(x)) continue;
    ++rep.samples;
    visit(x);
  }
  rep.passed = rep.max_abs_u <= rep.bound * (1.0 + 1e-12);
  return rep;
}

int default_refine_rule(int m) {
  if (m <= 6) return 0;
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(m) / 6.0)));
}

std::optional<std::pair<double, double>> table1_reference(int m) {
  switch (m) {
    case 10: return std::pair{4.768e-2, 2.397e-1};
    case 20: return std::pair{1.303e-2, 7.688e-2};
    case 30: return std::pair{5.910e-3, 4.368e-2};
    case 40: return std::pair{3.248e-3, 2.531e-2};
    case 50: return std::pair{2.127e-3, 1.672e-2};
    default: return std::nullopt;
  }
}

Table1Row table1_row(int m, const SimplicialMesh& mesh, const std::string& mesh_source) {
  const ExactSolution& exact = find_exact("disk2d");
  const PolyApprox poly = inscribed_regular_polygon(exact.domain, m);
  check_conforms_to(mesh, poly);
  const DiscreteSource fh = build_fh(mesh, exact.f, FhMode::Exact);
  const FemSolution sol = solve_checked(mesh, fh);

  std::vector<double> kob(mesh.element_count());
  parallel_for(kob.size(), [&](std::size_t e) { kob[e] = e1_kobayashi_2d(mesh.element(e)); });

  Table1Row row;
  row.m = m;
  row.mesh_source = mesh_source;
  row.h = quality(mesh).h;
  row.a_m = kob.empty() ? 0.0 : *std::max_element(kob.begin(), kob.end());
  const double s = std::sin(kPi / (2.0 * m));
  row.predicted = std::sqrt(kPi) * (row.a_m * row.a_m + 2.0 * s * s);
  row.actual = actual_l2_error(exact, poly, mesh, sol);
  row.ratio = row.predicted / row.actual;
  row.certified = certify(exact.domain, poly, mesh, fh, AhStrategy::Elementwise);
  row.poincare_ok = poincare_holds(mesh, sol, exact.domain.diameter());
  if (const auto ref = table1_reference(m)) {
    row.reference_actual = ref->first;
    row.reference_predicted = ref->second;
  }
  return row;
}

std::vector<Table1Row> run_table1(const std::vector<int>& ms, const std::function<int(int)>& refine_rule,
                                  const std::string& fixture_dir) {
  if (ms.empty()) throw Error(ErrorCode::InvalidArgument, "the m list is empty");
  std::vector<Table1Row> rows;
  for (int m : ms) {
    if (m < 3) throw Error(ErrorCode::InvalidArgument, "m must be at least 3");
    if (!fixture_dir.empty()) {
      const auto base = std::filesystem::path(fixture_dir) / ("m" + std::to_string(m));
      if (std::filesystem::exists(base.string() + ".node")) {
        Table1Row row = table1_row(m, load_mesh(base.string(), MeshFormat::NodeEle), base.string());
        row.refine = -1;
        rows.push_back(std::move(row));
        continue;
      }
    }
    const int k = refine_rule(m);
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "refinement level must be nonnegative");
    const PolyApprox poly = inscribed_regular_polygon(find_exact("disk2d").domain, m);
    Table1Row row = table1_row(m, generate_fan_refined(poly, k));
    row.refine = k;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "m,h,A_m,actual,predicted,ratio\n";
  for (const auto& r : rows) {
    out << r.m << ',' << r.h << ',' << r.a_m << ',' << r.actual << ',' << r.predicted << ','
        << r.ratio << '\n';
  }
  return out.str();
}

std::string table1_json(const std::vector<Table1Row>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["m"] = r.m;
    j["refine"] = r.refine;
    j["mesh"] = r.mesh_source;
    j["h"] = r.h;
    j["A_m"] = r.a_m;
    j["actual"] = r.actual;
    j["predicted"] = r.predicted;
    j["ratio"] = r.ratio;
    j["certified"] = nlohmann::ordered_json::parse(bound_to_json(r.certified));
    j["poincare_ok"] = r.poincare_ok;
    if (r.reference_actual) {
      j["reference"] = {{"actual", *r.reference_actual}, {"predicted", *r.reference_predicted}};
    } else {
      j["reference"] = nullptr;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

VerifyRun verify_on_mesh(const ExactSolution& exact, const PolyApprox& poly,
                         const SimplicialMesh& mesh, FhMode fh_mode, AhStrategy strategy,
                         RhoConvention rho) {
  const DiscreteSource fh = build_fh(mesh, exact.f, fh_mode);
  VerifyRun run;
  run.certified = certify(exact.domain, poly, mesh, fh, strategy, rho);
  const FemSolution sol = solve_checked(mesh, fh);
  run.actual = actual_l2_error(exact, poly, mesh, sol);
  run.poincare_ok = poincare_holds(mesh, sol, exact.domain.diameter());
  return run;
}

ConvergenceReport verify_convergence(const std::string& exact_name, int levels) {
  const ExactSolution& exact = find_exact(exact_name);
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "at least two levels are needed");
  if (exact.domain.dim() != 2) {
    throw Error(ErrorCode::InvalidArgument,
                "no built-in mesher for '" + exact_name + "'; supply a mesh and polytope");
  }
  ConvergenceReport rep;
  rep.exact = exact_name;
  const bool square = exact.domain.kind() == DomainKind::Polygon;
  const PolyApprox poly = square ? exact_polygon(exact.domain) : inscribed_regular_polygon(exact.domain, 16);
  std::vector<double> lx, ly;
  for (int l = 0; l < levels; ++l) {
    const SimplicialMesh mesh =
        square ? generate_structured_rectangle(8 << l, 8 << l, {0, 0, 0}, {1, 1, 0})
               : generate_fan_refined(poly, l);
    const VerifyRun run = verify_on_mesh(exact, poly, mesh, FhMode::Nodal, AhStrategy::Elementwise);
    ConvergenceLevel lev;
    lev.h = run.certified.metadata.h;
    lev.elements = mesh.element_count();
    lev.actual = run.actual;
    lev.certified = run.certified.total;
    lev.poincare_ok = run.poincare_ok;
    if (*quality(mesh).nonblunt) lev.closed_form = certify_closed_form(exact.domain, poly, mesh, exact.f);
    rep.bounds_hold = rep.bounds_hold && lev.actual <= lev.certified &&
                      (!lev.closed_form || lev.actual <= *lev.closed_form);
    lx.push_back(std::log(lev.h));
    ly.push_back(std::log(lev.actual));
    rep.levels.push_back(lev);
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

std::string convergence_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["exact"] = report.exact;
  j["slope"] = report.slope;
  j["bounds_hold"] = report.bounds_hold;
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& l : report.levels) {
    nlohmann::ordered_json e;
    e["h"] = l.h;
    e["elements"] = l.elements;
    e["actual"] = l.actual;
    e["certified"] = l.certified;
    e["closed_form"] = l.closed_form ? nlohmann::ordered_json(*l.closed_form) : nlohmann::ordered_json(nullptr);
    e["ratio"] = l.certified / l.actual;
    e["poincare_ok"] = l.poincare_ok;
    levels.push_back(std::move(e));
  }
  j["levels"] = std::move(levels);
  return j.dump(2);
}

}  // namespace certifem
