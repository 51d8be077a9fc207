#ifndef CERTIFEM_VERIFY_HPP
#define CERTIFEM_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "certifem/convex_domain.hpp"
#include "certifem/estimator.hpp"
#include "certifem/fem.hpp"
#include "certifem/mesh.hpp"

namespace certifem {

struct ExactSolution {
  std::string name;
  ConvexDomain domain;
  std::function<double(const Point&)> u;
  std::function<double(const Point&)> neg_laplacian;  // -Laplace u, closed form
  SourceTerm f;
  double u_l2_norm = 0.0;
};

// disk2d, ball3d and square2d.
const std::vector<ExactSolution>& registry();
// InvalidArgument for an unknown name.
const ExactSolution& find_exact(const std::string& name);

// Squared L2 norm of u = (1 - r^2)/4 over the circular segment cut off by a
// chord at distance d from the center of the unit disk.
double disk_segment_term(double d);

// Squared L2 norm of the disk2d solution over the gap between the unit disk
// and the inscribed regular m-gon. The radial integral is done in closed
// form, the angular one by adaptive Simpson (1e-14 absolute).
double gap_error_term(int m);
// Same integral over [0, pi/m], doubled.
double gap_error_term_half(int m);

// Squared L2 norm of exact.u over domain minus poly. Zero when poly is the
// domain's own polygon; disk2d and ball3d otherwise.
double gap_error_squared(const ExactSolution& exact, const PolyApprox& poly);

// sqrt(gap term + ||u - u_h||^2 over the mesh).
double actual_l2_error(const ExactSolution& exact, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const FemSolution& sol);

struct BarrierReport {
  double max_abs_u = 0.0;
  double bound = 0.0;  // 1/2 D delta ||f||_inf
  double delta = 0.0;
  std::size_t samples = 0;  // random points accepted in the gap
  Point argmax{};
  bool passed = true;
};

// Max |u| over the gap: facet points (vertices, barycenters, a grid) plus
// `samples` seeded rejection samples inside the domain and outside poly.
BarrierReport barrier_check(const ExactSolution& exact, const PolyApprox& poly,
                            std::uint64_t seed = 0, std::size_t samples = 10000);

// k = ceil(log2(m / 6)), at least 0.
int default_refine_rule(int m);

struct Table1Row {
  int m = 0;
  int refine = 0;
  double h = 0.0;
  double a_m = 0.0;  // max elementwise Kobayashi value
  double actual = 0.0;
  double predicted = 0.0;  // sqrt(pi) (A_m^2 + 2 sin^2(pi/(2m)))
  double ratio = 0.0;      // predicted / actual
  CertifiedBound certified;
  bool poincare_ok = true;  // ||u_h|| <= C_P |u_h|_1
  std::string mesh_source;  // "generated" or a fixture path
  std::optional<double> reference_actual;
  std::optional<double> reference_predicted;
};

// Published reference values for m in {10, 20, 30, 40, 50}.
std::optional<std::pair<double, double>> table1_reference(int m);

// One disk pipeline row on the given mesh of the regular m-gon.
Table1Row table1_row(int m, const SimplicialMesh& mesh, const std::string& mesh_source = "generated");

// Rows for every m. With a fixture directory, m<m>.node/.ele found there
// replace the generated mesh.
std::vector<Table1Row> run_table1(const std::vector<int>& ms,
                                  const std::function<int(int)>& refine_rule = default_refine_rule,
                                  const std::string& fixture_dir = "");

std::string table1_csv(const std::vector<Table1Row>& rows);
std::string table1_json(const std::vector<Table1Row>& rows);

struct ConvergenceLevel {
  double h = 0.0;
  std::size_t elements = 0;
  double actual = 0.0;
  double certified = 0.0;
  std::optional<double> closed_form;
  bool poincare_ok = true;
};

struct ConvergenceReport {
  std::string exact;
  std::vector<ConvergenceLevel> levels;
  double slope = 0.0;  // least-squares slope of log(actual) against log(h)
  bool bounds_hold = true;
};

// square2d: structured n x n meshes with n = 8, 16, 32, ...; disk2d: fan
// meshes of the regular m-gon refined 0, 1, 2, ... times (m = 16). Nodal
// f_h and the elementwise A_h; the closed form is added on non-blunt meshes.
ConvergenceReport verify_convergence(const std::string& exact_name, int levels = 3);

// Single run on user-supplied inputs.
struct VerifyRun {
  double actual = 0.0;
  CertifiedBound certified;
  bool poincare_ok = true;
};
VerifyRun verify_on_mesh(const ExactSolution& exact, const PolyApprox& poly,
                         const SimplicialMesh& mesh, FhMode fh_mode, AhStrategy strategy,
                         RhoConvention rho = RhoConvention::Radius);

std::string convergence_json(const ConvergenceReport& report);

}  // namespace certifem

#endif  // CERTIFEM_VERIFY_HPP
