#ifndef CERTIFEM_FEM_HPP
#define CERTIFEM_FEM_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "certifem/geometry.hpp"
#include "certifem/mesh.hpp"

namespace certifem {

// Right-hand side f of -Laplace u = f together with the norms the bounds
// need. Norms are over the exact domain and must be upper bounds.
struct SourceTerm {
  std::string name;
  std::function<double(const Point&)> evaluate;
  std::function<Point(const Point&)> gradient;  // may be empty
  double sup_norm = 0.0;                        // ||f||_{L^inf}
  std::optional<double> grad_sup_norm;          // ||grad f||_{L^inf}
  std::optional<double> h2_seminorm;            // |f|_2
  std::optional<double> l2_norm;                // |f|_0

  // Throws InvalidSourceTerm if |f(x)| exceeds sup_norm (1e-10 slack).
  double checked(const Point& x) const;

  // Every norm multiplied by c > 0.
  SourceTerm scaled(double c) const;
};

enum class FhMode { Barycentric, Nodal, Exact };

FhMode parse_fh_mode(std::string_view name);
std::string_view fh_mode_name(FhMode mode);

// The discrete source f_h: one value per element (barycentric), one per node
// (nodal), or f itself (exact, integrated by the degree-4 rule).
struct DiscreteSource {
  FhMode mode = FhMode::Exact;
  std::vector<double> values;
  SourceTerm f;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed sparse rows, column indices sorted within each row.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<int> cols;
  std::vector<double> values;

  void multiply(std::span<const double> x, std::span<double> y) const;
  double at(std::size_t i, std::size_t j) const;
  std::vector<double> diagonal() const;
  bool is_symmetric(double tol) const;

  // Duplicate entries are summed.
  static CsrMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);
};

// Reduced system over interior nodes.
struct LinearSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<int> unknown_to_node;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // ||b - Ax|| / ||b||, recomputed at exit
  bool converged = false;
};

struct FemSolution {
  std::vector<double> nodal_values;  // boundary entries are exactly 0
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::size_t unknowns = 0;
};

// Local P1 stiffness matrix |T| grad(lambda_i).grad(lambda_j).
std::array<std::array<double, 4>, 4> local_stiffness(const Simplex& s);

// Full (all-node) P1 stiffness and mass matrices.
CsrMatrix assemble_stiffness(const SimplicialMesh& mesh);
CsrMatrix assemble_mass(const SimplicialMesh& mesh);

DiscreteSource build_fh(const SimplicialMesh& mesh, const SourceTerm& f, FhMode mode);

// ||f_h||_{L^2(Omega_delta)}: exact for barycentric and nodal, degree-4
// quadrature for exact mode.
double fh_l2_norm(const SimplicialMesh& mesh, const DiscreteSource& fh);

// Load vector over all nodes, b_i = integral of f_h phi_i.
std::vector<double> assemble_load(const SimplicialMesh& mesh, const DiscreteSource& fh);

// Eliminates the boundary rows and columns (homogeneous Dirichlet data).
LinearSystem reduce_dirichlet(const SimplicialMesh& mesh, const CsrMatrix& stiffness,
                              std::span<const double> load);

// Jacobi-preconditioned conjugate gradients. Returns the best iterate with
// converged = false when maxiter is reached.
CgResult solve_cg(const CsrMatrix& a, std::span<const double> b, double tol = 1e-12,
                  int maxiter = 20000);

FemSolution solve_poisson(const SimplicialMesh& mesh, const DiscreteSource& fh,
                          double tol = 1e-12, int maxiter = 20000);

// Value of the P1 function with the given nodal values at a point of element e.
double evaluate_p1(const SimplicialMesh& mesh, std::span<const double> nodal, std::size_t e,
                   const Point& x);

// ||exact - u_h||_{L^2(mesh)} by the degree-4 rule on every element.
double l2_error_interior(const SimplicialMesh& mesh, std::span<const double> nodal,
                         const std::function<double(const Point&)>& exact);

// Exact P1 norms via the mass and stiffness matrices.
double p1_l2_norm(const SimplicialMesh& mesh, std::span<const double> nodal);
double p1_h1_seminorm(const SimplicialMesh& mesh, std::span<const double> nodal);

// ||f - f_h||_{L^2(mesh)} measured with the degree-4 rule.
double fh_error_l2(const SimplicialMesh& mesh, const DiscreteSource& fh);

// Certified upper bound for ||f - f_h||_{L^2(Omega_delta)}:
//   barycentric: n/(n+1) h |Omega_delta|^{1/2} ||grad f||_inf
//   nodal:       E0 |f|_2 with the global E0 bound
//   exact:       0
// Throws MissingNormMetadata when the needed norm is absent.
double fh_perturbation_bound(const SimplicialMesh& mesh, const SourceTerm& f, FhMode mode);

}  // namespace certifem

#endif  // CERTIFEM_FEM_HPP
