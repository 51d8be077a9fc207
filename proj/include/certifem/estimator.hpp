#ifndef CERTIFEM_ESTIMATOR_HPP
#define CERTIFEM_ESTIMATOR_HPP

#include <cmath>
#include <string>
#include <string_view>

#include "certifem/convex_domain.hpp"
#include "certifem/fem.hpp"
#include "certifem/interp_constants.hpp"
#include "certifem/mesh.hpp"

namespace certifem {

enum class AhStrategy { Elementwise, Circumradius, MinAngle, NonBlunt, Regularity };

AhStrategy parse_ah_strategy(std::string_view name);
std::string_view ah_strategy_name(AhStrategy s);

// Geometric Poincare bound D / (sqrt(n) pi).
double poincare_bound(int dim, double diameter);

// Multiplies every intermediate result by (1 + 1e-13) so accumulated
// rounding cannot pull a bound below its exact value.
class UpwardArithmetic {
 public:
  static constexpr double kGuard = 1e-13;

  double mul(double a, double b) { return bump(a * b); }
  double add(double a, double b) { return bump(a + b); }
  double div(double a, double b) { return bump(a / b); }
  double sqrt(double a) { return bump(std::sqrt(a)); }

  int operations() const { return ops_; }
  // (1 + 1e-13)^operations
  double guard_factor() const;

 private:
  double bump(double x) {
    ++ops_;
    return x * (1.0 + kGuard);
  }
  int ops_ = 0;
};

struct BoundMetadata {
  int dim = 2;
  std::string domain;
  double diameter = 0.0;          // D = diam(Omega)
  double domain_measure = 0.0;    // |Omega|
  double polytope_measure = 0.0;  // |Omega_delta|
  double delta = 0.0;
  double poincare = 0.0;          // C_P bound used
  AhStrategy strategy = AhStrategy::Elementwise;
  double a_h = 0.0;
  RhoConvention rho = RhoConvention::Radius;
  FhMode fh_mode = FhMode::Exact;
  double fh_norm = 0.0;           // ||f_h||_{L^2(Omega_delta)}
  double fh_perturbation = 0.0;   // bound on ||f - f_h||
  double f_sup = 0.0;
  double h = 0.0;
  std::size_t elements = 0;
  double guard_factor = 1.0;
};

// |u - u_h|_0 <= term_boundary + term_source + term_fem.
struct CertifiedBound {
  double term_boundary = 0.0;  // 1/2 D |Omega|^{1/2} delta ||f||_inf
  double term_source = 0.0;    // C_P^2 ||f - f_h||
  double term_fem = 0.0;       // A_h^2 ||f_h||
  double total = 0.0;
  BoundMetadata metadata;
};

// Throws StrategyInapplicable, MissingNormMetadata, NotInscribed or
// NonConforming when the hypotheses of the bound are not met.
CertifiedBound certify(const ConvexDomain& domain, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const SourceTerm& f, FhMode fh_mode,
                       AhStrategy strategy, RhoConvention rho = RhoConvention::Radius);

// Same, reusing an already assembled f_h.
CertifiedBound certify(const ConvexDomain& domain, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const DiscreteSource& fh,
                       AhStrategy strategy, RhoConvention rho = RhoConvention::Radius);

std::string bound_to_json(const CertifiedBound& bound);

// Rounded coefficients of the non-blunt, nodal-interpolation closed form.
struct ClosedFormCoefficients {
  double f0 = 0.1834;      // h^2 |f|_0
  double d2h2 = 9.632e-3;  // D^2 h^2 |f|_2
  double h4 = 3.486e-2;    // h^4 |f|_2
};

// The same coefficients rebuilt from 11/60, sqrt(3/83) and 2 pi^2.
ClosedFormCoefficients closed_form_reconstructed();

// Throws if a rounded coefficient is below its reconstruction or differs
// from it by more than 5e-4 relative.
void closed_form_self_test();

// 1/2 D |Omega|^{1/2} delta ||f||_inf + 0.1834 h^2 |f|_0
//   + 9.632e-3 D^2 h^2 |f|_2 + 3.486e-2 h^4 |f|_2
// for 2D non-blunt meshes. Throws NotNonBlunt or MissingNormMetadata.
double certify_closed_form(const ConvexDomain& domain, const PolyApprox& poly,
                           const SimplicialMesh& mesh, const SourceTerm& f);

}  // namespace certifem

#endif  // CERTIFEM_ESTIMATOR_HPP
