#ifndef CERTIFEM_INTERP_CONSTANTS_HPP
#define CERTIFEM_INTERP_CONSTANTS_HPP

#include <cstddef>
#include <optional>
#include <string_view>

#include "certifem/geometry.hpp"
#include "certifem/mesh.hpp"

namespace certifem {

inline constexpr double kLiuConstant = 0.49293;
inline constexpr double kMinAngleConstant = 0.69711;
inline constexpr double kKobayashi3dConstant = 2.19;

// How rho(T) in the 3D bound 2.19 diam(T)^2 / rho(T) is read. Radius gives
// the larger (conservative) constant.
enum class RhoConvention { Radius, Diameter };

RhoConvention parse_rho_convention(std::string_view name);
std::string_view rho_convention_name(RhoConvention rho);

// Upper bounds for the H^1 and L^2 interpolation constants of one element.
struct ElementConstants {
  std::optional<double> e1_liu;  // 2D only
  double e1_kobayashi = 0.0;
  double e1_best = 0.0;          // min of the available E1 bounds
  double e0_bound = 0.0;         // sqrt(3/83) h_T^2 (2D) or 8 h_T^2 (3D)
};

// Mesh-wide A_h bounds.
struct GlobalConstants {
  int dim = 2;
  double a_h_elementwise = 0.0;
  std::size_t worst_element = 0;
  std::optional<double> a_h_circumradius;  // 2D: R_h
  std::optional<double> a_h_minangle;      // 2D
  std::optional<double> a_h_nonblunt;      // 2D, only for non-blunt meshes
  std::optional<double> a_h_regularity;    // 3D
  double e0_global = 0.0;
  RhoConvention rho = RhoConvention::Radius;
};

// Liu's bound at a single interior angle theta with adjacent edges alpha, beta.
double e1_liu_at_angle(double alpha, double beta, double theta);
// Liu's bound minimised over the three interior angles.
double e1_liu(const Simplex& t);
// Liu's bound at the smallest interior angle.
double e1_liu_min_angle(const Simplex& t);

// Kobayashi's triangle bound. The radicand is clamped to 0 when it is above
// -1e-12 R_T^2; below that NegativeRadicand is thrown.
double e1_kobayashi_2d(const Simplex& t);

double e1_kobayashi_3d(const Simplex& t, RhoConvention rho = RhoConvention::Radius);

ElementConstants element_constants(const Simplex& s, RhoConvention rho = RhoConvention::Radius);

double e0_global(int dim, double h);
double e0_global(const MeshQuality& q);

// 0.69711 cos^2(theta0/2) / sin(theta0/2) * h.
double minangle_bound(double theta0, double h);
// sqrt(11/60) h.
double nonblunt_bound(double h);
// 2.19 sigma h with sigma = max h_T / rho_T under the chosen convention.
double regularity_bound(const MeshQuality& q, RhoConvention rho);

GlobalConstants a_h(const SimplicialMesh& mesh, RhoConvention rho = RhoConvention::Radius);

struct RayleighResult {
  double value = 0.0;      // sqrt of the Rayleigh quotient reached
  int iterations = 0;
  bool converged = false;
  int subspace_dimension = 0;
};

// Lower bound for E1(T): maximises |v|_1 / |v|_2 over polynomials of total
// degree <= `degree` that vanish at the triangle vertices. The quadratic
// forms are integrated exactly; the largest generalised eigenvalue is found
// by power iteration (tolerance 1e-10, at most 1e4 iterations). Any iterate's
// Rayleigh quotient is a valid lower bound, converged or not.
RayleighResult rayleigh_lower_bound_detail(const Simplex& t, int degree);
double rayleigh_lower_bound(const Simplex& t, int degree);

}  // namespace certifem

#endif  // CERTIFEM_INTERP_CONSTANTS_HPP
