#ifndef CERTIFEM_QUADRATURE_HPP
#define CERTIFEM_QUADRATURE_HPP

#include <array>
#include <vector>

#include "certifem/geometry.hpp"

namespace certifem {

// Rule on a simplex in barycentric coordinates. Weights sum to 1, so
// integral over T ~= |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  int dim = 2;
  std::vector<std::array<double, 4>> points;
  std::vector<double> weights;

  Point map(const Simplex& s, std::size_t q) const;
};

// 6-point rule exact for total degree 4 on triangles.
const QuadratureRule& triangle_degree4();

// 11-point rule exact for total degree 4 on tetrahedra (one negative weight).
const QuadratureRule& tetrahedron_degree4();

const QuadratureRule& degree4_rule(int dim);

// Collapsed (Duffy) tensor Gauss-Legendre rule on the triangle with n points
// per direction; exact for total degree 2n - 2.
QuadratureRule triangle_collapsed_gauss(int n);

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

}  // namespace certifem

#endif  // CERTIFEM_QUADRATURE_HPP
