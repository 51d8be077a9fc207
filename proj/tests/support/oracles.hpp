#ifndef CERTIFEM_TEST_ORACLES_HPP
#define CERTIFEM_TEST_ORACLES_HPP

// Reference computations for the tests. They avoid the library's own
// numerics so that agreement is evidence, not tautology.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "certifem/geometry.hpp"
#include "certifem/mesh.hpp"

namespace oracle {

using certifem::Point;
using certifem::Simplex;

// Gauss-Legendre on [-1,1] by Golub-Welsch (eigen-decomposition of the
// Jacobi matrix).
std::pair<std::vector<double>, std::vector<double>> golub_welsch(int n);

// int over the segment {x >= d, |x| <= 1} of ((1 - |x|^2)/4)^2, computed as
// a tensor Gauss rule after x = cos(phi), y = sqrt(1 - x^2) t.
double segment_oracle(double d, int n = 40);

// Sum over the m segments of the regular m-gon.
double gap_oracle(int m);

// Kobayashi's triangle value via Heron's area and R = abc / (4S).
double kobayashi_heron(double a, double b, double c);

// Liu's value at each vertex angle, from the law of cosines.
double liu_law_of_cosines(double a, double b, double c);

// int over the reference triangle of x^p y^q = p! q! / (p + q + 2)!.
double monomial_triangle(int p, int q);

// Dense P1 solve with cotangent-formula stiffness and a load built from
// the three-point edge-midpoint rule (exact for quadratics times P1 only
// when f is linear; used with constant f). Returns nodal values.
std::vector<double> dense_p1_solve_constant_f(const certifem::SimplicialMesh& mesh, double f);

// Random triangle with vertices in [0,1]^2 and minimum angle at least
// min_angle (radians).
Simplex random_triangle(std::mt19937_64& rng, double min_angle = 0.0);

// Random non-blunt triangle with longest edge 1: the longest edge is
// (-1/2,0)-(1/2,0) and the apex is sampled uniformly in the admissible
// region.
Simplex random_nonblunt_unit(std::mt19937_64& rng);

// Smallest interior angle, from the law of cosines.
double min_angle(const Simplex& t);

}  // namespace oracle

#endif  // CERTIFEM_TEST_ORACLES_HPP
