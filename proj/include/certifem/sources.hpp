#ifndef CERTIFEM_SOURCES_HPP
#define CERTIFEM_SOURCES_HPP

#include <string>
#include <vector>

#include "certifem/convex_domain.hpp"
#include "certifem/fem.hpp"

namespace certifem {

// "disk:R", "ball:R", "square" (unit square) or "polygon:<file.json>".
ConvexDomain parse_domain_spec(const std::string& spec);

// f = c.
SourceTerm constant_source(double c, const ConvexDomain& domain);

// f = 2 pi^2 sin(pi x) sin(pi y) on the unit square.
SourceTerm sinsin_source(const ConvexDomain& domain);

// f = a + b.x + q |x|^2, coefficients {a, b_1, .., b_n, q}. Norms are over
// the domain: |f|_0 and |f|_2 exactly, the sup norms as upper bounds that
// are attained on disks and balls.
SourceTerm quadratic_source(const std::vector<double>& coefficients, const ConvexDomain& domain);

// "const:c", "sinsin" or "poly:a,b1,..,bn,q". InvalidArgument when the string
// does not fit the domain.
SourceTerm parse_source_spec(const std::string& spec, const ConvexDomain& domain);

}  // namespace certifem

#endif  // CERTIFEM_SOURCES_HPP
