#include "certifem/estimator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "certifem/error.hpp"

namespace certifem {

AhStrategy parse_ah_strategy(std::string_view name) {
  if (name == "elementwise") return AhStrategy::Elementwise;
  if (name == "circumradius") return AhStrategy::Circumradius;
  if (name == "minangle") return AhStrategy::MinAngle;
  if (name == "nonblunt") return AhStrategy::NonBlunt;
  if (name == "regularity") return AhStrategy::Regularity;
  throw Error(ErrorCode::InvalidArgument,
              "unknown A_h strategy '" + std::string(name) +
                  "' (elementwise, circumradius, minangle, nonblunt, regularity)");
}

std::string_view ah_strategy_name(AhStrategy s) {
  switch (s) {
    case AhStrategy::Elementwise: return "elementwise";
    case AhStrategy::Circumradius: return "circumradius";
    case AhStrategy::MinAngle: return "minangle";
    case AhStrategy::NonBlunt: return "nonblunt";
    case AhStrategy::Regularity: return "regularity";
  }
  return "?";
}

double poincare_bound(int dim, double diameter) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 3");
  if (!(diameter >= 0.0)) throw Error(ErrorCode::InvalidArgument, "diameter must be nonnegative");
  return diameter / (std::sqrt(static_cast<double>(dim)) * std::numbers::pi);
}

double UpwardArithmetic::guard_factor() const { return std::pow(1.0 + kGuard, ops_); }

namespace {

void check_dimensions(const ConvexDomain& domain, const PolyApprox& poly, const SimplicialMesh& mesh) {
  if (domain.dim() != poly.dim() || poly.dim() != mesh.dim()) {
    throw Error(ErrorCode::InvalidArgument, "domain, polytope and mesh dimensions differ");
  }
}

double select_a_h(const SimplicialMesh& mesh, AhStrategy strategy, RhoConvention rho) {
  const int n = mesh.dim();
  const auto inapplicable = [&](const std::string& why) {
    return Error(ErrorCode::StrategyInapplicable,
                 "strategy '" + std::string(ah_strategy_name(strategy)) + "' " + why);
  };
  switch (strategy) {
    case AhStrategy::Elementwise:
      return a_h(mesh, rho).a_h_elementwise;
    case AhStrategy::Circumradius:
      if (n != 2) throw inapplicable("needs a 2D mesh");
      return quality(mesh).r_h;
    case AhStrategy::MinAngle: {
      if (n != 2) throw inapplicable("needs a 2D mesh");
      const MeshQuality q = quality(mesh);
      return minangle_bound(*q.theta0, q.h);
    }
    case AhStrategy::NonBlunt: {
      if (n != 2) throw inapplicable("needs a 2D mesh");
      const MeshQuality q = quality(mesh);
      if (!*q.nonblunt) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "needs a non-blunt mesh; element " << *q.worst_blunt_element << " has an angle of "
            << q.max_angle << " rad";
        throw inapplicable(msg.str());
      }
      return nonblunt_bound(q.h);
    }
    case AhStrategy::Regularity:
      if (n != 3) throw inapplicable("needs a 3D mesh");
      return regularity_bound(quality(mesh), rho);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

}  // namespace

CertifiedBound certify(const ConvexDomain& domain, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const SourceTerm& f, FhMode fh_mode,
                       AhStrategy strategy, RhoConvention rho) {
  // Norm metadata is checked before any assembly work.
  fh_perturbation_bound(mesh, f, fh_mode);
  return certify(domain, poly, mesh, build_fh(mesh, f, fh_mode), strategy, rho);
}

CertifiedBound certify(const ConvexDomain& domain, const PolyApprox& poly,
                       const SimplicialMesh& mesh, const DiscreteSource& fh,
                       AhStrategy strategy, RhoConvention rho) {
  check_dimensions(domain, poly, mesh);
  validate_inscribed(domain, poly);
  const GapResult gap = gap_delta(domain, poly);
  check_conforms_to(mesh, poly);
  const double a = select_a_h(mesh, strategy, rho);
  const double perturbation = fh_perturbation_bound(mesh, fh.f, fh.mode);
  const double fh_norm = fh_l2_norm(mesh, fh);

  BoundMetadata md;
  md.dim = mesh.dim();
  md.domain = domain.describe();
  md.diameter = domain.diameter();
  md.domain_measure = domain.measure();
  md.polytope_measure = poly.measure();
  md.delta = gap.delta;
  md.poincare = poincare_bound(md.dim, md.diameter);
  md.strategy = strategy;
  md.a_h = a;
  md.rho = rho;
  md.fh_mode = fh.mode;
  md.fh_norm = fh_norm;
  md.fh_perturbation = perturbation;
  md.f_sup = fh.f.sup_norm;
  md.h = quality(mesh).h;
  md.elements = mesh.element_count();

  UpwardArithmetic up;
  CertifiedBound b;
  b.term_boundary = up.mul(up.mul(up.mul(0.5 * md.diameter, up.sqrt(md.domain_measure)), md.delta),
                           md.f_sup);
  b.term_source = up.mul(up.mul(md.poincare, md.poincare), perturbation);
  b.term_fem = up.mul(up.mul(a, a), fh_norm);
  b.total = b.term_boundary + b.term_source + b.term_fem;
  md.guard_factor = up.guard_factor();
  b.metadata = std::move(md);
  return b;
}

std::string bound_to_json(const CertifiedBound& b) {
  const BoundMetadata& m = b.metadata;
  nlohmann::ordered_json j;
  j["total"] = b.total;
  j["terms"] = {{"boundary", b.term_boundary}, {"source", b.term_source}, {"fem", b.term_fem}};
  j["metadata"] = {
      {"dim", m.dim},
      {"domain", m.domain},
      {"D", m.diameter},
      {"domain_measure", m.domain_measure},
      {"polytope_measure", m.polytope_measure},
      {"delta", m.delta},
      {"C_P", m.poincare},
      {"a_h_strategy", std::string(ah_strategy_name(m.strategy))},
      {"A_h", m.a_h},
      {"rho", std::string(rho_convention_name(m.rho))},
      {"fh_mode", std::string(fh_mode_name(m.fh_mode))},
      {"fh_l2_norm", m.fh_norm},
      {"f_minus_fh_bound", m.fh_perturbation},
      {"f_sup", m.f_sup},
      {"h", m.h},
      {"elements", m.elements},
      {"guard_factor", m.guard_factor},
  };
  return j.dump(2);
}

ClosedFormCoefficients closed_form_reconstructed() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double e0 = std::sqrt(3.0 / 83.0);
  ClosedFormCoefficients c;
  c.f0 = 11.0 / 60.0;
  c.d2h2 = e0 / (2.0 * pi2);
  c.h4 = 11.0 / 60.0 * e0;
  return c;
}

void closed_form_self_test() {
  const ClosedFormCoefficients rounded;
  const ClosedFormCoefficients exact = closed_form_reconstructed();
  const auto check = [](double r, double e, const char* name) {
    if (r < e || (r - e) / e > 5e-4) {
      throw Error(ErrorCode::BoundViolated,
                  std::string("closed-form coefficient ") + name + " does not match its reconstruction");
    }
  };
  check(rounded.f0, exact.f0, "h^2 |f|_0");
  check(rounded.d2h2, exact.d2h2, "D^2 h^2 |f|_2");
  check(rounded.h4, exact.h4, "h^4 |f|_2");
}

double certify_closed_form(const ConvexDomain& domain, const PolyApprox& poly,
                           const SimplicialMesh& mesh, const SourceTerm& f) {
  static const bool self_tested = (closed_form_self_test(), true);
  (void)self_tested;
  check_dimensions(domain, poly, mesh);
  if (mesh.dim() != 2) throw Error(ErrorCode::InvalidArgument, "the closed form is for 2D meshes");
  if (!f.l2_norm || !f.h2_seminorm) {
    throw Error(ErrorCode::MissingNormMetadata, "source term '" + f.name + "' lacks |f|_0 or |f|_2");
  }
  validate_inscribed(domain, poly);
  const double delta = gap_delta(domain, poly).delta;
  check_conforms_to(mesh, poly);
  const MeshQuality q = quality(mesh);
  if (!*q.nonblunt) {
    throw Error(ErrorCode::NotNonBlunt,
                "mesh is not non-blunt (element " + std::to_string(*q.worst_blunt_element) + ")");
  }

  const ClosedFormCoefficients c;
  const double d = domain.diameter();
  const double h2 = q.h * q.h;
  UpwardArithmetic up;
  const double boundary =
      up.mul(up.mul(up.mul(0.5 * d, up.sqrt(domain.measure())), delta), f.sup_norm);
  const double t0 = up.mul(up.mul(c.f0, h2), *f.l2_norm);
  const double t1 = up.mul(up.mul(up.mul(c.d2h2, d * d), h2), *f.h2_seminorm);
  const double t2 = up.mul(up.mul(c.h4, h2 * h2), *f.h2_seminorm);
  return up.add(up.add(up.add(boundary, t0), t1), t2);
}

}  // namespace certifem
