#include "certifem/certifem.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "certifem/convex_domain.hpp"
#include "certifem/error.hpp"
#include "certifem/estimator.hpp"
#include "certifem/mesh.hpp"
#include "certifem/sources.hpp"
#include "certifem/verify.hpp"

struct certifem_domain {
  certifem::ConvexDomain value;
};
struct certifem_poly {
  certifem::PolyApprox value;
};
struct certifem_mesh {
  certifem::SimplicialMesh value;
};

namespace {

thread_local std::string last_error;

certifem_status fail(certifem_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <typename F>
certifem_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CERTIFEM_OK;
  } catch (const certifem::Error& e) {
    return fail(static_cast<certifem_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(CERTIFEM_E_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CERTIFEM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CERTIFEM_E_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw certifem::Error(certifem::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_string(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

certifem::MeshFormat format_of(const char* path, const char* format) {
  return format ? certifem::parse_mesh_format(format) : certifem::guess_mesh_format(path);
}

certifem::RhoConvention rho_of(const char* rho) {
  return rho ? certifem::parse_rho_convention(rho) : certifem::RhoConvention::Radius;
}

}  // namespace

extern "C" {

const char* certifem_last_error(void) { return last_error.c_str(); }

const char* certifem_status_name(certifem_status status) {
  if (status == CERTIFEM_OK) return "Ok";
  if (status == CERTIFEM_E_INTERNAL) return "Internal";
  return certifem::error_code_name(static_cast<certifem::ErrorCode>(status)).data();
}

void certifem_string_free(char* s) { std::free(s); }

certifem_status certifem_domain_from_spec(const char* spec, certifem_domain** out) {
  return guarded([&] {
    require(spec, "spec");
    require(out, "out");
    *out = new certifem_domain{certifem::parse_domain_spec(spec)};
  });
}

certifem_status certifem_domain_of_exact(const char* exact_name, certifem_domain** out) {
  return guarded([&] {
    require(exact_name, "exact_name");
    require(out, "out");
    *out = new certifem_domain{certifem::find_exact(exact_name).domain};
  });
}

certifem_status certifem_domain_info(const certifem_domain* domain, int* dim, double* diameter,
                                     double* measure) {
  return guarded([&] {
    require(domain, "domain");
    if (dim) *dim = domain->value.dim();
    if (diameter) *diameter = domain->value.diameter();
    if (measure) *measure = domain->value.measure();
  });
}

void certifem_domain_free(certifem_domain* domain) { delete domain; }

certifem_status certifem_poly_regular(const certifem_domain* disk, int m, certifem_poly** out) {
  return guarded([&] {
    require(disk, "disk");
    require(out, "out");
    *out = new certifem_poly{certifem::inscribed_regular_polygon(disk->value, m)};
  });
}

certifem_status certifem_poly_exact(const certifem_domain* polygon, certifem_poly** out) {
  return guarded([&] {
    require(polygon, "polygon");
    require(out, "out");
    *out = new certifem_poly{certifem::exact_polygon(polygon->value)};
  });
}

certifem_status certifem_poly_load(const char* path, certifem_poly** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new certifem_poly{certifem::load_polytope_json(path)};
  });
}

certifem_status certifem_poly_save(const certifem_poly* poly, const char* path) {
  return guarded([&] {
    require(poly, "poly");
    require(path, "path");
    std::ofstream f(path);
    if (!f) throw certifem::Error(certifem::ErrorCode::IoError, std::string("cannot write ") + path);
    f << certifem::polytope_to_json(poly->value) << '\n';
    if (!f) throw certifem::Error(certifem::ErrorCode::IoError, std::string("cannot write ") + path);
  });
}

void certifem_poly_free(certifem_poly* poly) { delete poly; }

certifem_status certifem_gap(const certifem_domain* domain, const certifem_poly* poly, double* delta) {
  return guarded([&] {
    require(domain, "domain");
    require(poly, "poly");
    require(delta, "delta");
    certifem::validate_inscribed(domain->value, poly->value);
    *delta = certifem::gap_delta(domain->value, poly->value).delta;
  });
}

certifem_status certifem_mesh_fan(const certifem_poly* polygon, int levels, certifem_mesh** out) {
  return guarded([&] {
    require(polygon, "polygon");
    require(out, "out");
    if (levels < 0) {
      throw certifem::Error(certifem::ErrorCode::InvalidArgument, "refinement level must be nonnegative");
    }
    *out = new certifem_mesh{certifem::generate_fan_refined(polygon->value, levels)};
  });
}

certifem_status certifem_mesh_rectangle(int nx, int ny, double x0, double y0, double x1, double y1,
                                        certifem_mesh** out) {
  return guarded([&] {
    require(out, "out");
    *out = new certifem_mesh{
        certifem::generate_structured_rectangle(nx, ny, {x0, y0, 0.0}, {x1, y1, 0.0})};
  });
}

certifem_status certifem_mesh_load(const char* path, const char* format, certifem_mesh** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new certifem_mesh{certifem::load_mesh(path, format_of(path, format))};
  });
}

certifem_status certifem_mesh_save(const certifem_mesh* mesh, const char* path, const char* format) {
  return guarded([&] {
    require(mesh, "mesh");
    require(path, "path");
    certifem::save_mesh(mesh->value, path, format_of(path, format));
  });
}

certifem_status certifem_mesh_counts(const certifem_mesh* mesh, size_t* nodes, size_t* elements) {
  return guarded([&] {
    require(mesh, "mesh");
    if (nodes) *nodes = mesh->value.node_count();
    if (elements) *elements = mesh->value.element_count();
  });
}

certifem_status certifem_mesh_quality_json(const certifem_mesh* mesh, char** json) {
  return guarded([&] {
    require(mesh, "mesh");
    require(json, "json");
    *json = dup_string(certifem::quality_to_json(certifem::quality(mesh->value)));
  });
}

void certifem_mesh_free(certifem_mesh* mesh) { delete mesh; }

certifem_status certifem_certify(const certifem_domain* domain, const certifem_poly* poly,
                                 const certifem_mesh* mesh, const char* source, const char* fh_mode,
                                 const char* strategy, const char* rho, double* total, char** json) {
  return guarded([&] {
    require(domain, "domain");
    require(poly, "poly");
    require(mesh, "mesh");
    require(source, "source");
    require(fh_mode, "fh_mode");
    require(strategy, "strategy");
    const certifem::SourceTerm f = certifem::parse_source_spec(source, domain->value);
    const auto bound = certifem::certify(domain->value, poly->value, mesh->value, f,
                                         certifem::parse_fh_mode(fh_mode),
                                         certifem::parse_ah_strategy(strategy), rho_of(rho));
    if (total) *total = bound.total;
    set_string(json, certifem::bound_to_json(bound));
  });
}

certifem_status certifem_closed_form(const certifem_domain* domain, const certifem_poly* poly,
                                     const certifem_mesh* mesh, const char* source, double* value) {
  return guarded([&] {
    require(domain, "domain");
    require(poly, "poly");
    require(mesh, "mesh");
    require(source, "source");
    require(value, "value");
    const certifem::SourceTerm f = certifem::parse_source_spec(source, domain->value);
    *value = certifem::certify_closed_form(domain->value, poly->value, mesh->value, f);
  });
}

certifem_status certifem_verify_mesh(const char* exact_name, const certifem_poly* poly,
                                     const certifem_mesh* mesh, const char* fh_mode,
                                     const char* strategy, const char* rho, int* bound_holds,
                                     char** json) {
  return guarded([&] {
    require(exact_name, "exact_name");
    require(poly, "poly");
    require(mesh, "mesh");
    const auto& exact = certifem::find_exact(exact_name);
    const auto run = certifem::verify_on_mesh(
        exact, poly->value, mesh->value, certifem::parse_fh_mode(fh_mode ? fh_mode : "nodal"),
        certifem::parse_ah_strategy(strategy ? strategy : "elementwise"), rho_of(rho));
    const bool holds = run.actual <= run.certified.total;
    if (bound_holds) *bound_holds = holds ? 1 : 0;
    nlohmann::ordered_json j;
    j["exact"] = exact.name;
    j["actual"] = run.actual;
    j["certified"] = run.certified.total;
    j["ratio"] = run.certified.total / run.actual;
    j["bound_holds"] = holds;
    j["poincare_ok"] = run.poincare_ok;
    j["bound"] = nlohmann::ordered_json::parse(certifem::bound_to_json(run.certified));
    set_string(json, j.dump(2));
  });
}

certifem_status certifem_verify_convergence(const char* exact_name, int levels, double* slope,
                                            int* bounds_hold, char** json) {
  return guarded([&] {
    require(exact_name, "exact_name");
    const auto rep = certifem::verify_convergence(exact_name, levels);
    if (slope) *slope = rep.slope;
    if (bounds_hold) *bounds_hold = rep.bounds_hold ? 1 : 0;
    set_string(json, certifem::convergence_json(rep));
  });
}

certifem_status certifem_barrier_check(const char* exact_name, const certifem_poly* poly,
                                       uint64_t seed, size_t samples, int* passed, char** json) {
  return guarded([&] {
    require(exact_name, "exact_name");
    require(poly, "poly");
    const auto rep = certifem::barrier_check(certifem::find_exact(exact_name), poly->value, seed, samples);
    if (passed) *passed = rep.passed ? 1 : 0;
    nlohmann::ordered_json j;
    j["max_abs_u"] = rep.max_abs_u;
    j["bound"] = rep.bound;
    j["delta"] = rep.delta;
    j["samples"] = rep.samples;
    j["argmax"] = {rep.argmax[0], rep.argmax[1], rep.argmax[2]};
    j["passed"] = rep.passed;
    set_string(json, j.dump(2));
  });
}

certifem_status certifem_gap_error_term(int m, double* value) {
  return guarded([&] {
    require(value, "value");
    *value = certifem::gap_error_term(m);
  });
}

certifem_status certifem_table1(const int* ms, size_t count, int refine, const char* fixture_dir,
                                int* all_valid, char** csv, char** json) {
  return guarded([&] {
    require(ms, "ms");
    std::vector<int> list(ms, ms + count);
    std::function<int(int)> rule = certifem::default_refine_rule;
    if (refine >= 0) rule = [refine](int) { return refine; };
    const auto rows = certifem::run_table1(list, rule, fixture_dir ? fixture_dir : "");
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.actual <= r.predicted && r.actual <= r.certified.total;
    if (all_valid) *all_valid = ok ? 1 : 0;
    set_string(csv, certifem::table1_csv(rows));
    set_string(json, certifem::table1_json(rows));
  });
}

}  // extern "C"
