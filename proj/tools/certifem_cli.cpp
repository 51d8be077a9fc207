#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "certifem/certifem.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitViolated = 3;

struct Failure {
  int code;
};

int exit_code_for(certifem_status s) {
  switch (s) {
    case CERTIFEM_OK: return kExitOk;
    case CERTIFEM_E_IO:
    case CERTIFEM_E_PARSE: return kExitIo;
    case CERTIFEM_E_BOUND_VIOLATED: return kExitViolated;
    default: return kExitConfig;
  }
}

void check(certifem_status s) {
  if (s == CERTIFEM_OK) return;
  std::cerr << "error: " << certifem_last_error() << '\n';
  throw Failure{exit_code_for(s)};
}

[[noreturn]] void config_error(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  throw Failure{kExitConfig};
}

struct StringDeleter {
  void operator()(char* s) const { certifem_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct DomainDeleter {
  void operator()(certifem_domain* d) const { certifem_domain_free(d); }
};
struct PolyDeleter {
  void operator()(certifem_poly* p) const { certifem_poly_free(p); }
};
struct MeshDeleter {
  void operator()(certifem_mesh* m) const { certifem_mesh_free(m); }
};
using Domain = std::unique_ptr<certifem_domain, DomainDeleter>;
using Poly = std::unique_ptr<certifem_poly, PolyDeleter>;
using Mesh = std::unique_ptr<certifem_mesh, MeshDeleter>;

OwnedString take(char* s) { return OwnedString(s); }

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    throw Failure{kExitIo};
  }
}

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

Domain make_domain(const std::string& spec) {
  certifem_domain* d = nullptr;
  check(certifem_domain_from_spec(spec.c_str(), &d));
  return Domain(d);
}

// Shared mesh-source options.
struct MeshSource {
  std::string poly_path;
  std::string mesh_path;
  std::string mesh_format;
  int m = 0;
  int refine = 0;
  int n = 0;
};

void add_mesh_source(CLI::App* cmd, MeshSource& src) {
  cmd->add_option("--poly", src.poly_path, "Inscribed polytope JSON");
  cmd->add_option("--mesh", src.mesh_path, "Mesh file (json or node/ele base path)");
  cmd->add_option("--mesh-format", src.mesh_format, "json or node_ele")
      ->check(CLI::IsMember({"json", "node_ele"}));
  cmd->add_option("--m", src.m, "Vertices of the inscribed regular polygon (disk domains)")
      ->check(CLI::Range(3, 1 << 20));
  cmd->add_option("--refine", src.refine, "Uniform refinements of the fan mesh")
      ->check(CLI::Range(0, 12));
  cmd->add_option("--n", src.n, "Structured n x n mesh (rectangular polygon domains)")
      ->check(CLI::Range(1, 1 << 14));
}

Poly make_poly(const certifem_domain* domain, const MeshSource& src) {
  certifem_poly* p = nullptr;
  int dim = 0;
  check(certifem_domain_info(domain, &dim, nullptr, nullptr));
  if (!src.poly_path.empty()) {
    check(certifem_poly_load(src.poly_path.c_str(), &p));
  } else if (src.m > 0) {
    check(certifem_poly_regular(domain, src.m, &p));
  } else if (certifem_poly_exact(domain, &p) != CERTIFEM_OK) {
    config_error("this domain needs --m or --poly");
  }
  return Poly(p);
}

Mesh make_mesh(const certifem_poly* poly, const certifem_domain* domain, const MeshSource& src) {
  certifem_mesh* m = nullptr;
  if (!src.mesh_path.empty()) {
    check(certifem_mesh_load(src.mesh_path.c_str(), or_null(src.mesh_format), &m));
  } else if (src.n > 0) {
    (void)domain;
    check(certifem_mesh_rectangle(src.n, src.n, 0.0, 0.0, 1.0, 1.0, &m));
  } else {
    check(certifem_mesh_fan(poly, src.refine, &m));
  }
  return Mesh(m);
}

std::vector<int> parse_m_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      config_error("bad --m list entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified a-priori L2 error bounds for P1 finite elements on convex domains"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for sampled checks")->capture_default_str();

  // mesh
  auto* mesh_cmd = app.add_subcommand("mesh", "Generate, inspect and convert meshes");
  mesh_cmd->require_subcommand(1);

  std::string gen_shape = "regular-polygon", gen_domain = "disk:1", gen_out, gen_format, gen_poly_out;
  int gen_m = 0, gen_refine = 0, gen_nx = 0, gen_ny = 0;
  auto* gen = mesh_cmd->add_subcommand("gen", "Generate a mesh");
  gen->add_option("--shape", gen_shape, "regular-polygon or rectangle")
      ->check(CLI::IsMember({"regular-polygon", "rectangle"}))
      ->capture_default_str();
  gen->add_option("--domain", gen_domain, "Disk the polygon is inscribed in")->capture_default_str();
  gen->add_option("--m", gen_m, "Polygon vertex count")->check(CLI::Range(3, 1 << 20));
  gen->add_option("--refine", gen_refine, "Uniform refinements")->check(CLI::Range(0, 12));
  gen->add_option("--nx", gen_nx, "Rectangle cells in x")->check(CLI::Range(1, 1 << 14));
  gen->add_option("--ny", gen_ny, "Rectangle cells in y")->check(CLI::Range(1, 1 << 14));
  gen->add_option("--out", gen_out, "Output mesh path")->required();
  gen->add_option("--format", gen_format, "json or node_ele")->check(CLI::IsMember({"json", "node_ele"}));
  gen->add_option("--poly-out", gen_poly_out, "Also write the polygon as JSON");

  std::string stats_in, stats_format, stats_out;
  auto* stats = mesh_cmd->add_subcommand("stats", "Print mesh quality as JSON");
  stats->add_option("mesh", stats_in, "Mesh path")->required();
  stats->add_option("--format", stats_format, "json or node_ele")->check(CLI::IsMember({"json", "node_ele"}));
  stats->add_option("--out", stats_out, "Write the report here instead of stdout");

  std::string conv_in, conv_out, conv_from, conv_to;
  auto* convert = mesh_cmd->add_subcommand("convert", "Convert between json and node_ele");
  convert->add_option("--in", conv_in, "Input mesh")->required();
  convert->add_option("--out", conv_out, "Output mesh")->required();
  convert->add_option("--from", conv_from, "Input format")->check(CLI::IsMember({"json", "node_ele"}));
  convert->add_option("--to", conv_to, "Output format")->check(CLI::IsMember({"json", "node_ele"}));

  // certify
  std::string cert_domain, cert_f = "const:1", cert_fh = "exact", cert_strategy = "elementwise",
                           cert_rho = "radius", cert_out;
  bool cert_closed_form = false;
  MeshSource cert_src;
  auto* cert = app.add_subcommand("certify", "Certified L2 error bound");
  cert->add_option("--domain", cert_domain, "disk:R, ball:R, square or polygon:<file>")->required();
  cert->add_option("--f", cert_f, "const:c, sinsin or poly:a,b1,..,bn,q")->capture_default_str();
  cert->add_option("--fh", cert_fh, "barycentric, nodal or exact")
      ->check(CLI::IsMember({"barycentric", "nodal", "exact"}))
      ->capture_default_str();
  cert->add_option("--strategy", cert_strategy, "A_h strategy")
      ->check(CLI::IsMember({"elementwise", "circumradius", "minangle", "nonblunt", "regularity"}))
      ->capture_default_str();
  cert->add_option("--rho", cert_rho, "radius or diameter")
      ->check(CLI::IsMember({"radius", "diameter"}))
      ->capture_default_str();
  cert->add_flag("--closed-form", cert_closed_form, "Also evaluate the non-blunt closed form");
  cert->add_option("--out", cert_out, "Report path");
  add_mesh_source(cert, cert_src);

  // verify
  std::string ver_exact, ver_fh = "nodal", ver_strategy = "elementwise", ver_rho = "radius", ver_out;
  int ver_levels = 3;
  std::size_t ver_samples = 10000;
  MeshSource ver_src;
  auto* ver = app.add_subcommand("verify", "Compare bounds with errors against exact solutions");
  ver->add_option("--exact", ver_exact, "disk2d, ball3d or square2d")->required();
  ver->add_option("--levels", ver_levels, "Refinement levels of the convergence study")
      ->check(CLI::Range(2, 8))
      ->capture_default_str();
  ver->add_option("--fh", ver_fh, "barycentric, nodal or exact")
      ->check(CLI::IsMember({"barycentric", "nodal", "exact"}))
      ->capture_default_str();
  ver->add_option("--strategy", ver_strategy, "A_h strategy")
      ->check(CLI::IsMember({"elementwise", "circumradius", "minangle", "nonblunt", "regularity"}))
      ->capture_default_str();
  ver->add_option("--rho", ver_rho, "radius or diameter")
      ->check(CLI::IsMember({"radius", "diameter"}))
      ->capture_default_str();
  ver->add_option("--samples", ver_samples, "Gap samples for the barrier check")->capture_default_str();
  ver->add_option("--out", ver_out, "Report path");
  add_mesh_source(ver, ver_src);

  // table1
  std::string t1_m = "10,20,30,40,50", t1_csv, t1_json, t1_fixture;
  int t1_refine = -1;
  auto* t1 = app.add_subcommand("table1", "Disk experiment: actual and predicted L2 errors");
  t1->add_option("--m", t1_m, "Comma-separated polygon sizes")->capture_default_str();
  t1->add_option("--refine", t1_refine, "Fixed refinement level (default: ceil(log2(m/6)))");
  t1->add_option("--fixture", t1_fixture, "Directory with m<m>.node/.ele meshes");
  t1->add_option("--csv", t1_csv, "CSV output path (default stdout)");
  t1->add_option("--json", t1_json, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      Domain domain = make_domain(gen_domain);
      certifem_poly* p = nullptr;
      certifem_mesh* m = nullptr;
      if (gen_shape == "regular-polygon") {
        if (gen_m == 0) config_error("--m is required for regular-polygon");
        check(certifem_poly_regular(domain.get(), gen_m, &p));
        Poly poly(p);
        check(certifem_mesh_fan(poly.get(), gen_refine, &m));
        if (!gen_poly_out.empty()) check(certifem_poly_save(poly.get(), gen_poly_out.c_str()));
      } else {
        if (gen_nx == 0) config_error("--nx is required for rectangle");
        check(certifem_mesh_rectangle(gen_nx, gen_ny ? gen_ny : gen_nx, 0.0, 0.0, 1.0, 1.0, &m));
      }
      Mesh mesh(m);
      check(certifem_mesh_save(mesh.get(), gen_out.c_str(), or_null(gen_format)));
      std::size_t nodes = 0, elements = 0;
      check(certifem_mesh_counts(mesh.get(), &nodes, &elements));
      std::cerr << "wrote " << gen_out << " (" << nodes << " nodes, " << elements << " elements)\n";
    } else if (stats->parsed()) {
      certifem_mesh* m = nullptr;
      check(certifem_mesh_load(stats_in.c_str(), or_null(stats_format), &m));
      Mesh mesh(m);
      char* json = nullptr;
      check(certifem_mesh_quality_json(mesh.get(), &json));
      emit(take(json).get(), stats_out);
    } else if (convert->parsed()) {
      certifem_mesh* m = nullptr;
      check(certifem_mesh_load(conv_in.c_str(), or_null(conv_from), &m));
      Mesh mesh(m);
      check(certifem_mesh_save(mesh.get(), conv_out.c_str(), or_null(conv_to)));
    } else if (cert->parsed()) {
      Domain domain = make_domain(cert_domain);
      Poly poly = make_poly(domain.get(), cert_src);
      Mesh mesh = make_mesh(poly.get(), domain.get(), cert_src);
      char* json = nullptr;
      check(certifem_certify(domain.get(), poly.get(), mesh.get(), cert_f.c_str(), cert_fh.c_str(),
                             cert_strategy.c_str(), cert_rho.c_str(), nullptr, &json));
      std::string report = take(json).get();
      if (cert_closed_form) {
        double value = 0.0;
        check(certifem_closed_form(domain.get(), poly.get(), mesh.get(), cert_f.c_str(), &value));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", value);
        report = "{\n\"bound\": " + report + ",\n\"closed_form\": " + buf + "\n}";
      }
      emit(report, cert_out);
    } else if (ver->parsed()) {
      const bool single = !ver_src.mesh_path.empty() || ver_src.m > 0 || ver_src.n > 0;
      certifem_domain* d = nullptr;
      check(certifem_domain_of_exact(ver_exact.c_str(), &d));
      Domain domain(d);
      std::string report = "{\n";
      bool ok = true;
      Poly poly;
      if (single) {
        poly = make_poly(domain.get(), ver_src);
        Mesh mesh = make_mesh(poly.get(), domain.get(), ver_src);
        int holds = 0;
        char* json = nullptr;
        check(certifem_verify_mesh(ver_exact.c_str(), poly.get(), mesh.get(), ver_fh.c_str(),
                                   ver_strategy.c_str(), ver_rho.c_str(), &holds, &json));
        report += "\"run\": " + std::string(take(json).get());
        ok = holds != 0;
      } else {
        double slope = 0.0;
        int holds = 0;
        char* json = nullptr;
        check(certifem_verify_convergence(ver_exact.c_str(), ver_levels, &slope, &holds, &json));
        report += "\"convergence\": " + std::string(take(json).get());
        ok = holds != 0;
        certifem_poly* p = nullptr;
        if (ver_exact == "disk2d") {
          check(certifem_poly_regular(domain.get(), 16, &p));
          poly.reset(p);
        }
      }
      if (poly) {
        int passed = 0;
        char* json = nullptr;
        check(certifem_barrier_check(ver_exact.c_str(), poly.get(), seed, ver_samples, &passed, &json));
        report += ",\n\"barrier\": " + std::string(take(json).get());
        ok = ok && passed != 0;
      }
      report += "\n}";
      emit(report, ver_out);
      if (!ok) {
        std::cerr << "error: measured error exceeds the certified bound\n";
        return kExitViolated;
      }
    } else if (t1->parsed()) {
      const std::vector<int> ms = parse_m_list(t1_m);
      int valid = 0;
      char* csv = nullptr;
      char* json = nullptr;
      check(certifem_table1(ms.data(), ms.size(), t1_refine, or_null(t1_fixture), &valid, &csv, &json));
      OwnedString csv_text = take(csv), json_text = take(json);
      emit(csv_text.get(), t1_csv);
      if (!t1_json.empty()) emit(json_text.get(), t1_json);
      if (!valid) {
        std::cerr << "error: a measured error exceeds its bound\n";
        return kExitViolated;
      }
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return kExitOk;
}
