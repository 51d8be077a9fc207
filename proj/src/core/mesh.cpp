#include "certifem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "certifem/error.hpp"
#include "certifem/parallel.hpp"

namespace certifem {

namespace {

Facet sorted_facet(Facet f, int dim) {
  std::sort(f.begin(), f.begin() + dim);
  return f;
}

// Local facets of an element with vertices listed in element order.
std::vector<Facet> element_facets(const Element& el, int dim) {
  if (dim == 2) {
    return {{el[0], el[1], -1}, {el[1], el[2], -1}, {el[2], el[0], -1}};
  }
  // Faces opposite each vertex, ordered so the normal points outward for a
  // positively oriented tetrahedron.
  return {{el[1], el[3], el[2]}, {el[0], el[2], el[3]}, {el[0], el[3], el[1]},
          {el[0], el[1], el[2]}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Data lines of a Triangle/TetGen file with comments stripped.
std::vector<std::vector<std::string>> tokenized_lines(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ls >> tok) tokens.push_back(tok);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::ParseError, "bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::ParseError, "bad integer '" + s + "'");
  return v;
}

std::string node_ele_base(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.extension() == ".node" || p.extension() == ".ele") {
    return (p.parent_path() / p.stem()).string();
  }
  return path;
}

SimplicialMesh load_node_ele(const std::string& path) {
  const std::string base = node_ele_base(path);
  const auto node_lines = tokenized_lines(read_file(base + ".node"));
  const auto ele_lines = tokenized_lines(read_file(base + ".ele"));
  if (node_lines.empty() || ele_lines.empty()) throw Error(ErrorCode::ParseError, "empty .node or .ele file");

  const long n_nodes = to_long(node_lines[0].at(0));
  const int dim = node_lines[0].size() > 1 ? static_cast<int>(to_long(node_lines[0][1])) : 2;
  if (dim != 2 && dim != 3) throw Error(ErrorCode::ParseError, ".node dimension must be 2 or 3");
  if (n_nodes <= 0 || static_cast<std::size_t>(n_nodes) + 1 > node_lines.size()) {
    throw Error(ErrorCode::ParseError, ".node file is truncated");
  }
  std::vector<Point> nodes(static_cast<std::size_t>(n_nodes));
  long node_base = 0;
  for (long i = 0; i < n_nodes; ++i) {
    const auto& t = node_lines[static_cast<std::size_t>(i) + 1];
    if (static_cast<int>(t.size()) < dim + 1) throw Error(ErrorCode::ParseError, "short .node line");
    const long idx = to_long(t[0]);
    if (i == 0) node_base = idx;
    if (idx - node_base != i) throw Error(ErrorCode::ParseError, ".node indices must be consecutive");
    for (int c = 0; c < dim; ++c) nodes[static_cast<std::size_t>(i)][c] = to_double(t[static_cast<std::size_t>(c) + 1]);
  }
  if (node_base != 0 && node_base != 1) throw Error(ErrorCode::ParseError, ".node indices must start at 0 or 1");

  const long n_elems = to_long(ele_lines[0].at(0));
  const long per = ele_lines[0].size() > 1 ? to_long(ele_lines[0][1]) : dim + 1;
  if (per != dim + 1) throw Error(ErrorCode::ParseError, "only linear simplices are supported");
  if (n_elems <= 0 || static_cast<std::size_t>(n_elems) + 1 > ele_lines.size()) {
    throw Error(ErrorCode::ParseError, ".ele file is truncated");
  }
  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(n_elems));
  for (long e = 0; e < n_elems; ++e) {
    const auto& t = ele_lines[static_cast<std::size_t>(e) + 1];
    if (static_cast<long>(t.size()) < per + 1) throw Error(ErrorCode::ParseError, "short .ele line");
    Element el{-1, -1, -1, -1};
    for (long c = 0; c < per; ++c) {
      el[static_cast<std::size_t>(c)] = static_cast<int>(to_long(t[static_cast<std::size_t>(c) + 1]) - node_base);
    }
    elements.push_back(el);
  }
  return SimplicialMesh::build(dim, std::move(nodes), std::move(elements));
}

void save_node_ele(const SimplicialMesh& mesh, const std::string& path) {
  const std::string base = node_ele_base(path);
  std::ofstream node(base + ".node");
  if (!node) throw Error(ErrorCode::IoError, "cannot write " + base + ".node");
  node << std::setprecision(17);
  node << mesh.node_count() << ' ' << mesh.dim() << " 0 1\n";
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    node << i + 1;
    for (int c = 0; c < mesh.dim(); ++c) node << ' ' << mesh.nodes()[i][c];
    node << ' ' << (mesh.is_boundary_node(static_cast<int>(i)) ? 1 : 0) << '\n';
  }
  std::ofstream ele(base + ".ele");
  if (!ele) throw Error(ErrorCode::IoError, "cannot write " + base + ".ele");
  ele << mesh.element_count() << ' ' << mesh.dim() + 1 << " 0\n";
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    ele << e + 1;
    for (int c = 0; c <= mesh.dim(); ++c) ele << ' ' << mesh.elements()[e][c] + 1;
    ele << '\n';
  }
  if (!node || !ele) throw Error(ErrorCode::IoError, "write failed for " + base);
}

}  // namespace

// ---------------------------------------------------------------------------

SimplicialMesh SimplicialMesh::build(int dim, std::vector<Point> nodes,
                                     std::vector<Element> elements) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::ParseError, "mesh dimension must be 2 or 3");
  if (elements.empty()) throw Error(ErrorCode::ParseError, "mesh has no elements");
  const int n_nodes = static_cast<int>(nodes.size());
  for (const auto& p : nodes) {
    if (!is_finite(p)) throw Error(ErrorCode::ParseError, "non-finite node coordinate");
    if (dim == 2 && p[2] != 0.0) throw Error(ErrorCode::ParseError, "2D node with z != 0");
  }

  SimplicialMesh mesh;
  mesh.dim_ = dim;
  mesh.nodes_ = std::move(nodes);
  mesh.elements_ = std::move(elements);

  for (std::size_t e = 0; e < mesh.elements_.size(); ++e) {
    auto& el = mesh.elements_[e];
    for (int c = 0; c < 4; ++c) {
      if (c <= dim) {
        if (el[c] < 0 || el[c] >= n_nodes) {
          std::ostringstream msg;
          msg << "element " << e << " references node " << el[c] << " (have " << n_nodes << ")";
          throw Error(ErrorCode::ParseError, msg.str());
        }
      } else {
        el[c] = -1;
      }
    }
    std::set<int> distinct(el.begin(), el.begin() + dim + 1);
    if (static_cast<int>(distinct.size()) != dim + 1) {
      throw Error(ErrorCode::ParseError, "element " + std::to_string(e) + " repeats a node");
    }
    if (signed_measure(mesh.element(e)) < 0.0) std::swap(el[1], el[2]);
    const Simplex s = mesh.element(e);
    bool ok = signed_measure(s) > 0.0;
    if (ok) {
      try {
        certifem::measure(s);
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::InvertedElement,
                  "element " + std::to_string(e) + " has nonpositive measure");
    }
  }

  std::map<Facet, std::pair<int, Facet>> incidence;
  for (const auto& el : mesh.elements_) {
    for (const Facet& f : element_facets(el, dim)) {
      auto [it, inserted] = incidence.try_emplace(sorted_facet(f, dim), 0, f);
      if (++it->second.first > 2) {
        throw Error(ErrorCode::NonConforming, "a facet is shared by more than two elements");
      }
    }
  }
  // Boundary facets in order of first appearance.
  std::vector<std::pair<std::size_t, Facet>> ordered;
  std::map<Facet, std::size_t> first_seen;
  std::size_t counter = 0;
  for (const auto& el : mesh.elements_) {
    for (const Facet& f : element_facets(el, dim)) {
      const Facet key = sorted_facet(f, dim);
      if (incidence[key].first == 1 && first_seen.try_emplace(key, counter).second) {
        mesh.boundary_facets_.push_back(f);
      }
      ++counter;
    }
  }
  mesh.on_boundary_.assign(mesh.nodes_.size(), 0);
  for (const auto& f : mesh.boundary_facets_) {
    for (int c = 0; c < dim; ++c) mesh.on_boundary_[f[c]] = 1;
  }
  for (int i = 0; i < n_nodes; ++i) {
    if (mesh.on_boundary_[i]) mesh.boundary_nodes_.push_back(i);
  }
  return mesh;
}

Simplex SimplicialMesh::element(std::size_t e) const {
  const auto& el = elements_[e];
  Simplex s;
  s.dim = dim_;
  for (int c = 0; c <= dim_; ++c) s.vertices[c] = nodes_[el[c]];
  return s;
}

std::size_t SimplicialMesh::edge_count() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& el : elements_) {
    for (int i = 0; i <= dim_; ++i) {
      for (int j = i + 1; j <= dim_; ++j) {
        edges.emplace(std::min(el[i], el[j]), std::max(el[i], el[j]));
      }
    }
  }
  return edges.size();
}

double SimplicialMesh::measure() const {
  double total = 0.0;
  for (std::size_t e = 0; e < elements_.size(); ++e) total += signed_measure(element(e));
  return total;
}

// ---------------------------------------------------------------------------

MeshQuality quality(const SimplicialMesh& mesh) {
  const std::size_t n = mesh.element_count();
  struct PerElement {
    double h = 0, r = 0, sigma = 0, min_angle = 0, max_angle = 0;
  };
  std::vector<PerElement> per(n);
  parallel_for(n, [&](std::size_t e) {
    const Simplex s = mesh.element(e);
    PerElement& p = per[e];
    p.h = longest_edge(s);
    p.r = circumradius(s);
    p.sigma = p.h / (2.0 * inradius(s));
    if (mesh.dim() == 2) {
      const auto a = angles(s);
      p.min_angle = *std::min_element(a.begin(), a.end());
      p.max_angle = *std::max_element(a.begin(), a.end());
    }
  });

  MeshQuality q;
  q.dim = mesh.dim();
  q.element_count = n;
  q.node_count = mesh.node_count();
  q.interior_node_count = mesh.interior_node_count();
  double theta0 = std::numeric_limits<double>::infinity();
  std::size_t worst = 0;
  for (std::size_t e = 0; e < n; ++e) {
    q.h = std::max(q.h, per[e].h);
    q.r_h = std::max(q.r_h, per[e].r);
    q.sigma = std::max(q.sigma, per[e].sigma);
    theta0 = std::min(theta0, per[e].min_angle);
    if (per[e].max_angle > q.max_angle) {
      q.max_angle = per[e].max_angle;
      worst = e;
    }
  }
  if (mesh.dim() == 2) {
    q.theta0 = theta0;
    q.nonblunt = q.max_angle <= std::numbers::pi / 2.0 + kNonBluntTolerance;
    if (!*q.nonblunt) q.worst_blunt_element = worst;
  }
  return q;
}

std::string quality_to_json(const MeshQuality& q) {
  nlohmann::json j;
  j["dim"] = q.dim;
  j["h"] = q.h;
  j["R_h"] = q.r_h;
  j["sigma"] = q.sigma;
  j["element_count"] = q.element_count;
  j["node_count"] = q.node_count;
  j["interior_node_count"] = q.interior_node_count;
  if (q.theta0) j["theta0"] = *q.theta0;
  if (q.nonblunt) {
    j["nonblunt"] = *q.nonblunt;
    j["max_angle"] = q.max_angle;
  }
  if (q.worst_blunt_element) j["worst_blunt_element"] = *q.worst_blunt_element;
  return j.dump(2);
}

// ---------------------------------------------------------------------------

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "json") return MeshFormat::Json;
  if (name == "node_ele" || name == "node-ele") return MeshFormat::NodeEle;
  throw Error(ErrorCode::InvalidArgument, "unknown mesh format '" + name + "'");
}

MeshFormat guess_mesh_format(const std::string& path) {
  return std::filesystem::path(path).extension() == ".json" ? MeshFormat::Json
                                                              : MeshFormat::NodeEle;
}

SimplicialMesh parse_mesh_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    const int dim = j.at("dim").get<int>();
    if (dim != 2 && dim != 3) throw Error(ErrorCode::ParseError, "dim must be 2 or 3");
    std::vector<Point> nodes;
    for (const auto& n : j.at("nodes")) {
      if (!n.is_array() || static_cast<int>(n.size()) != dim) {
        throw Error(ErrorCode::ParseError, "node must have dim coordinates");
      }
      Point p{};
      for (int c = 0; c < dim; ++c) p[c] = n[c].get<double>();
      nodes.push_back(p);
    }
    std::vector<Element> elements;
    for (const auto& e : j.at("elements")) {
      if (!e.is_array() || static_cast<int>(e.size()) != dim + 1) {
        throw Error(ErrorCode::ParseError, "element must have dim+1 node indices");
      }
      Element el{-1, -1, -1, -1};
      for (int c = 0; c <= dim; ++c) el[c] = e[c].get<int>();
      elements.push_back(el);
    }
    return SimplicialMesh::build(dim, std::move(nodes), std::move(elements));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string mesh_to_json(const SimplicialMesh& mesh) {
  nlohmann::json j;
  j["dim"] = mesh.dim();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& p : mesh.nodes()) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < mesh.dim(); ++c) row.push_back(p[c]);
    nodes.push_back(std::move(row));
  }
  auto& elements = j["elements"] = nlohmann::json::array();
  for (const auto& el : mesh.elements()) {
    auto row = nlohmann::json::array();
    for (int c = 0; c <= mesh.dim(); ++c) row.push_back(el[c]);
    elements.push_back(std::move(row));
  }
  return j.dump();
}

SimplicialMesh load_mesh(const std::string& path, MeshFormat format) {
  if (format == MeshFormat::Json) return parse_mesh_json(read_file(path));
  return load_node_ele(path);
}

void save_mesh(const SimplicialMesh& mesh, const std::string& path, MeshFormat format) {
  if (format == MeshFormat::NodeEle) {
    save_node_ele(mesh, path);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << mesh_to_json(mesh) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

// ---------------------------------------------------------------------------

SimplicialMesh generate_fan_refined(const PolyApprox& polygon, int levels) {
  if (polygon.dim() != 2) throw Error(ErrorCode::InvalidPolygon, "fan meshes need a 2D polygon");
  if (levels < 0) throw Error(ErrorCode::InvalidArgument, "refinement levels must be >= 0");
  const Point center = polygon.centroid();
  if (!polygon.contains(center, -1e-12 * polygon.diameter())) {
    throw Error(ErrorCode::InvalidPolygon, "polygon does not strictly contain its centroid");
  }
  std::vector<Point> nodes = polygon.vertices();
  const int m = static_cast<int>(nodes.size());
  nodes.push_back(center);
  std::vector<Element> elements;
  for (int i = 0; i < m; ++i) elements.push_back({m, i, (i + 1) % m, -1});
  SimplicialMesh mesh = SimplicialMesh::build(2, std::move(nodes), std::move(elements));
  for (int k = 0; k < levels; ++k) mesh = refine_uniform(mesh);
  return mesh;
}

SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
  if (mesh.dim() != 2) throw Error(ErrorCode::InvalidArgument, "uniform refinement is 2D only");
  std::vector<Point> nodes = mesh.nodes();
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const Point& pa = nodes[key.first];
    const Point& pb = nodes[key.second];
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back(0.5 * (pa + pb));
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<Element> elements;
  elements.reserve(4 * mesh.element_count());
  for (const auto& el : mesh.elements()) {
    const int a = el[0], b = el[1], c = el[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    elements.push_back({a, ab, ca, -1});
    elements.push_back({ab, b, bc, -1});
    elements.push_back({ca, bc, c, -1});
    elements.push_back({ab, bc, ca, -1});
  }
  return SimplicialMesh::build(2, std::move(nodes), std::move(elements));
}

SimplicialMesh generate_structured_rectangle(int nx, int ny, const Point& lower,
                                             const Point& upper) {
  if (nx < 1 || ny < 1 || !(upper[0] > lower[0]) || !(upper[1] > lower[1])) {
    throw Error(ErrorCode::InvalidArgument, "bad structured mesh parameters");
  }
  std::vector<Point> nodes;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      nodes.push_back({lower[0] + (upper[0] - lower[0]) * i / nx,
                       lower[1] + (upper[1] - lower[1]) * j / ny, 0.0});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Element> elements;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), -1});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1), -1});
    }
  }
  return SimplicialMesh::build(2, std::move(nodes), std::move(elements));
}

void check_conforms_to(const SimplicialMesh& mesh, const PolyApprox& poly) {
  if (mesh.dim() != poly.dim()) throw Error(ErrorCode::NonConforming, "dimension mismatch");
  const double scale = std::max(1.0, poly.diameter());
  const double tol = 1e-10 * scale;
  const auto& pv = poly.vertices();

  auto inside_facet = [&](const PolyFacet& f, const Point& x) {
    if (std::abs(dot(f.normal, x - f.barycenter)) > tol) return false;
    if (f.vertex_count == 2) {
      const Point& a = pv[f.vertices[0]];
      const Point& b = pv[f.vertices[1]];
      const double t = dot(x - a, b - a) / dot(b - a, b - a);
      return t >= -tol && t <= 1.0 + tol;
    }
    const Point& a = pv[f.vertices[0]];
    const Point& b = pv[f.vertices[1]];
    const Point& c = pv[f.vertices[2]];
    const Point n = cross(b - a, c - a);
    const double area2 = dot(n, n);
    const double l0 = dot(cross(b - x, c - x), n) / area2;
    const double l1 = dot(cross(c - x, a - x), n) / area2;
    return l0 >= -tol && l1 >= -tol && 1.0 - l0 - l1 >= -tol;
  };

  for (std::size_t i = 0; i < mesh.boundary_facets().size(); ++i) {
    const Facet& bf = mesh.boundary_facets()[i];
    const bool found = std::any_of(poly.facets().begin(), poly.facets().end(), [&](const PolyFacet& f) {
      for (int c = 0; c < mesh.dim(); ++c) {
        if (!inside_facet(f, mesh.nodes()[bf[c]])) return false;
      }
      return true;
    });
    if (!found) {
      throw Error(ErrorCode::NonConforming,
                  "mesh boundary facet " + std::to_string(i) + " is not on the polytope boundary");
    }
  }
  const double pm = poly.measure();
  if (std::abs(mesh.measure() - pm) > 1e-10 * std::max(1.0, pm)) {
    throw Error(ErrorCode::NonConforming, "mesh does not cover the polytope");
  }
}

}  // namespace certifem
