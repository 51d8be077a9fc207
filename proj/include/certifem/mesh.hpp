#ifndef CERTIFEM_MESH_HPP
#define CERTIFEM_MESH_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "certifem/convex_domain.hpp"
#include "certifem/geometry.hpp"

namespace certifem {

using Element = std::array<int, 4>;  // entries past dim+1 are -1
using Facet = std::array<int, 3>;    // entries past dim are -1

// Conforming simplicial mesh. Construct through build(), which validates
// connectivity, fixes orientation and derives the boundary from facet
// incidence counts.
class SimplicialMesh {
 public:
  // Throws ParseError (index out of range), NonConforming (facet shared by
  // more than two elements) or InvertedElement (zero measure).
  static SimplicialMesh build(int dim, std::vector<Point> nodes,
                              std::vector<Element> elements);

  int dim() const { return dim_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t element_count() const { return elements_.size(); }
  Simplex element(std::size_t e) const;

  const std::vector<Facet>& boundary_facets() const { return boundary_facets_; }
  // Sorted node indices incident to boundary facets.
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
  bool is_boundary_node(int node) const { return on_boundary_[node] != 0; }
  std::size_t interior_node_count() const { return nodes_.size() - boundary_nodes_.size(); }

  // Number of distinct edges.
  std::size_t edge_count() const;
  double measure() const;

 private:
  int dim_ = 2;
  std::vector<Point> nodes_;
  std::vector<Element> elements_;
  std::vector<Facet> boundary_facets_;
  std::vector<int> boundary_nodes_;
  std::vector<char> on_boundary_;
};

struct MeshQuality {
  int dim = 2;
  double h = 0.0;                 // max longest edge
  double r_h = 0.0;               // max circumradius
  std::optional<double> theta0;   // min interior angle (2D)
  double sigma = 0.0;             // max h_T / rho_T, rho_T = 2 * inradius
  std::optional<bool> nonblunt;   // 2D
  std::optional<std::size_t> worst_blunt_element;  // element with the largest angle above pi/2
  double max_angle = 0.0;         // 2D
  std::size_t element_count = 0;
  std::size_t node_count = 0;
  std::size_t interior_node_count = 0;
};

MeshQuality quality(const SimplicialMesh& mesh);
std::string quality_to_json(const MeshQuality& q);

enum class MeshFormat { Json, NodeEle };

// "json" or "node_ele"; ParseError otherwise.
MeshFormat parse_mesh_format(const std::string& name);
// From the file extension: .json -> Json, .node/.ele or no extension -> NodeEle.
MeshFormat guess_mesh_format(const std::string& path);

// JSON: {"dim":2,"nodes":[[x,y],...],"elements":[[i,j,k],...]} with 0-based
// indices. node_ele: Triangle/TetGen style <base>.node and <base>.ele,
// written 1-based, read with either base. Any boundary information in the
// files is ignored.
SimplicialMesh load_mesh(const std::string& path, MeshFormat format);
void save_mesh(const SimplicialMesh& mesh, const std::string& path, MeshFormat format);
SimplicialMesh parse_mesh_json(const std::string& text);
std::string mesh_to_json(const SimplicialMesh& mesh);

// Fan from the polygon centroid (one triangle per polygon edge), followed by
// `levels` rounds of uniform midpoint refinement.
SimplicialMesh generate_fan_refined(const PolyApprox& polygon, int levels);

// Splits every triangle into four similar children through edge midpoints.
SimplicialMesh refine_uniform(const SimplicialMesh& mesh);

// nx * ny cells of [lower, upper], each cut along the (i,j)-(i+1,j+1)
// diagonal into two right triangles.
SimplicialMesh generate_structured_rectangle(int nx, int ny, const Point& lower,
                                             const Point& upper);

// Every boundary facet of the mesh must lie inside a facet of the polytope
// and the mesh must cover the polytope. Throws NonConforming.
void check_conforms_to(const SimplicialMesh& mesh, const PolyApprox& poly);

}  // namespace certifem

#endif  // CERTIFEM_MESH_HPP
