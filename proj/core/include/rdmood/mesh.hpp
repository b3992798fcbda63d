#pragma once

// Conforming segment meshes (Dim=1) and triangulations (Dim=2) with a global
// continuous DoF numbering for Bernstein elements. Global DoFs are identified
// by their barycentric multi-index attached to global vertex ids, which makes
// vertex/edge DoF deduplication (and 1D periodic identification) automatic.

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdmood/basis.hpp"
#include "rdmood/euler.hpp"

namespace rdmood {

enum class BcTag { periodic, transmissive, wall };

inline std::string to_string(BcTag t) {
  switch (t) {
    case BcTag::periodic: return "periodic";
    case BcTag::transmissive: return "transmissive";
    case BcTag::wall: return "wall";
  }
  return "?";
}

inline BcTag bc_tag_from_string(const std::string& s) {
  if (s == "periodic") return BcTag::periodic;
  if (s == "transmissive") return BcTag::transmissive;
  if (s == "wall") return BcTag::wall;
  throw std::runtime_error("unknown boundary tag '" + s + "' (expected periodic|transmissive|wall)");
}

template <int Dim>
struct CellGeometry {
  double measure = 0.0;
  SpaceVec<Dim> centroid = SpaceVec<Dim>::Zero();
  std::array<SpaceVec<Dim>, Dim + 1> grad_lambda{};
  std::array<SpaceVec<Dim>, Dim + 1> face_normal{};  // outward unit normals
  std::array<double, Dim + 1> face_measure{};
  double char_length = 0.0;  // |K|^{1/d}
};

template <int Dim>
struct MeshInput {
  std::vector<SpaceVec<Dim>> vertices;
  std::vector<std::array<int, Dim + 1>> cells;
  std::vector<std::pair<std::array<int, Dim>, BcTag>> boundary;  // face vertices + tag
};

template <int Dim>
class Mesh {
 public:
  struct InteriorFace {
    std::array<int, 2> cell;
    std::array<int, 2> local_face;
    // true if the side's local face parameterization runs along the canonical
    // (ascending global vertex id) direction; always true in 1D.
    std::array<bool, 2> aligned;
  };
  struct BoundaryFace {
    int cell;
    int local_face;
    BcTag tag;
  };

  Mesh(MeshInput<Dim> in, int degree);

  int degree() const { return element_.degree(); }
  const BernsteinElement<Dim>& element() const { return element_; }

  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_dofs() const { return n_dofs_; }
  int n_dof_per_cell() const { return element_.n_dof(); }

  const std::vector<SpaceVec<Dim>>& vertices() const { return vertices_; }
  const std::vector<std::array<int, Dim + 1>>& cells() const { return cells_; }
  const std::vector<int>& cell_dofs(int k) const { return cell_dofs_[k]; }
  const SpaceVec<Dim>& dof_coord(int d) const { return dof_coords_[d]; }
  const CellGeometry<Dim>& geometry(int k) const { return geom_[k]; }

  const std::vector<InteriorFace>& interior_faces() const { return interior_faces_; }
  const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }

  /// V(K): cells sharing at least one vertex with K (K itself excluded).
  const std::vector<int>& vertex_neighbors(int k) const { return vertex_neighbors_[k]; }
  /// W(K): cells sharing a face with K.
  const std::vector<int>& edge_neighbors(int k) const { return edge_neighbors_[k]; }
  /// Cells containing a given global DoF.
  const std::vector<int>& dof_cells(int d) const { return dof_cells_[d]; }

  /// Median dual measure |S_sigma| = (1/N_DoF) sum_{K contains sigma} |K|.
  const std::vector<double>& s_sigma() const { return s_sigma_; }
  /// Aggregated lumped mass |C_sigma| = sum_{K contains sigma} int_K phi_sigma.
  const std::vector<double>& c_sigma() const { return c_sigma_; }

  double total_measure() const { return total_measure_; }

 private:
  void build_geometry();
  void build_dofs();
  void build_faces(const std::vector<std::pair<std::array<int, Dim>, BcTag>>& boundary);
  void build_neighborhoods();
  void build_dual_measures();

  int vertex_alias(int v) const { return vertex_alias_.empty() ? v : vertex_alias_[v]; }

  BernsteinElement<Dim> element_;
  std::vector<SpaceVec<Dim>> vertices_;
  std::vector<std::array<int, Dim + 1>> cells_;
  std::vector<int> vertex_alias_;  // periodic identification (1D); empty if unused

  std::vector<CellGeometry<Dim>> geom_;
  std::vector<std::vector<int>> cell_dofs_;
  std::vector<SpaceVec<Dim>> dof_coords_;
  int n_dofs_ = 0;

  std::vector<InteriorFace> interior_faces_;
  std::vector<BoundaryFace> boundary_faces_;
  std::vector<std::vector<int>> vertex_neighbors_;
  std::vector<std::vector<int>> edge_neighbors_;
  std::vector<std::vector<int>> dof_cells_;
  std::vector<double> s_sigma_;
  std::vector<double> c_sigma_;
  double total_measure_ = 0.0;
};

template <int Dim>
double characteristic_length(const CellGeometry<Dim>& g) {
  return g.char_length;
}

Mesh<1> build_line_mesh(double a, double b, int n_cells, int degree,
                        BcTag left = BcTag::transmissive, BcTag right = BcTag::transmissive);

Mesh<2> build_structured_tri_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                                  int degree, BcTag tag = BcTag::transmissive);

// --- mesh file I/O (format documented in the README) ---
int mesh_file_dimension(const std::string& path);
Mesh<1> load_mesh_1d(const std::string& path, int degree);
Mesh<2> load_mesh_2d(const std::string& path, int degree);
void save_mesh(const Mesh<1>& mesh, const std::string& path);
void save_mesh(const Mesh<2>& mesh, const std::string& path);

// --- implementation ---

template <int Dim>
Mesh<Dim>::Mesh(MeshInput<Dim> in, int degree)
    : element_(degree), vertices_(std::move(in.vertices)), cells_(std::move(in.cells)) {
  if (cells_.empty()) throw std::runtime_error("mesh has no cells");
  for (const auto& c : cells_)
    for (int v : c)
      if (v < 0 || v >= n_vertices()) throw std::runtime_error("cell references invalid vertex");
  {
    std::vector<std::array<int, Dim + 1>> sorted_cells = cells_;
    for (auto& c : sorted_cells) std::sort(c.begin(), c.end());
    std::sort(sorted_cells.begin(), sorted_cells.end());
    if (std::adjacent_find(sorted_cells.begin(), sorted_cells.end()) != sorted_cells.end())
      throw std::runtime_error("duplicated cell in mesh");
  }

  // 1D periodic endpoints are identified before DoF numbering.
  std::vector<std::pair<std::array<int, Dim>, BcTag>> boundary = std::move(in.boundary);
  bool any_periodic = false;
  for (auto& [verts, tag] : boundary) any_periodic |= (tag == BcTag::periodic);
  if (any_periodic) {
    if constexpr (Dim != 1)
      throw std::runtime_error("periodic boundaries are only supported for 1D meshes");
    std::vector<int> pv;
    for (auto& [verts, tag] : boundary)
      if (tag == BcTag::periodic) pv.push_back(verts[0]);
    if (pv.size() != 2) throw std::runtime_error("1D periodic mesh needs exactly 2 tagged vertices");
    vertex_alias_.resize(n_vertices());
    for (int v = 0; v < n_vertices(); ++v) vertex_alias_[v] = v;
    vertex_alias_[std::max(pv[0], pv[1])] = std::min(pv[0], pv[1]);
  }

  build_geometry();
  build_dofs();
  build_faces(boundary);
  build_neighborhoods();
  build_dual_measures();
}

template <>
inline void Mesh<1>::build_geometry() {
  geom_.resize(n_cells());
  total_measure_ = 0.0;
  for (int k = 0; k < n_cells(); ++k) {
    auto& c = cells_[k];
    double a = vertices_[c[0]][0], b = vertices_[c[1]][0];
    if (b < a) std::swap(c[0], c[1]), std::swap(a, b);
    const double h = b - a;
    if (h <= 0.0) throw std::runtime_error("degenerate 1D cell");
    auto& g = geom_[k];
    g.measure = h;
    g.centroid[0] = 0.5 * (a + b);
    g.grad_lambda[0][0] = -1.0 / h;
    g.grad_lambda[1][0] = 1.0 / h;
    g.face_normal[0][0] = -1.0;  // face f sits at vertex f
    g.face_normal[1][0] = 1.0;
    g.face_measure = {1.0, 1.0};
    g.char_length = h;
    total_measure_ += h;
  }
}

template <>
inline void Mesh<2>::build_geometry() {
  geom_.resize(n_cells());
  total_measure_ = 0.0;
  for (int k = 0; k < n_cells(); ++k) {
    auto& c = cells_[k];
    auto signed_area = [&]() {
      const auto e1 = vertices_[c[1]] - vertices_[c[0]];
      const auto e2 = vertices_[c[2]] - vertices_[c[0]];
      return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
    };
    if (signed_area() < 0.0) std::swap(c[1], c[2]);
    const double area = signed_area();
    if (area <= 0.0) throw std::runtime_error("degenerate triangle");
    auto& g = geom_[k];
    g.measure = area;
    g.centroid = (vertices_[c[0]] + vertices_[c[1]] + vertices_[c[2]]) / 3.0;
    const auto e1 = vertices_[c[1]] - vertices_[c[0]];
    const auto e2 = vertices_[c[2]] - vertices_[c[0]];
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    g.grad_lambda[1] = SpaceVec<2>(e2[1] / det, -e2[0] / det);
    g.grad_lambda[2] = SpaceVec<2>(-e1[1] / det, e1[0] / det);
    g.grad_lambda[0] = -g.grad_lambda[1] - g.grad_lambda[2];
    for (int f = 0; f < 3; ++f) {
      const auto pa = vertices_[c[(f + 1) % 3]];
      const auto pb = vertices_[c[(f + 2) % 3]];
      const SpaceVec<2> tang = pb - pa;
      g.face_measure[f] = tang.norm();
      SpaceVec<2> nrm(tang[1], -tang[0]);
      nrm /= g.face_measure[f];
      if (nrm.dot(pa - vertices_[c[f]]) < 0.0) nrm = -nrm;
      g.face_normal[f] = nrm;
    }
    g.char_length = std::sqrt(area);
    total_measure_ += area;
  }
}

template <int Dim>
void Mesh<Dim>::build_dofs() {
  const int nd = element_.n_dof();
  cell_dofs_.assign(n_cells(), {});
  std::map<std::vector<std::pair<int, int>>, int> key_to_dof;
  for (int k = 0; k < n_cells(); ++k) {
    cell_dofs_[k].resize(nd);
    for (int i = 0; i < nd; ++i) {
      const auto& a = element_.multi_index(i);
      std::vector<std::pair<int, int>> key;
      for (int v = 0; v <= Dim; ++v)
        if (a[v] > 0) key.push_back({vertex_alias(cells_[k][v]), a[v]});
      std::sort(key.begin(), key.end());
      auto [it, inserted] = key_to_dof.try_emplace(key, n_dofs_);
      if (inserted) {
        SpaceVec<Dim> x = SpaceVec<Dim>::Zero();
        const auto node = element_.node(i);
        for (int v = 0; v <= Dim; ++v) x += node[v] * vertices_[cells_[k][v]];
        dof_coords_.push_back(x);
        ++n_dofs_;
      }
      cell_dofs_[k][i] = it->second;
    }
  }
  dof_cells_.assign(n_dofs_, {});
  for (int k = 0; k < n_cells(); ++k)
    for (int d : cell_dofs_[k])
      if (dof_cells_[d].empty() || dof_cells_[d].back() != k) dof_cells_[d].push_back(k);
}

template <int Dim>
void Mesh<Dim>::build_faces(const std::vector<std::pair<std::array<int, Dim>, BcTag>>& boundary) {
  // key: sorted aliased face vertices -> (cell, local_face) occurrences
  std::map<std::array<int, Dim>, std::vector<std::pair<int, int>>> face_map;
  for (int k = 0; k < n_cells(); ++k) {
    for (int f = 0; f <= Dim; ++f) {
      std::array<int, Dim> fv;
      if constexpr (Dim == 1) {
        fv = {vertex_alias(cells_[k][f])};
      } else {
        fv = {vertex_alias(cells_[k][(f + 1) % 3]), vertex_alias(cells_[k][(f + 2) % 3])};
        if (fv[0] > fv[1]) std::swap(fv[0], fv[1]);
      }
      face_map[fv].push_back({k, f});
    }
  }

  std::map<std::array<int, Dim>, BcTag> tag_map;
  for (const auto& [verts, tag] : boundary) {
    if (tag == BcTag::periodic) continue;  // already folded into the topology
    std::array<int, Dim> fv;
    for (int i = 0; i < Dim; ++i) fv[i] = vertex_alias(verts[i]);
    if constexpr (Dim == 2)
      if (fv[0] > fv[1]) std::swap(fv[0], fv[1]);
    tag_map[fv] = tag;
  }

  for (const auto& [fv, occ] : face_map) {
    if (occ.size() == 2) {
      InteriorFace face;
      face.cell = {occ[0].first, occ[1].first};
      face.local_face = {occ[0].second, occ[1].second};
      for (int s = 0; s < 2; ++s) {
        if constexpr (Dim == 1) {
          face.aligned[s] = true;
        } else {
          const int first_local = (face.local_face[s] + 1) % 3;
          face.aligned[s] = (vertex_alias(cells_[face.cell[s]][first_local]) == fv[0]);
        }
      }
      interior_faces_.push_back(face);
    } else if (occ.size() == 1) {
      auto it = tag_map.find(fv);
      if (it == tag_map.end())
        throw std::runtime_error("untagged boundary face in mesh");
      boundary_faces_.push_back({occ[0].first, occ[0].second, it->second});
      tag_map.erase(it);
    } else {
      throw std::runtime_error("nonconforming mesh: face shared by more than two cells");
    }
  }
  if (!tag_map.empty())
    throw std::runtime_error("boundary tag refers to a face that is not on the boundary");
}

template <int Dim>
void Mesh<Dim>::build_neighborhoods() {
  std::map<int, std::vector<int>> vertex_cells;
  for (int k = 0; k < n_cells(); ++k)
    for (int v = 0; v <= Dim; ++v) vertex_cells[vertex_alias(cells_[k][v])].push_back(k);

  vertex_neighbors_.assign(n_cells(), {});
  for (int k = 0; k < n_cells(); ++k) {
    std::vector<int> nb;
    for (int v = 0; v <= Dim; ++v) {
      const auto& vc = vertex_cells[vertex_alias(cells_[k][v])];
      nb.insert(nb.end(), vc.begin(), vc.end());
    }
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    nb.erase(std::remove(nb.begin(), nb.end(), k), nb.end());
    vertex_neighbors_[k] = std::move(nb);
  }

  edge_neighbors_.assign(n_cells(), {});
  for (const auto& f : interior_faces_) {
    edge_neighbors_[f.cell[0]].push_back(f.cell[1]);
    edge_neighbors_[f.cell[1]].push_back(f.cell[0]);
  }
  for (auto& v : edge_neighbors_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

template <int Dim>
void Mesh<Dim>::build_dual_measures() {
  s_sigma_.assign(n_dofs_, 0.0);
  c_sigma_.assign(n_dofs_, 0.0);
  const auto& lumped = element_.lumped_ref();
  for (int k = 0; k < n_cells(); ++k) {
    const double vol = geom_[k].measure;
    for (int i = 0; i < element_.n_dof(); ++i) {
      s_sigma_[cell_dofs_[k][i]] += vol / element_.n_dof();
      c_sigma_[cell_dofs_[k][i]] += vol * lumped[i];
    }
  }
}

}  // namespace rdmood
