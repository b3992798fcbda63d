#include "rdmood/mesh.hpp"

#include <fstream>
#include <sstream>

namespace rdmood {

namespace {

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file '" + path + "'");
  return in;
}

// Reads the next non-empty, non-comment line into a string stream.
bool next_line(std::istream& in, std::istringstream& out) {
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ss(line);
    std::string tok;
    if (ss >> tok) {
      out = std::istringstream(line);
      return true;
    }
  }
  return false;
}

struct Header {
  int dim, n_vertices, n_cells, n_boundary;
};

Header read_header(std::istream& in, const std::string& path) {
  std::istringstream ss;
  if (!next_line(in, ss)) throw std::runtime_error("empty mesh file '" + path + "'");
  Header h;
  if (!(ss >> h.dim >> h.n_vertices >> h.n_cells >> h.n_boundary))
    throw std::runtime_error("malformed mesh header in '" + path +
                             "' (expected: dim n_vertices n_cells n_boundary_faces)");
  if (h.dim != 1 && h.dim != 2)
    throw std::runtime_error("unsupported mesh dimension " + std::to_string(h.dim));
  if (h.n_vertices <= 0 || h.n_cells <= 0 || h.n_boundary < 0)
    throw std::runtime_error("invalid counts in mesh header of '" + path + "'");
  return h;
}

template <int Dim>
MeshInput<Dim> read_body(std::istream& in, const Header& h, const std::string& path) {
  MeshInput<Dim> input;
  input.vertices.resize(h.n_vertices);
  for (int v = 0; v < h.n_vertices; ++v) {
    std::istringstream ss;
    if (!next_line(in, ss)) throw std::runtime_error("unexpected end of file reading vertices");
    for (int d = 0; d < Dim; ++d)
      if (!(ss >> input.vertices[v][d]))
        throw std::runtime_error("malformed vertex line " + std::to_string(v) + " in '" + path + "'");
  }
  input.cells.resize(h.n_cells);
  for (int k = 0; k < h.n_cells; ++k) {
    std::istringstream ss;
    if (!next_line(in, ss)) throw std::runtime_error("unexpected end of file reading cells");
    for (int v = 0; v <= Dim; ++v)
      if (!(ss >> input.cells[k][v]))
        throw std::runtime_error("malformed cell line " + std::to_string(k) + " in '" + path + "'");
  }
  input.boundary.resize(h.n_boundary);
  for (int f = 0; f < h.n_boundary; ++f) {
    std::istringstream ss;
    if (!next_line(in, ss))
      throw std::runtime_error("unexpected end of file reading boundary faces");
    std::string tag;
    for (int v = 0; v < Dim; ++v)
      if (!(ss >> input.boundary[f].first[v]))
        throw std::runtime_error("malformed boundary line " + std::to_string(f) + " in '" + path + "'");
    if (!(ss >> tag))
      throw std::runtime_error("missing boundary tag on line " + std::to_string(f) + " in '" + path + "'");
    input.boundary[f].second = bc_tag_from_string(tag);
  }
  return input;
}

template <int Dim>
void write_mesh(const Mesh<Dim>& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.precision(17);
  out << Dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_cells() << ' '
      << mesh.boundary_faces().size() << '\n';
  for (const auto& v : mesh.vertices()) {
    for (int d = 0; d < Dim; ++d) out << (d ? " " : "") << v[d];
    out << '\n';
  }
  for (const auto& c : mesh.cells()) {
    for (int v = 0; v <= Dim; ++v) out << (v ? " " : "") << c[v];
    out << '\n';
  }
  for (const auto& f : mesh.boundary_faces()) {
    const auto& c = mesh.cells()[f.cell];
    if constexpr (Dim == 1) {
      out << c[f.local_face];
    } else {
      out << c[(f.local_face + 1) % 3] << ' ' << c[(f.local_face + 2) % 3];
    }
    out << ' ' << to_string(f.tag) << '\n';
  }
}

}  // namespace

int mesh_file_dimension(const std::string& path) {
  auto in = open_for_read(path);
  return read_header(in, path).dim;
}

Mesh<1> load_mesh_1d(const std::string& path, int degree) {
  auto in = open_for_read(path);
  const Header h = read_header(in, path);
  if (h.dim != 1) throw std::runtime_error("'" + path + "' is not a 1D mesh");
  return Mesh<1>(read_body<1>(in, h, path), degree);
}

Mesh<2> load_mesh_2d(const std::string& path, int degree) {
  auto in = open_for_read(path);
  const Header h = read_header(in, path);
  if (h.dim != 2) throw std::runtime_error("'" + path + "' is not a 2D mesh");
  return Mesh<2>(read_body<2>(in, h, path), degree);
}

void save_mesh(const Mesh<1>& mesh, const std::string& path) { write_mesh<1>(mesh, path); }
void save_mesh(const Mesh<2>& mesh, const std::string& path) { write_mesh<2>(mesh, path); }

Mesh<1> build_line_mesh(double a, double b, int n_cells, int degree, BcTag left, BcTag right) {
  if (!(b > a) || n_cells < 1) throw std::runtime_error("invalid line mesh parameters");
  if ((left == BcTag::periodic) != (right == BcTag::periodic))
    throw std::runtime_error("periodic boundary must be applied to both ends");
  MeshInput<1> input;
  input.vertices.resize(n_cells + 1);
  for (int v = 0; v <= n_cells; ++v)
    input.vertices[v][0] = a + (b - a) * static_cast<double>(v) / n_cells;
  input.cells.resize(n_cells);
  for (int k = 0; k < n_cells; ++k) input.cells[k] = {k, k + 1};
  input.boundary = {{{0}, left}, {{n_cells}, right}};
  return Mesh<1>(std::move(input), degree);
}

Mesh<2> build_structured_tri_mesh(double x0, double x1, double y0, double y1, int nx, int ny,
                                  int degree, BcTag tag) {
  if (!(x1 > x0) || !(y1 > y0) || nx < 1 || ny < 1)
    throw std::runtime_error("invalid structured mesh parameters");
  if (tag == BcTag::periodic)
    throw std::runtime_error("periodic boundaries are only supported for 1D meshes");
  MeshInput<2> input;
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  input.vertices.resize((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      input.vertices[vid(i, j)] = SpaceVec<2>(x0 + (x1 - x0) * static_cast<double>(i) / nx,
                                              y0 + (y1 - y0) * static_cast<double>(j) / ny);
  // Alternating diagonals for a more isotropic triangulation.
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {
        input.cells.push_back({v00, v10, v11});
        input.cells.push_back({v00, v11, v01});
      } else {
        input.cells.push_back({v00, v10, v01});
        input.cells.push_back({v10, v11, v01});
      }
    }
  }
  for (int i = 0; i < nx; ++i) {
    input.boundary.push_back({{vid(i, 0), vid(i + 1, 0)}, tag});
    input.boundary.push_back({{vid(i, ny), vid(i + 1, ny)}, tag});
  }
  for (int j = 0; j < ny; ++j) {
    input.boundary.push_back({{vid(0, j), vid(0, j + 1)}, tag});
    input.boundary.push_back({{vid(nx, j), vid(nx, j + 1)}, tag});
  }
  return Mesh<2>(std::move(input), degree);
}

}  // namespace rdmood
