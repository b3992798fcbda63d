#pragma once

// Benchmark problem definitions with exact/reference solutions, field
// initialization, L1 error norms and a mesh-refinement convergence harness.

#include <functional>
#include <optional>
#include <string>

#include "rdmood/riemann.hpp"
#include "rdmood/solver.hpp"

namespace rdmood {

template <int Dim>
struct BenchmarkCase {
  std::string name;
  GasModel gas;
  double final_time = 0.0;
  bool smooth = false;  // smooth cases use full polynomial interpolation
  std::function<PrimitiveState<Dim>(const SpaceVec<Dim>&)> initial;
  std::function<PrimitiveState<Dim>(const SpaceVec<Dim>&, double)> exact;  // optional
  std::function<Mesh<Dim>(int n, int degree)> make_mesh;  // n cells per direction
};

BenchmarkCase<1> isentropic_case();
BenchmarkCase<1> sod_case();
BenchmarkCase<1> shu_osher_case();
BenchmarkCase<1> woodward_colella_case();
BenchmarkCase<2> sod2d_case();

/// All 1D cases by name; throws for unknown names.
BenchmarkCase<1> case_1d_by_name(const std::string& name);

PrimitiveState<1> isentropic_exact(double x, double t);
PrimitiveState<1> sod_exact(double x, double t);

/// Bernstein coefficients for the initial condition. Smooth cases invert the
/// nodal Vandermonde (degree-k accurate); discontinuous cases take point
/// values as coefficients, which keeps every DoF admissible.
template <int Dim>
std::vector<StateVec<Dim>> init_field(const Mesh<Dim>& mesh, const BenchmarkCase<Dim>& bc);

/// Point values of the discrete field at the DoF node locations.
template <int Dim>
std::vector<StateVec<Dim>> sample_at_dofs(const Mesh<Dim>& mesh,
                                          const std::vector<StateVec<Dim>>& u);

struct ErrorReport {
  std::vector<double> l1;  // per conserved variable
  int dof_count = 0;
  double h = 0.0;
};

/// e_v = sum_sigma |S_sigma| |u_h(x_sigma) - u_exact(x_sigma)|, with u_h
/// sampled from the Bernstein reconstruction.
template <int Dim>
ErrorReport l1_error(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u,
                     const std::function<PrimitiveState<Dim>(const SpaceVec<Dim>&, double)>& exact,
                     double t, const GasModel& gas);

struct ConvergenceRow {
  int cells = 0;
  double h = 0.0;
  double err = 0.0;    // L1 density error
  double order = 0.0;  // observed vs the previous row (0 for the first)
};

/// Full MOOD runs of a smooth case over a sequence of mesh sizes.
std::vector<ConvergenceRow> convergence_suite(const BenchmarkCase<1>& bc, int degree,
                                              const std::vector<int>& sizes,
                                              const SolverOptions& base_opts,
                                              const JumpParams& jump);

// --- implementation of the templated helpers ---

template <int Dim>
std::vector<StateVec<Dim>> init_field(const Mesh<Dim>& mesh, const BenchmarkCase<Dim>& bc) {
  const auto& el = mesh.element();
  const int n = el.n_dof();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i) vand.row(i) = el.eval(el.node(i)).transpose();
  const Eigen::MatrixXd vand_inv = vand.inverse();

  std::vector<StateVec<Dim>> u(mesh.n_dofs());
  Eigen::MatrixXd vals(n, Dim + 2);
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& dofs = mesh.cell_dofs(k);
    const auto& verts = mesh.cells()[k];
    for (int i = 0; i < n; ++i) {
      SpaceVec<Dim> x = SpaceVec<Dim>::Zero();
      const auto node = el.node(i);
      for (int v = 0; v <= Dim; ++v) x += node[v] * mesh.vertices()[verts[v]];
      vals.row(i) = conserved_from_primitive(bc.initial(x), bc.gas).vec().transpose();
    }
    const Eigen::MatrixXd coef = bc.smooth ? Eigen::MatrixXd(vand_inv * vals) : vals;
    for (int i = 0; i < n; ++i) u[dofs[i]] = coef.row(i).transpose();
  }
  return u;
}

template <int Dim>
std::vector<StateVec<Dim>> sample_at_dofs(const Mesh<Dim>& mesh,
                                          const std::vector<StateVec<Dim>>& u) {
  const auto& el = mesh.element();
  const int n = el.n_dof();
  std::vector<StateVec<Dim>> out(mesh.n_dofs(), StateVec<Dim>::Zero());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& dofs = mesh.cell_dofs(k);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd phi = el.eval(el.node(i));
      StateVec<Dim> val = StateVec<Dim>::Zero();
      for (int j = 0; j < n; ++j) val += phi[j] * u[dofs[j]];
      out[dofs[i]] = val;
    }
  }
  return out;
}

template <int Dim>
ErrorReport l1_error(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u,
                     const std::function<PrimitiveState<Dim>(const SpaceVec<Dim>&, double)>& exact,
                     double t, const GasModel& gas) {
  ErrorReport rep;
  rep.dof_count = mesh.n_dofs();
  rep.h = std::pow(mesh.total_measure() / mesh.n_cells(), 1.0 / Dim);
  rep.l1.assign(Dim + 2, 0.0);
  const auto sampled = sample_at_dofs(mesh, u);
  for (int d = 0; d < mesh.n_dofs(); ++d) {
    const StateVec<Dim> ex = conserved_from_primitive(exact(mesh.dof_coord(d), t), gas).vec();
    for (int v = 0; v < Dim + 2; ++v)
      rep.l1[v] += mesh.s_sigma()[d] * std::abs(sampled[d][v] - ex[v]);
  }
  return rep;
}

}  // namespace rdmood
