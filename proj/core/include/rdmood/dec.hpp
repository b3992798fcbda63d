#pragma once

// Explicit deferred-correction (DeC) time stepping. A step of size dt is split
// into M equispaced subnodes xi_m = m/M; R correction sweeps drive the
// residual of the implicit high-order collocation update to zero while only
// ever inverting the diagonal lumped mass |C_sigma|. Each sweep updates
//   U^{m,r+1}_sigma = U^{m,r}_sigma - L2_sigma / |C_sigma|,
//   L2_sigma = (Mass (U^{m,r} - U^n))_sigma + dt sum_l zeta_{l,m} R_sigma(U^{l,r}),
// with zeta_{l,m} = int_0^{xi_m} ell_l(xi) dxi the Lagrange quadrature weights.

#include <vector>

#include "rdmood/schemes.hpp"

namespace rdmood {

struct DecConfig {
  int subintervals = 1;    // M
  int corrections = 1;     // R
  // Richardson iterations of the lumped-preconditioned consistent-mass solve
  // performed inside each correction sweep. One iteration is the classical
  // single-shot update U -= L2 / |C|; that leaves a geometrically damped but
  // mesh-width-independent fraction of the lumped-vs-consistent mass defect,
  // which shows up as a second-order error floor on fine meshes. A few dozen
  // cheap mass applications per sweep converge the linear solve instead.
  int mass_iterations = 1;
};

/// M = R = degree + 1 matches the spatial order of the Bernstein basis.
inline DecConfig dec_for_degree(int degree) { return {degree + 1, degree + 1, 5}; }

/// zeta(l, m-1) = int_0^{m/M} ell_l(xi) dxi for equispaced Lagrange nodes
/// {0, 1/M, ..., 1}; (M+1) x M matrix, m = 1..M.
Eigen::MatrixXd zeta_coefficients(int subintervals);

/// Gathered consistent mass-matrix application:
/// out_sigma = sum_{K ni sigma} |K| sum_j mass_ref(i_sigma, j) du_j.
template <int Dim>
void apply_mass(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& du,
                std::vector<StateVec<Dim>>& out) {
  const auto& m = mesh.element().mass_ref();
  const int n = mesh.n_dof_per_cell();
  out.assign(mesh.n_dofs(), StateVec<Dim>::Zero());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& dofs = mesh.cell_dofs(k);
    const double vol = mesh.geometry(k).measure;
    for (int i = 0; i < n; ++i) {
      StateVec<Dim> acc = StateVec<Dim>::Zero();
      for (int j = 0; j < n; ++j) acc += m(i, j) * du[dofs[j]];
      out[dofs[i]] += vol * acc;
    }
  }
}

/// CFL time step: dt = cfl * min_sigma |S_sigma| / (|u_sigma| + c_sigma).
template <int Dim>
double compute_dt(const Mesh<Dim>& mesh, const GasModel& gas,
                  const std::vector<StateVec<Dim>>& u, double cfl) {
  // Basis coefficients of a high-order expansion may undershoot to tiny or
  // slightly negative densities near vacuum; dividing momentum by them would
  // produce fictitious huge wavespeeds and collapse dt. Floor the density used
  // in the wavespeed estimate at a small fraction of the global maximum.
  double rho_max = 0.0;
  for (int d = 0; d < mesh.n_dofs(); ++d) rho_max = std::max(rho_max, u[d][0]);
  const double rho_floor = 1e-6 * rho_max;
  double dt = std::numeric_limits<double>::infinity();
  for (int d = 0; d < mesh.n_dofs(); ++d) {
    const double rho = std::max(u[d][0], rho_floor);
    if (!(rho > 0.0)) continue;
    SpaceVec<Dim> mom;
    for (int k = 0; k < Dim; ++k) mom[k] = u[d][1 + k];
    const double p =
        (gas.gamma - 1.0) * (u[d][1 + Dim] - 0.5 * mom.squaredNorm() / rho);
    const double speed = mom.norm() / rho + std::sqrt(gas.gamma * std::max(p, 0.0) / rho);
    if (speed > 0.0 && std::isfinite(speed)) dt = std::min(dt, mesh.s_sigma()[d] / speed);
  }
  return cfl * dt;
}

/// One explicit DeC step with a per-cell scheme assignment. Returns U(t + dt).
template <int Dim>
std::vector<StateVec<Dim>> dec_step(const Discretization<Dim>& disc,
                                    const std::vector<SchemeLevel>& scheme,
                                    const std::vector<StateVec<Dim>>& u_n, double dt,
                                    const DecConfig& cfg) {
  using State = StateVec<Dim>;
  const Mesh<Dim>& mesh = disc.mesh();
  const int M = cfg.subintervals;
  const Eigen::MatrixXd zeta = zeta_coefficients(M);

  // Subnode states; node 0 stays pinned at U^n.
  std::vector<std::vector<State>> u(M + 1, u_n);
  std::vector<std::vector<State>> res(M + 1);
  disc.nodal_residuals(u_n, scheme, res[0]);  // node 0 never changes

  std::vector<State> mass_term, delta(mesh.n_dofs()), rhs;
  std::vector<std::vector<State>> u_next(M + 1);
  for (int r = 0; r < cfg.corrections; ++r) {
    for (int l = 1; l <= M; ++l) disc.nodal_residuals(u[l], scheme, res[l]);
    for (int m = 1; m <= M; ++m) {
      // Converge Mass (U^m - U^n) = -dt sum_l zeta_{l,m} R(U^l) with residuals
      // frozen at this sweep, via lumped-preconditioned Richardson iterations
      // started from the current increment. mass_iterations == 1 recovers the
      // classical one-shot update above.
      rhs.assign(mesh.n_dofs(), State::Zero());
      double rhs_scale = 0.0;
      for (int d = 0; d < mesh.n_dofs(); ++d) {
        State b = State::Zero();
        for (int l = 0; l <= M; ++l) b -= dt * zeta(l, m - 1) * res[l][d];
        rhs[d] = b;
        rhs_scale = std::max(rhs_scale, b.template lpNorm<Eigen::Infinity>());
        delta[d] = u[m][d] - u_n[d];
      }
      for (int it = 0; it < cfg.mass_iterations; ++it) {
        apply_mass(mesh, delta, mass_term);
        double defect = 0.0;
        for (int d = 0; d < mesh.n_dofs(); ++d) {
          const State r_d = mass_term[d] - rhs[d];
          defect = std::max(defect, r_d.template lpNorm<Eigen::Infinity>());
          delta[d] -= r_d / mesh.c_sigma()[d];
        }
        if (defect <= 1e-14 * rhs_scale) break;
      }
      u_next[m].resize(mesh.n_dofs());
      for (int d = 0; d < mesh.n_dofs(); ++d) u_next[m][d] = u_n[d] + delta[d];
    }
    for (int m = 1; m <= M; ++m) u[m] = std::move(u_next[m]);
  }
  return std::move(u[M]);
}

}  // namespace rdmood
