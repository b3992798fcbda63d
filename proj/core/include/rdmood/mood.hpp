#pragma once

// A posteriori limiting loop: compute an unlimited candidate step, detect
// troubled cells (physical/computational admissibility, plateau exemption,
// relaxed discrete maximum principle with a smoothness-extrema check), spread
// the bad set one vertex-neighborhood layer, decrement the flagged cells down
// the scheme cascade, and recompute the step until every cell is accepted or
// sits at the first-order parachute (which is always accepted).

#include <vector>

#include "rdmood/dec.hpp"
#include "rdmood/schemes.hpp"

namespace rdmood {

enum class SeVariant { none, cse, lse };
enum class DetectionVariable { density, all };

struct DetectorConfig {
  double eps1 = 0.0;  // DMP relaxation: eps = max(eps1 |M - m|, eps2)
  double eps2 = 0.0;
  SeVariant se = SeVariant::lse;
  DetectionVariable variable = DetectionVariable::all;
  // Ordered, strictly decreasing scheme cascade; the last entry is the
  // parachute level whose result is always accepted.
  std::vector<SchemeLevel> cascade = {SchemeLevel::galerkin, SchemeLevel::rusanov_psi,
                                      SchemeLevel::rusanov};
};

struct CellFlags {
  bool pad = false, cad = false, plateau = false, dmp = false, se = false;
  bool core() const { return cad || pad || (!plateau && dmp && se); }
};

struct DetectionReport {
  std::vector<int> scheme_level;  // final cascade level per cell
  int rounds = 0;                 // recomputation rounds performed
  long n_pad = 0, n_cad = 0, n_plateau = 0, n_dmp = 0, n_se = 0;
  long n_bad = 0;        // total flagged-cell recomputations (all rounds)
  long n_core_cells = 0; // distinct detector-activated cells (union of rounds)
};

template <int Dim>
struct MoodStepResult {
  std::vector<StateVec<Dim>> u;
  DetectionReport report;
};

// --- per-cell detectors (exposed for testing) ---

/// Point values u_h(x_sigma) of a coefficient field at every DoF node. The
/// expansion is continuous across cells, so the value at a shared node is
/// well defined no matter which incident cell evaluates it.
template <int Dim>
std::vector<StateVec<Dim>> nodal_values(const Mesh<Dim>& mesh,
                                        const std::vector<StateVec<Dim>>& u) {
  const auto& el = mesh.element();
  const int n = mesh.n_dof_per_cell();
  Eigen::MatrixXd vand(n, n);
  for (int i = 0; i < n; ++i) vand.row(i) = el.eval(el.node(i)).transpose();
  std::vector<StateVec<Dim>> vals(u.size(), StateVec<Dim>::Zero());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& dofs = mesh.cell_dofs(k);
    for (int i = 0; i < n; ++i) {
      StateVec<Dim> v = StateVec<Dim>::Zero();
      for (int j = 0; j < n; ++j) v += vand(i, j) * u[dofs[j]];
      vals[dofs[i]] = v;
    }
  }
  return vals;
}

// Positivity of the density of u_h at every DoF point of the cell. The check
// runs on point values, not raw Bernstein coefficients: near a vacuum point
// the coefficients of an accurate interpolant legitimately dip slightly
// negative (even for the initial data), while the polynomial itself stays
// admissible at the nodes. The other conserved quantities are not
// sign-constrained: near-vacuum smooth states have energy values whose
// interpolation error exceeds their magnitude, and flagging those would
// destroy the high-order scheme exactly where it is still accurate.
template <int Dim>
bool detect_pad(const Mesh<Dim>& mesh, const GasModel& /*gas*/,
                const std::vector<StateVec<Dim>>& candidate_vals, int k) {
  for (int d : mesh.cell_dofs(k))
    if (!(candidate_vals[d][0] > 0.0)) return true;
  return false;
}

template <int Dim>
bool detect_cad(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& candidate, int k) {
  for (int d : mesh.cell_dofs(k))
    if (!candidate[d].allFinite()) return true;
  return false;
}

/// Min/max of one solution component over all DoFs of K and its vertex
/// neighborhood V(K).
template <int Dim>
std::pair<double, double> neighborhood_bounds(const Mesh<Dim>& mesh,
                                              const std::vector<StateVec<Dim>>& u, int k,
                                              int comp) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto scan = [&](int cell) {
    for (int d : mesh.cell_dofs(cell)) {
      lo = std::min(lo, u[d][comp]);
      hi = std::max(hi, u[d][comp]);
    }
  };
  scan(k);
  for (int kn : mesh.vertex_neighbors(k)) scan(kn);
  return {lo, hi};
}

/// Plateau exemption: |M^n - m^n| < mu^3 with mu = |K|^{1/d}.
template <int Dim>
bool detect_plateau(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u_n, int k,
                    int comp) {
  const auto [m, M] = neighborhood_bounds(mesh, u_n, k, comp);
  const double mu = mesh.geometry(k).char_length;
  return std::abs(M - m) < mu * mu * mu;
}

/// Relaxed discrete maximum principle: flags strict overshoots of the
/// previous-step neighborhood bounds widened by eps.
template <int Dim>
bool detect_dmp(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u_n,
                const std::vector<StateVec<Dim>>& candidate, int k, int comp, double eps1,
                double eps2) {
  const auto [m, M] = neighborhood_bounds(mesh, u_n, k, comp);
  const double eps = std::max(eps1 * std::abs(M - m), eps2);
  for (int d : mesh.cell_dofs(k)) {
    const double v = candidate[d][comp];
    if (v > M + eps || v < m - eps) return true;
  }
  return false;
}

namespace detail {

/// Mean over the cell's DoF nodes of the gradient of one solution component.
template <int Dim>
SpaceVec<Dim> mean_gradient(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u, int k,
                            int comp) {
  const auto& el = mesh.element();
  const auto& g = mesh.geometry(k);
  const auto& dofs = mesh.cell_dofs(k);
  const int n = el.n_dof();
  SpaceVec<Dim> acc = SpaceVec<Dim>::Zero();
  for (int q = 0; q < n; ++q) {
    const auto b = el.node(q);
    for (int i = 0; i < n; ++i) {
      SpaceVec<Dim> gi = SpaceVec<Dim>::Zero();
      for (int v = 0; v <= Dim; ++v) gi += el.deriv_one(i, v, b) * g.grad_lambda[v];
      acc += u[dofs[i]][comp] * gi;
    }
  }
  return acc / n;
}

/// Mean over the cell's DoF nodes of the Hessian of one solution component.
template <int Dim>
Eigen::Matrix<double, Dim, Dim> mean_hessian(const Mesh<Dim>& mesh,
                                             const std::vector<StateVec<Dim>>& u, int k,
                                             int comp) {
  const auto& el = mesh.element();
  const auto& g = mesh.geometry(k);
  const auto& dofs = mesh.cell_dofs(k);
  const int n = el.n_dof();
  Eigen::Matrix<double, Dim, Dim> acc = Eigen::Matrix<double, Dim, Dim>::Zero();
  for (int q = 0; q < n; ++q) {
    const auto b = el.node(q);
    for (int i = 0; i < n; ++i)
      for (int v = 0; v <= Dim; ++v)
        for (int w = 0; w <= Dim; ++w)
          acc += u[dofs[i]][comp] * el.deriv2_one(i, v, w, b) * g.grad_lambda[v] *
                 g.grad_lambda[w].transpose();
  }
  return acc / n;
}

/// Curvature indicator chi_K: second derivative of the reconstruction (1D) /
/// its Laplacian (2D) at the cell centroid. For linear elements, which carry
/// no curvature, 1D falls back to a centered difference of neighbor mean
/// gradients and 2D reports zero.
template <int Dim>
double cse_curvature(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& u, int k,
                     int comp) {
  if (mesh.degree() >= 2) return mean_hessian(mesh, u, k, comp).trace();
  if constexpr (Dim == 1) {
    double lo_x = 0, lo_g = 0, hi_x = 0, hi_g = 0;
    bool has_lo = false, has_hi = false;
    const double xc = mesh.geometry(k).centroid[0];
    for (int kn : mesh.edge_neighbors(k)) {
      const double xn = mesh.geometry(kn).centroid[0];
      const double gn = mean_gradient(mesh, u, kn, comp)[0];
      if (xn < xc) {
        lo_x = xn, lo_g = gn, has_lo = true;
      } else {
        hi_x = xn, hi_g = gn, has_hi = true;
      }
    }
    if (!has_lo || !has_hi) return 0.0;
    return (hi_g - lo_g) / (hi_x - lo_x);
  }
  return 0.0;
}

}  // namespace detail

/// Classical smoothness extrema check. Returns true when the cell is a
/// *genuine* extremum violation (i.e. the exoneration conditions fail).
template <int Dim>
bool detect_cse(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& candidate, int k,
                int comp) {
  double chi_min = std::numeric_limits<double>::infinity(), chi_max = -chi_min;
  auto scan = [&](int cell) {
    const double chi = detail::cse_curvature(mesh, candidate, cell, comp);
    chi_min = std::min(chi_min, chi);
    chi_max = std::max(chi_max, chi);
  };
  scan(k);
  for (int kn : mesh.vertex_neighbors(k)) scan(kn);
  const double mu = mesh.geometry(k).char_length;
  if (chi_min * chi_max >= -mu) return false;
  // Exonerate when one curvature sign clearly dominates: the subdominant /
  // dominant magnitude ratio below 1/2 means the sign change is a small ripple
  // on an otherwise one-signed (smooth) curvature field.
  const double amax = std::max(std::abs(chi_min), std::abs(chi_max));
  const double amin = std::min(std::abs(chi_min), std::abs(chi_max));
  if (amax > 0.0 && amin / amax < 0.5 && amax >= mu) return false;
  return true;
}

/// Linearized smoothness extrema check on mean cell derivatives. For degree 1
/// the reconstruction has no curvature, so the same limiter is applied one
/// derivative level down (solution means against extrapolated edge values).
/// The slope-limiter test alone also activates at smooth extrema of the base
/// quantity, so a violation escalates one derivative level: the cell is only
/// flagged when the curvature field is itself oscillatory (hierarchical
/// limiting in the sense of vertex-based slope limiters).
template <int Dim>
bool detect_lse(const Mesh<Dim>& mesh, const std::vector<StateVec<Dim>>& candidate, int k,
                int comp) {
  // base[k'] = the cell quantity being limited (per spatial component);
  // slope = its linearization used to extrapolate to edge midpoints.
  const bool solution_level = (mesh.degree() == 1);

  auto base_of = [&](int cell) -> SpaceVec<Dim> {
    if (solution_level) {
      double mean = 0.0;
      for (int d : mesh.cell_dofs(cell)) mean += candidate[d][comp];
      mean /= mesh.n_dof_per_cell();
      return SpaceVec<Dim>::Constant(mean);
    }
    return detail::mean_gradient(mesh, candidate, cell, comp);
  };

  const SpaceVec<Dim> base_k = base_of(k);
  Eigen::Matrix<double, Dim, Dim> slope;
  if (solution_level) {
    const SpaceVec<Dim> gr = detail::mean_gradient(mesh, candidate, k, comp);
    slope = Eigen::Matrix<double, Dim, Dim>::Zero();
    for (int c = 0; c < Dim; ++c) slope.row(c) = gr.transpose();
  } else {
    slope = detail::mean_hessian(mesh, candidate, k, comp);
  }

  const SpaceVec<Dim> x0 = mesh.geometry(k).centroid;
  const double scale = std::max(base_k.norm(), 1.0);

  // Walk the cell's faces; each interior face contributes one alpha-hat.
  for (const auto& face : mesh.interior_faces()) {
    int side = -1;
    if (face.cell[0] == k) side = 0;
    if (face.cell[1] == k) side = 1;
    if (side < 0) continue;
    const int kn = face.cell[1 - side];
    const SpaceVec<Dim> base_n = base_of(kn);

    // Edge midpoint coordinate.
    SpaceVec<Dim> xj;
    const auto& cell_verts = mesh.cells()[face.cell[side]];
    if constexpr (Dim == 1) {
      xj = mesh.vertices()[cell_verts[face.local_face[side]]];
    } else {
      const int f = face.local_face[side];
      xj = 0.5 * (mesh.vertices()[cell_verts[(f + 1) % 3]] +
                  mesh.vertices()[cell_verts[(f + 2) % 3]]);
    }
    const SpaceVec<Dim> delta = base_k + slope * (xj - x0);
    for (int c = 0; c < Dim; ++c) {
      const double d = delta[c], b = base_k[c];
      if (std::abs(d - b) < 1e-14 * scale) continue;  // no extrapolation
      const double lo = std::min(base_n[c], b), hi = std::max(base_n[c], b);
      double alpha = 1.0;
      if (d > b)
        alpha = std::min(1.0, (hi - b) / (d - b));
      else
        alpha = std::min(1.0, (lo - b) / (d - b));
      if (alpha < 1.0) return detect_cse(mesh, candidate, k, comp);
    }
  }
  return false;
}

/// Bound-type detectors (PAD, plateau, DMP) act on point values U_sigma =
/// u_h(x_sigma); raw Bernstein coefficients sit O(h^2 |u''|) away from the
/// values at a steep front, which would trip strict bounds spuriously. The
/// smoothness detectors (CSE/LSE) integrate derivative means and therefore
/// keep the coefficient field.
template <int Dim>
CellFlags detect_cell(const Mesh<Dim>& mesh, const GasModel& gas,
                      const std::vector<StateVec<Dim>>& u_n_vals,
                      const std::vector<StateVec<Dim>>& candidate,
                      const std::vector<StateVec<Dim>>& candidate_vals, int k,
                      const DetectorConfig& cfg) {
  CellFlags f;
  f.cad = detect_cad(mesh, candidate, k);
  f.pad = f.cad || detect_pad(mesh, gas, candidate_vals, k);
  if (f.cad || f.pad) return f;
  const int n_comp = (cfg.variable == DetectionVariable::all) ? Dim + 2 : 1;
  f.plateau = true;
  for (int comp = 0; comp < n_comp; ++comp) {
    const bool plateau = detect_plateau(mesh, u_n_vals, k, comp);
    if (plateau) continue;  // this component is locally flat
    f.plateau = false;
    if (!detect_dmp(mesh, u_n_vals, candidate_vals, k, comp, cfg.eps1, cfg.eps2)) continue;
    f.dmp = true;
    switch (cfg.se) {
      case SeVariant::none: f.se = true; break;
      case SeVariant::cse: f.se = f.se || detect_cse(mesh, candidate, k, comp); break;
      case SeVariant::lse: f.se = f.se || detect_lse(mesh, candidate, k, comp); break;
    }
  }
  return f;
}

/// One layer of vertex-neighborhood spreading around the core cells.
template <int Dim>
std::vector<char> assemble_bad_set(const Mesh<Dim>& mesh, const std::vector<char>& core) {
  std::vector<char> bad = core;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    if (!core[k]) continue;
    for (int kn : mesh.vertex_neighbors(k)) bad[kn] = 1;
  }
  return bad;
}

/// One full time step with a posteriori limiting.
template <int Dim>
MoodStepResult<Dim> mood_step(const Discretization<Dim>& disc, const DecConfig& dec_cfg,
                              const DetectorConfig& det_cfg,
                              const std::vector<StateVec<Dim>>& u_n, double dt) {
  const Mesh<Dim>& mesh = disc.mesh();
  const int n_cells = mesh.n_cells();
  const int n_levels = static_cast<int>(det_cfg.cascade.size());

  MoodStepResult<Dim> out;
  std::vector<int> level(n_cells, 0);  // index into the cascade
  std::vector<SchemeLevel> scheme(n_cells, det_cfg.cascade[0]);
  out.u = dec_step(disc, scheme, u_n, dt, dec_cfg);

  std::vector<char> eligible(n_cells, 1);
  std::vector<char> ever_core(n_cells, 0);
  const std::vector<StateVec<Dim>> u_n_vals = nodal_values(mesh, u_n);
  auto& rep = out.report;
  for (int round = 0; round < n_levels - 1; ++round) {
    const std::vector<StateVec<Dim>> cand_vals = nodal_values(mesh, out.u);
    std::vector<char> core(n_cells, 0);
    for (int k = 0; k < n_cells; ++k) {
      if (!eligible[k] || level[k] >= n_levels - 1) continue;
      const CellFlags f =
          detect_cell(mesh, disc.gas(), u_n_vals, out.u, cand_vals, k, det_cfg);
      rep.n_pad += f.pad;
      rep.n_cad += f.cad;
      rep.n_plateau += f.plateau;
      rep.n_dmp += f.dmp;
      rep.n_se += f.se;
      core[k] = f.core();
      if (core[k] && !ever_core[k]) {
        ever_core[k] = 1;
        ++rep.n_core_cells;
      }
    }
    const std::vector<char> bad = assemble_bad_set(mesh, core);
    bool any = false;
    for (int k = 0; k < n_cells; ++k) {
      if (bad[k] && level[k] < n_levels - 1) {
        ++level[k];
        scheme[k] = det_cfg.cascade[level[k]];
        any = true;
        ++rep.n_bad;
      }
    }
    if (!any) break;
    out.u = dec_step(disc, scheme, u_n, dt, dec_cfg);
    ++rep.rounds;
    // Only recomputed cells are re-examined in later rounds.
    eligible = bad;
  }

  rep.scheme_level.resize(n_cells);
  for (int k = 0; k < n_cells; ++k)
    rep.scheme_level[k] = static_cast<int>(scheme[k]);
  return out;
}

}  // namespace rdmood
