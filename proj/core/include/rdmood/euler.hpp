#pragma once

// Compressible Euler physics: state conversions, fluxes, eigenstructure and
// admissibility checks. Everything here is a pure function over value types;
// non-finite inputs propagate to non-finite outputs (or `false` for the
// predicates) so that downstream detection sees failures instead of crashes.

#include <Eigen/Dense>
#include <cmath>

namespace rdmood {

struct GasModel {
  double gamma = 1.4;  // ratio of specific heats, > 1
};

template <int Dim>
using StateVec = Eigen::Matrix<double, Dim + 2, 1>;

template <int Dim>
using SpaceVec = Eigen::Matrix<double, Dim, 1>;

/// Flux tensor: one column per space direction.
template <int Dim>
using FluxTensor = Eigen::Matrix<double, Dim + 2, Dim>;

template <int Dim>
struct ConservedState {
  double rho = 0.0;
  SpaceVec<Dim> momentum = SpaceVec<Dim>::Zero();
  double energy = 0.0;

  StateVec<Dim> vec() const {
    StateVec<Dim> v;
    v[0] = rho;
    for (int i = 0; i < Dim; ++i) v[1 + i] = momentum[i];
    v[Dim + 1] = energy;
    return v;
  }
  static ConservedState from_vec(const StateVec<Dim>& v) {
    ConservedState s;
    s.rho = v[0];
    for (int i = 0; i < Dim; ++i) s.momentum[i] = v[1 + i];
    s.energy = v[Dim + 1];
    return s;
  }
};

template <int Dim>
struct PrimitiveState {
  double rho = 0.0;
  SpaceVec<Dim> velocity = SpaceVec<Dim>::Zero();
  double pressure = 0.0;
};

template <int Dim>
struct EigenDecomposition {
  Eigen::Matrix<double, Dim + 2, Dim + 2> left;   // rows are left eigenvectors
  Eigen::Matrix<double, Dim + 2, Dim + 2> right;  // columns are right eigenvectors
  StateVec<Dim> wave_speeds;                      // sorted ascending
};

template <int Dim>
PrimitiveState<Dim> primitive_from_conserved(const ConservedState<Dim>& u, const GasModel& gas) {
  PrimitiveState<Dim> w;
  w.rho = u.rho;
  w.velocity = u.momentum / u.rho;
  const double kinetic = 0.5 * u.momentum.squaredNorm() / u.rho;
  w.pressure = (gas.gamma - 1.0) * (u.energy - kinetic);
  return w;
}

template <int Dim>
ConservedState<Dim> conserved_from_primitive(const PrimitiveState<Dim>& w, const GasModel& gas) {
  ConservedState<Dim> u;
  u.rho = w.rho;
  u.momentum = w.rho * w.velocity;
  u.energy = w.pressure / (gas.gamma - 1.0) + 0.5 * w.rho * w.velocity.squaredNorm();
  return u;
}

// Clamped below at zero so wavespeed estimates stay finite on basis
// coefficients, which may carry slightly negative pressure near vacuum even
// when the reconstructed solution itself is admissible.
inline double sound_speed_impl(double rho, double p, double gamma) {
  return std::sqrt(gamma * std::max(p, 0.0) / rho);
}

template <int Dim>
double sound_speed(const PrimitiveState<Dim>& w, const GasModel& gas) {
  return sound_speed_impl(w.rho, w.pressure, gas.gamma);
}

/// Internal energy E - |m|^2 / (2 rho); positivity defines the admissible set
/// together with rho > 0. Using internal energy instead of pressure avoids a
/// division (the two differ by the positive factor gamma - 1).
template <int Dim>
double internal_energy(const ConservedState<Dim>& u) {
  return u.energy - 0.5 * u.momentum.squaredNorm() / u.rho;
}

template <int Dim>
bool is_admissible(const ConservedState<Dim>& u, const GasModel&) {
  if (!std::isfinite(u.rho) || !std::isfinite(u.energy)) return false;
  for (int i = 0; i < Dim; ++i)
    if (!std::isfinite(u.momentum[i])) return false;
  return u.rho > 0.0 && internal_energy(u) > 0.0;
}

template <int Dim>
bool is_admissible_vec(const StateVec<Dim>& v, const GasModel& gas) {
  return is_admissible(ConservedState<Dim>::from_vec(v), gas);
}

/// F(U) as a (Dim+2) x Dim tensor.
template <int Dim>
FluxTensor<Dim> flux_tensor(const StateVec<Dim>& v, const GasModel& gas) {
  const auto u = ConservedState<Dim>::from_vec(v);
  const SpaceVec<Dim> vel = u.momentum / u.rho;
  const double p = (gas.gamma - 1.0) * internal_energy(u);
  FluxTensor<Dim> f;
  for (int d = 0; d < Dim; ++d) {
    f(0, d) = u.momentum[d];
    for (int i = 0; i < Dim; ++i) f(1 + i, d) = u.momentum[i] * vel[d];
    f(1 + d, d) += p;
    f(Dim + 1, d) = vel[d] * (u.energy + p);
  }
  return f;
}

/// F(U) . n for an arbitrary (not necessarily unit) normal.
template <int Dim>
StateVec<Dim> physical_flux(const ConservedState<Dim>& u, const SpaceVec<Dim>& normal,
                            const GasModel& gas) {
  return flux_tensor<Dim>(u.vec(), gas) * normal;
}

/// Spectral radius of A(U).n = |u.n| + c |n|.
template <int Dim>
double max_wave_speed(const ConservedState<Dim>& u, const SpaceVec<Dim>& normal,
                      const GasModel& gas) {
  const auto w = primitive_from_conserved(u, gas);
  return std::abs(w.velocity.dot(normal)) + sound_speed(w, gas) * normal.norm();
}

/// Eigenstructure of the normal flux Jacobian A(U).n for a unit normal.
/// Right eigenvectors are the standard conservative-variable basis with total
/// enthalpy H = (E + p)/rho; the left matrix is its inverse, so L.R = I holds
/// to round-off by construction.
template <int Dim>
EigenDecomposition<Dim> eigen_decomposition(const ConservedState<Dim>& u,
                                            const SpaceVec<Dim>& normal, const GasModel& gas) {
  constexpr int N = Dim + 2;
  EigenDecomposition<Dim> ed;
  const auto w = primitive_from_conserved(u, gas);
  const double c = sound_speed(w, gas);
  const double un = w.velocity.dot(normal);
  const double h_tot = (u.energy + w.pressure) / u.rho;
  const double q2 = w.velocity.squaredNorm();

  Eigen::Matrix<double, N, N> r;
  if constexpr (Dim == 1) {
    const double vx = w.velocity[0];
    r.col(0) << 1.0, vx - c, h_tot - c * vx;
    r.col(1) << 1.0, vx, 0.5 * q2;
    r.col(2) << 1.0, vx + c, h_tot + c * vx;
    ed.wave_speeds << un - c, un, un + c;
  } else {
    const double vx = w.velocity[0], vy = w.velocity[1];
    const double nx = normal[0], ny = normal[1];
    const double ut = -vx * ny + vy * nx;  // tangential velocity
    r.col(0) << 1.0, vx - c * nx, vy - c * ny, h_tot - c * un;
    r.col(1) << 1.0, vx, vy, 0.5 * q2;
    r.col(2) << 0.0, -ny, nx, ut;
    r.col(3) << 1.0, vx + c * nx, vy + c * ny, h_tot + c * un;
    ed.wave_speeds << un - c, un, un, un + c;
  }
  ed.right = r;
  ed.left = r.inverse();
  return ed;
}

}  // namespace rdmood
