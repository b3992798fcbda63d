#include <random>

#include "doctest.h"
#include "rdmood/euler.hpp"

using namespace rdmood;

namespace {

template <int Dim>
PrimitiveState<Dim> random_primitive(std::mt19937& rng) {
  std::uniform_real_distribution<double> rho(0.1, 5.0), vel(-3.0, 3.0), p(0.05, 4.0);
  PrimitiveState<Dim> w;
  w.rho = rho(rng);
  for (int i = 0; i < Dim; ++i) w.velocity[i] = vel(rng);
  w.pressure = p(rng);
  return w;
}

}  // namespace

TEST_CASE("primitive/conserved round trip") {
  const GasModel gas{1.4};
  std::mt19937 rng(11);
  for (int it = 0; it < 100; ++it) {
    const auto w = random_primitive<2>(rng);
    const auto u = conserved_from_primitive(w, gas);
    const auto w2 = primitive_from_conserved(u, gas);
    CHECK(w2.rho == doctest::Approx(w.rho).epsilon(1e-13));
    CHECK(w2.pressure == doctest::Approx(w.pressure).epsilon(1e-12));
    CHECK((w2.velocity - w.velocity).norm() < 1e-12);
    CHECK(is_admissible(u, gas));
  }
}

TEST_CASE("admissibility predicate rejects bad states") {
  const GasModel gas{1.4};
  ConservedState<1> u;
  u.rho = 1.0;
  u.momentum[0] = 2.0;
  u.energy = 1.0;  // kinetic = 2.0 > E: negative internal energy
  CHECK_FALSE(is_admissible(u, gas));
  u.energy = 3.0;
  CHECK(is_admissible(u, gas));
  u.rho = -1.0;
  CHECK_FALSE(is_admissible(u, gas));
  u.rho = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(is_admissible(u, gas));
}

TEST_CASE("flux tensor columns equal directional physical flux") {
  const GasModel gas{1.4};
  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    const auto u = conserved_from_primitive(random_primitive<2>(rng), gas);
    const auto f = flux_tensor<2>(u.vec(), gas);
    for (int d = 0; d < 2; ++d) {
      SpaceVec<2> n = SpaceVec<2>::Zero();
      n[d] = 1.0;
      CHECK((f.col(d) - physical_flux(u, n, gas)).norm() < 1e-12);
    }
  }
}

TEST_CASE("1D flux sanity on a known state") {
  // rho=1, u=2, p=3, gamma=1.4: m=2, E = 3/0.4 + 2 = 9.5,
  // F = (2, 4+3, 2*(9.5+3)) = (2, 7, 25).
  const GasModel gas{1.4};
  PrimitiveState<1> w;
  w.rho = 1.0;
  w.velocity[0] = 2.0;
  w.pressure = 3.0;
  const auto u = conserved_from_primitive(w, gas);
  CHECK(u.energy == doctest::Approx(9.5));
  SpaceVec<1> n;
  n[0] = 1.0;
  const auto f = physical_flux(u, n, gas);
  CHECK(f[0] == doctest::Approx(2.0));
  CHECK(f[1] == doctest::Approx(7.0));
  CHECK(f[2] == doctest::Approx(25.0));
}

template <int Dim>
static void check_eigen_vs_fd(std::mt19937& rng, int n_states) {
  const GasModel gas{1.4};
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  for (int it = 0; it < n_states; ++it) {
    const auto u = conserved_from_primitive(random_primitive<Dim>(rng), gas);
    SpaceVec<Dim> n;
    if constexpr (Dim == 1) {
      n[0] = (it % 2 == 0) ? 1.0 : -1.0;
    } else {
      const double a = ang(rng);
      n << std::cos(a), std::sin(a);
    }
    const auto ed = eigen_decomposition(u, n, gas);
    // L R = I
    constexpr int N = Dim + 2;
    CHECK((ed.left * ed.right - Eigen::Matrix<double, N, N>::Identity()).norm() < 1e-10);
    // Finite-difference Jacobian of F(U).n
    const double h = 1e-6;
    Eigen::Matrix<double, N, N> jac;
    const StateVec<Dim> v0 = u.vec();
    for (int j = 0; j < N; ++j) {
      StateVec<Dim> vp = v0, vm = v0;
      const double dj = h * std::max(1.0, std::abs(v0[j]));
      vp[j] += dj;
      vm[j] -= dj;
      jac.col(j) = (physical_flux(ConservedState<Dim>::from_vec(vp), n, gas) -
                    physical_flux(ConservedState<Dim>::from_vec(vm), n, gas)) /
                   (2 * dj);
    }
    // J r_k = lambda_k r_k
    for (int k = 0; k < N; ++k) {
      const auto r = ed.right.col(k);
      const double scale = std::max(1.0, jac.norm());
      CHECK((jac * r - ed.wave_speeds[k] * r).norm() / scale < 2e-5);
    }
    // ascending wave speeds
    for (int k = 1; k < N; ++k) CHECK(ed.wave_speeds[k] >= ed.wave_speeds[k - 1] - 1e-14);
  }
}

TEST_CASE("eigendecomposition matches finite-difference Jacobian (1D)") {
  std::mt19937 rng(23);
  check_eigen_vs_fd<1>(rng, 500);
}

TEST_CASE("eigendecomposition matches finite-difference Jacobian (2D)") {
  std::mt19937 rng(29);
  check_eigen_vs_fd<2>(rng, 500);
}

TEST_CASE("max wave speed matches eigenvalue extrema") {
  const GasModel gas{1.4};
  std::mt19937 rng(31);
  for (int it = 0; it < 50; ++it) {
    const auto u = conserved_from_primitive(random_primitive<1>(rng), gas);
    SpaceVec<1> n;
    n[0] = 1.0;
    const auto ed = eigen_decomposition(u, n, gas);
    const double lam = std::max(std::abs(ed.wave_speeds[0]), std::abs(ed.wave_speeds[2]));
    CHECK(max_wave_speed(u, n, gas) == doctest::Approx(lam).epsilon(1e-12));
  }
}
