#include <random>

#include "doctest.h"
#include "rdmood/basis.hpp"
#include "rdmood/quadrature.hpp"

using namespace rdmood;

namespace {

template <int Dim>
typename BernsteinElement<Dim>::Bary random_bary(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  typename BernsteinElement<Dim>::Bary b;
  double s = 0.0;
  for (int v = 0; v <= Dim; ++v) s += (b[v] = -std::log(u(rng)));
  return b / s;
}

}  // namespace

TEST_CASE("partition of unity and positivity") {
  std::mt19937 rng(3);
  for (int deg = 1; deg <= 3; ++deg) {
    BernsteinElement<1> e1(deg);
    BernsteinElement<2> e2(deg);
    for (int it = 0; it < 200; ++it) {
      const auto b1 = random_bary<1>(rng);
      const auto v1 = e1.eval(b1);
      CHECK(v1.sum() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(v1.minCoeff() >= 0.0);
      const auto b2 = random_bary<2>(rng);
      const auto v2 = e2.eval(b2);
      CHECK(v2.sum() == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(v2.minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("lumped mass weights are positive and sum to one") {
  for (int deg = 1; deg <= 3; ++deg) {
    BernsteinElement<2> e(deg);
    CHECK(e.lumped_ref().minCoeff() > 0.0);
    CHECK(e.lumped_ref().sum() == doctest::Approx(1.0).epsilon(1e-13));
    // row sums of the mass matrix reproduce the lumped weights
    for (int i = 0; i < e.n_dof(); ++i)
      CHECK(e.mass_ref().row(i).sum() == doctest::Approx(e.lumped_ref()[i]).epsilon(1e-13));
  }
}

TEST_CASE("DoF counts match the simplex dimension formula") {
  for (int deg = 1; deg <= 3; ++deg) {
    CHECK(BernsteinElement<1>(deg).n_dof() == deg + 1);
    CHECK(BernsteinElement<2>(deg).n_dof() == (deg + 1) * (deg + 2) / 2);
  }
  CHECK_THROWS(BernsteinElement<1>(0));
  CHECK_THROWS(BernsteinElement<2>(4));
}

TEST_CASE("reference mass matrix matches quadrature") {
  std::mt19937 rng(5);
  for (int deg = 1; deg <= 3; ++deg) {
    BernsteinElement<2> e(deg);
    const auto rule = quadrature_rule(2 * deg, 2);
    const int n = e.n_dof();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      BernsteinElement<2>::Bary b;
      b << rule.points[q][0], rule.points[q][1], rule.points[q][2];
      const Eigen::VectorXd phi = e.eval(b);
      m += (rule.weights[q] / 0.5) * phi * phi.transpose();  // reference area 1/2
    }
    CHECK((m - e.mass_ref()).norm() < 1e-12);
  }
}

TEST_CASE("barycentric derivatives match finite differences") {
  std::mt19937 rng(9);
  for (int deg = 1; deg <= 3; ++deg) {
    BernsteinElement<2> e(deg);
    for (int it = 0; it < 20; ++it) {
      auto b = random_bary<2>(rng);
      const double h = 1e-6;
      for (int i = 0; i < e.n_dof(); ++i)
        for (int v = 0; v < 3; ++v) {
          auto bp = b, bm = b;
          bp[v] += h;
          bm[v] -= h;
          const double fd = (e.eval_one(i, bp) - e.eval_one(i, bm)) / (2 * h);
          CHECK(e.deriv_one(i, v, b) == doctest::Approx(fd).epsilon(1e-5));
        }
    }
  }
}

TEST_CASE("face DoFs carry the whole face restriction") {
  for (int deg = 1; deg <= 3; ++deg) {
    BernsteinElement<2> e(deg);
    for (int f = 0; f < 3; ++f) {
      CHECK(static_cast<int>(e.face_dofs(f).size()) == deg + 1);
      // a basis function not supported on face f integrates to zero there
      for (int i = 0; i < e.n_dof(); ++i) {
        const bool on_face = e.multi_index(i)[f] == 0;
        const double diag = e.face_mass_ref(f)(i, i);
        if (on_face)
          CHECK(diag > 0.0);
        else
          CHECK(diag == 0.0);
      }
    }
  }
}
