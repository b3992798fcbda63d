#include <cmath>

#include "doctest.h"
#include "rdmood/basis.hpp"
#include "rdmood/quadrature.hpp"

using namespace rdmood;

TEST_CASE("Gauss-Legendre integrates monomials exactly") {
  std::vector<double> x, w;
  for (int n = 1; n <= 6; ++n) {
    gauss_legendre_unit(n, x, w);
    double wsum = 0.0;
    for (double wi : w) wsum += wi;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t q = 0; q < x.size(); ++q) s += w[q] * std::pow(x[q], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("triangle rule integrates barycentric monomials exactly") {
  for (int deg = 1; deg <= 8; ++deg) {
    const auto rule = quadrature_rule(deg, 2);
    CHECK(rule.exact_degree >= deg);
    for (int a = 0; a + 0 <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b) {
        const int c = deg - a - b;
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q)
          s += rule.weights[q] * std::pow(rule.points[q][0], a) *
               std::pow(rule.points[q][1], b) * std::pow(rule.points[q][2], c);
        // weights sum to the reference area 1/2; integrals normalized by it
        const double exact = 0.5 * barycentric_monomial_integral<2>({a, b, c});
        CHECK(s == doctest::Approx(exact).epsilon(1e-11));
      }
  }
}

TEST_CASE("rule weights are positive") {
  for (int deg = 1; deg <= 8; ++deg)
    for (int dim = 1; dim <= 2; ++dim) {
      const auto rule = quadrature_rule(deg, dim);
      for (double w : rule.weights) CHECK(w > 0.0);
    }
}
