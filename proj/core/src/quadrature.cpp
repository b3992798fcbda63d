#include "rdmood/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace rdmood {

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Newton iteration on P_n over [-1,1], then map to [0,1].
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p0 = 0.0;  // p1 holds P_1
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

QuadratureRule quadrature_rule(int target_degree, int dimension) {
  if (target_degree < 0 || target_degree > 8)
    throw std::invalid_argument("quadrature_rule: unsupported degree");
  QuadratureRule rule;
  rule.exact_degree = target_degree;
  if (dimension == 1) {
    const int n = (target_degree + 2) / 2;  // 2n-1 >= degree
    std::vector<double> x, w;
    gauss_legendre_unit(n, x, w);
    for (int i = 0; i < n; ++i) {
      rule.points.push_back({1.0 - x[i], x[i], 0.0});
      rule.weights.push_back(w[i]);
    }
  } else if (dimension == 2) {
    // Duffy (collapsed coordinate) product rule: x = u, y = v (1 - u) with
    // Jacobian (1 - u). The u-integrand picks up one extra degree.
    const int nu = (target_degree + 3) / 2;
    const int nv = (target_degree + 2) / 2;
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre_unit(nu, xu, wu);
    gauss_legendre_unit(nv, xv, wv);
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nv; ++j) {
        const double x = xu[i];
        const double y = xv[j] * (1.0 - xu[i]);
        rule.points.push_back({1.0 - x - y, x, y});
        rule.weights.push_back(wu[i] * wv[j] * (1.0 - xu[i]));
      }
  } else {
    throw std::invalid_argument("quadrature_rule: dimension must be 1 or 2");
  }
  return rule;
}

}  // namespace rdmood
