#pragma once

#include <array>
#include <vector>

namespace rdmood {

/// Quadrature on the reference segment [0,1] (barycentric (1-x, x)) or the
/// reference triangle (area 1/2). Weights are positive and sum to the
/// reference measure; the rule is exact for polynomials up to the degree
/// requested at construction.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;  // barycentric; third entry unused in 1D
  std::vector<double> weights;
  int exact_degree = 0;

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes/weights on [0,1]; exact through degree 2n-1.
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// dimension: 1 (segment) or 2 (triangle). target_degree <= 8.
QuadratureRule quadrature_rule(int target_degree, int dimension);

}  // namespace rdmood
