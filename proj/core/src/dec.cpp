#include "rdmood/dec.hpp"

#include "rdmood/quadrature.hpp"

namespace rdmood {

Eigen::MatrixXd zeta_coefficients(int subintervals) {
  const int M = subintervals;
  if (M < 1) throw std::invalid_argument("DeC needs at least one subinterval");
  // Lagrange basis on equispaced nodes xi_l = l/M, integrated with a Gauss
  // rule exact for the polynomial degree M.
  std::vector<double> qx, qw;
  gauss_legendre_unit((M + 2) / 2 + 1, qx, qw);
  auto lagrange = [&](int l, double x) {
    double p = 1.0;
    for (int j = 0; j <= M; ++j) {
      if (j == l) continue;
      p *= (x - static_cast<double>(j) / M) / (static_cast<double>(l - j) / M);
    }
    return p;
  };
  Eigen::MatrixXd zeta(M + 1, M);
  for (int m = 1; m <= M; ++m) {
    const double xm = static_cast<double>(m) / M;
    for (int l = 0; l <= M; ++l) {
      double s = 0.0;
      for (size_t q = 0; q < qx.size(); ++q) s += qw[q] * lagrange(l, xm * qx[q]);
      zeta(l, m - 1) = xm * s;
    }
  }
  return zeta;
}

}  // namespace rdmood
