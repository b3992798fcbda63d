#pragma once

// Exact solver for the 1D Euler Riemann problem (used as a reference oracle
// for the shock-tube benchmarks, not inside the numerical schemes).

#include <stdexcept>

namespace rdmood {

struct RiemannSide {
  double rho;
  double u;
  double p;
};

class RiemannSolution {
 public:
  RiemannSolution(const RiemannSide& left, const RiemannSide& right, double gamma);

  double p_star() const { return p_star_; }
  double u_star() const { return u_star_; }

  /// State along the self-similar ray x/t = xi.
  RiemannSide sample(double xi) const;

 private:
  RiemannSide l_, r_;
  double gamma_;
  double p_star_ = 0.0, u_star_ = 0.0;
};

/// Star pressure by bisection only; independent cross-check for the Newton
/// iteration used in RiemannSolution.
double riemann_star_pressure_bisection(const RiemannSide& left, const RiemannSide& right,
                                       double gamma, double tol = 1e-12);

}  // namespace rdmood
