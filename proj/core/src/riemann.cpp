#include "rdmood/riemann.hpp"

#include <algorithm>
#include <cmath>

namespace rdmood {

namespace {

// Toro's pressure function f(p; state) and its derivative: shock branch for
// p > p_side, rarefaction branch otherwise.
double pressure_fn(double p, const RiemannSide& s, double gamma, double* deriv = nullptr) {
  const double c = std::sqrt(gamma * s.p / s.rho);
  if (p > s.p) {
    const double a = 2.0 / ((gamma + 1.0) * s.rho);
    const double b = (gamma - 1.0) / (gamma + 1.0) * s.p;
    const double root = std::sqrt(a / (p + b));
    if (deriv) *deriv = root * (1.0 - 0.5 * (p - s.p) / (p + b));
    return (p - s.p) * root;
  }
  const double pr = p / s.p;
  if (deriv) *deriv = std::pow(pr, -(gamma + 1.0) / (2.0 * gamma)) / (s.rho * c);
  return 2.0 * c / (gamma - 1.0) * (std::pow(pr, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

double total_fn(double p, const RiemannSide& l, const RiemannSide& r, double gamma,
                double* deriv = nullptr) {
  double dl = 0.0, dr = 0.0;
  const double fl = pressure_fn(p, l, gamma, deriv ? &dl : nullptr);
  const double fr = pressure_fn(p, r, gamma, deriv ? &dr : nullptr);
  if (deriv) *deriv = dl + dr;
  return fl + fr + (r.u - l.u);
}

void check_side(const RiemannSide& s) {
  if (!(s.rho > 0.0) || !(s.p > 0.0))
    throw std::invalid_argument("Riemann data must have positive density and pressure");
}

}  // namespace

RiemannSolution::RiemannSolution(const RiemannSide& left, const RiemannSide& right, double gamma)
    : l_(left), r_(right), gamma_(gamma) {
  check_side(left);
  check_side(right);
  const double cl = std::sqrt(gamma * l_.p / l_.rho);
  const double cr = std::sqrt(gamma * r_.p / r_.rho);
  if (2.0 * (cl + cr) / (gamma - 1.0) <= r_.u - l_.u)
    throw std::runtime_error("vacuum formation in Riemann problem");

  // Newton from a positivity-clamped two-rarefaction guess, with a bisection
  // safeguard interval maintained alongside.
  double p = std::max(0.5 * (l_.p + r_.p) - 0.125 * (r_.u - l_.u) * (l_.rho + r_.rho) * (cl + cr),
                      1e-8 * std::min(l_.p, r_.p));
  double lo = 1e-14 * std::min(l_.p, r_.p);
  double hi = std::max({l_.p, r_.p, p});
  while (total_fn(hi, l_, r_, gamma_) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double deriv;
    const double f = total_fn(p, l_, r_, gamma_, &deriv);
    (f > 0.0 ? hi : lo) = p;
    const double step = f / deriv;
    double next = p - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - p) <= 1e-12 * p && std::abs(f) < 1e-10) {
      p = next;
      break;
    }
    p = next;
  }
  p_star_ = p;
  u_star_ = 0.5 * (l_.u + r_.u) +
            0.5 * (pressure_fn(p, r_, gamma_) - pressure_fn(p, l_, gamma_));
}

RiemannSide RiemannSolution::sample(double xi) const {
  const double g = gamma_;
  const double gm1 = g - 1.0, gp1 = g + 1.0;
  if (xi <= u_star_) {  // left of the contact
    const RiemannSide& s = l_;
    const double c = std::sqrt(g * s.p / s.rho);
    if (p_star_ > s.p) {  // left shock
      const double sp = s.u - c * std::sqrt(gp1 / (2.0 * g) * p_star_ / s.p + gm1 / (2.0 * g));
      if (xi <= sp) return s;
      const double rho = s.rho * (p_star_ / s.p + gm1 / gp1) / (gm1 / gp1 * p_star_ / s.p + 1.0);
      return {rho, u_star_, p_star_};
    }
    const double c_star = c * std::pow(p_star_ / s.p, gm1 / (2.0 * g));
    if (xi <= s.u - c) return s;
    if (xi >= u_star_ - c_star)
      return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
    const double u = 2.0 / gp1 * (c + gm1 / 2.0 * s.u + xi);
    const double cf = 2.0 / gp1 * (c + gm1 / 2.0 * (s.u - xi));
    return {s.rho * std::pow(cf / c, 2.0 / gm1), u, s.p * std::pow(cf / c, 2.0 * g / gm1)};
  }
  const RiemannSide& s = r_;  // right of the contact
  const double c = std::sqrt(g * s.p / s.rho);
  if (p_star_ > s.p) {  // right shock
    const double sp = s.u + c * std::sqrt(gp1 / (2.0 * g) * p_star_ / s.p + gm1 / (2.0 * g));
    if (xi >= sp) return s;
    const double rho = s.rho * (p_star_ / s.p + gm1 / gp1) / (gm1 / gp1 * p_star_ / s.p + 1.0);
    return {rho, u_star_, p_star_};
  }
  const double c_star = c * std::pow(p_star_ / s.p, gm1 / (2.0 * g));
  if (xi >= s.u + c) return s;
  if (xi <= u_star_ + c_star)
    return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
  const double u = 2.0 / gp1 * (-c + gm1 / 2.0 * s.u + xi);
  const double cf = 2.0 / gp1 * (c - gm1 / 2.0 * (s.u - xi));
  return {s.rho * std::pow(cf / c, 2.0 / gm1), u, s.p * std::pow(cf / c, 2.0 * g / gm1)};
}

double riemann_star_pressure_bisection(const RiemannSide& left, const RiemannSide& right,
                                       double gamma, double tol) {
  check_side(left);
  check_side(right);
  double lo = 1e-14 * std::min(left.p, right.p);
  double hi = std::max(left.p, right.p);
  while (total_fn(hi, left, right, gamma) < 0.0) hi *= 2.0;
  while (total_fn(lo, left, right, gamma) > 0.0) lo *= 0.5;
  for (int it = 0; it < 400 && (hi - lo) > tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total_fn(mid, left, right, gamma) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rdmood
