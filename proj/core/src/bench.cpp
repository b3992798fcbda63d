#include "rdmood/bench.hpp"

#include <cmath>

namespace rdmood {

namespace {

double isentropic_rho0(double x) { return 1.0 + 0.9999995 * std::sin(M_PI * x); }

// Solves g(y) = x + s * sqrt(3) * rho0(y) * t - y = 0 by safeguarded Newton
// (bisection fallback) to 1e-13 residual.
double solve_characteristic(double x, double t, double sign) {
  auto g = [&](double y) { return x + sign * std::sqrt(3.0) * isentropic_rho0(y) * t - y; };
  auto dg = [&](double y) {
    return sign * std::sqrt(3.0) * 0.9999995 * M_PI * std::cos(M_PI * y) * t - 1.0;
  };
  // Characteristic speeds are bounded by sqrt(3) * max(rho0) = 2 sqrt(3).
  double lo = x - 2.0 * std::sqrt(3.0) * t - 1e-12, hi = x + 2.0 * std::sqrt(3.0) * t + 1e-12;
  if (g(lo) < 0.0 || g(hi) > 0.0) throw std::runtime_error("characteristic bracket failed");
  double y = x;
  for (int it = 0; it < 100; ++it) {
    const double gy = g(y);
    if (std::abs(gy) < 1e-13) return y;
    (gy > 0.0 ? lo : hi) = y;  // g is decreasing in y for valid t
    double next = y - gy / dg(y);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    y = next;
  }
  if (std::abs(g(y)) < 1e-11) return y;
  throw std::runtime_error("characteristic solve did not converge (t too large?)");
}

PrimitiveState<1> prim1(double rho, double u, double p) {
  PrimitiveState<1> w;
  w.rho = rho;
  w.velocity[0] = u;
  w.pressure = p;
  return w;
}

std::function<Mesh<1>(int, int)> line_mesh_maker(double a, double b, BcTag tag) {
  return [=](int n, int degree) { return build_line_mesh(a, b, n, degree, tag, tag); };
}

}  // namespace

PrimitiveState<1> isentropic_exact(double x, double t) {
  const double x1 = solve_characteristic(x, t, +1.0);
  const double x2 = solve_characteristic(x, t, -1.0);
  const double rho = 0.5 * (isentropic_rho0(x1) + isentropic_rho0(x2));
  const double u = std::sqrt(3.0) * (rho - isentropic_rho0(x1));
  return prim1(rho, u, std::pow(rho, 3.0));
}

PrimitiveState<1> sod_exact(double x, double t) {
  static const RiemannSolution sol({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4);
  if (t <= 0.0) {
    const auto s = (x < 0.0) ? RiemannSide{1.0, 0.0, 1.0} : RiemannSide{0.125, 0.0, 0.1};
    return prim1(s.rho, s.u, s.p);
  }
  const auto s = sol.sample(x / t);
  return prim1(s.rho, s.u, s.p);
}

BenchmarkCase<1> isentropic_case() {
  BenchmarkCase<1> bc;
  bc.name = "isentropic";
  bc.gas = GasModel{3.0};
  bc.final_time = 0.1;
  bc.smooth = true;
  bc.initial = [](const SpaceVec<1>& x) {
    const double rho = isentropic_rho0(x[0]);
    return prim1(rho, 0.0, std::pow(rho, 3.0));
  };
  bc.exact = [](const SpaceVec<1>& x, double t) { return isentropic_exact(x[0], t); };
  bc.make_mesh = line_mesh_maker(-1.0, 1.0, BcTag::periodic);
  return bc;
}

BenchmarkCase<1> sod_case() {
  BenchmarkCase<1> bc;
  bc.name = "sod";
  bc.gas = GasModel{1.4};
  bc.final_time = 0.16;
  bc.initial = [](const SpaceVec<1>& x) {
    return x[0] < 0.0 ? prim1(1.0, 0.0, 1.0) : prim1(0.125, 0.0, 0.1);
  };
  bc.exact = [](const SpaceVec<1>& x, double t) { return sod_exact(x[0], t); };
  bc.make_mesh = line_mesh_maker(-1.0, 1.0, BcTag::transmissive);
  return bc;
}

BenchmarkCase<1> shu_osher_case() {
  BenchmarkCase<1> bc;
  bc.name = "shu_osher";
  bc.gas = GasModel{1.4};
  bc.final_time = 1.8;
  bc.initial = [](const SpaceVec<1>& x) {
    if (x[0] <= -4.0) return prim1(3.857143, 2.629369, 10.333333);
    return prim1(1.0 + 0.2 * std::sin(5.0 * x[0]), 0.0, 1.0);
  };
  bc.make_mesh = line_mesh_maker(-5.0, 5.0, BcTag::transmissive);
  return bc;
}

BenchmarkCase<1> woodward_colella_case() {
  BenchmarkCase<1> bc;
  bc.name = "woodward_colella";
  bc.gas = GasModel{1.4};
  bc.final_time = 0.038;
  bc.initial = [](const SpaceVec<1>& x) {
    if (x[0] <= 0.1) return prim1(1.0, 0.0, 1e3);
    if (x[0] < 0.9) return prim1(1.0, 0.0, 1e-2);
    return prim1(1.0, 0.0, 1e2);
  };
  bc.make_mesh = line_mesh_maker(0.0, 1.0, BcTag::wall);
  return bc;
}

BenchmarkCase<2> sod2d_case() {
  BenchmarkCase<2> bc;
  bc.name = "sod2d";
  bc.gas = GasModel{1.4};
  bc.final_time = 0.25;
  bc.initial = [](const SpaceVec<2>& x) {
    PrimitiveState<2> w;
    if (x.norm() < 0.5) {
      w.rho = 1.0;
      w.pressure = 1.0;
    } else {
      w.rho = 0.125;
      w.pressure = 0.1;
    }
    w.velocity = SpaceVec<2>::Zero();
    return w;
  };
  bc.make_mesh = [](int n, int degree) {
    return build_structured_tri_mesh(-1.0, 1.0, -1.0, 1.0, n, n, degree, BcTag::transmissive);
  };
  return bc;
}

BenchmarkCase<1> case_1d_by_name(const std::string& name) {
  if (name == "isentropic") return isentropic_case();
  if (name == "sod") return sod_case();
  if (name == "shu_osher") return shu_osher_case();
  if (name == "woodward_colella") return woodward_colella_case();
  throw std::runtime_error("unknown 1D benchmark case '" + name + "'");
}

std::vector<ConvergenceRow> convergence_suite(const BenchmarkCase<1>& bc, int degree,
                                              const std::vector<int>& sizes,
                                              const SolverOptions& base_opts,
                                              const JumpParams& jump) {
  if (!bc.exact) throw std::runtime_error("convergence study needs a case with an exact solution");
  std::vector<ConvergenceRow> rows;
  for (int n : sizes) {
    const Mesh<1> mesh = bc.make_mesh(n, degree);
    const Discretization<1> disc(mesh, bc.gas, jump);
    SolverOptions opts = base_opts;
    opts.final_time = bc.final_time;
    opts.dec = dec_for_degree(degree);
    const auto result = run_solver(disc, init_field(mesh, bc), opts);
    const auto err = l1_error(mesh, result.u, bc.exact, result.t, bc.gas);
    ConvergenceRow row;
    row.cells = n;
    row.h = err.h;
    row.err = err.l1[0];
    if (!rows.empty())
      row.order = std::log(rows.back().err / row.err) / std::log(rows.back().h / row.h);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rdmood
