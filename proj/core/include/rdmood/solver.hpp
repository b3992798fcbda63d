#pragma once

// Time-marching driver: CFL step control plus either plain DeC stepping at a
// fixed scheme level or the full a posteriori MOOD loop per step.

#include <functional>

#include "rdmood/mood.hpp"

namespace rdmood {

struct SolverOptions {
  double cfl = 0.1;
  double final_time = 0.0;
  DecConfig dec;
  DetectorConfig detector;
  bool use_mood = true;
  int max_steps = 10'000'000;
};

struct StepDiagnostics {
  int step = 0;
  double t = 0.0;
  double dt = 0.0;
  DetectionReport report;
};

template <int Dim>
struct RunResult {
  std::vector<StateVec<Dim>> u;
  int steps = 0;
  double t = 0.0;
  // Accumulated detection counters over the whole run.
  long n_pad = 0, n_cad = 0, n_dmp = 0, n_se = 0, n_bad = 0;
  long n_core_cells = 0;
};

template <int Dim>
using StepCallback =
    std::function<void(const StepDiagnostics&, const std::vector<StateVec<Dim>>&)>;

template <int Dim>
RunResult<Dim> run_solver(const Discretization<Dim>& disc, const std::vector<StateVec<Dim>>& u0,
                          const SolverOptions& opts, const StepCallback<Dim>& on_step = {}) {
  RunResult<Dim> out;
  out.u = u0;
  const double T = opts.final_time;
  while (out.t < T && out.steps < opts.max_steps) {
    double dt = compute_dt(disc.mesh(), disc.gas(), out.u, opts.cfl);
    if (!(dt > 1e-13 * T) || !std::isfinite(dt))
      throw std::runtime_error("vanishing or invalid time step (solution blew up?)");
    dt = std::min(dt, T - out.t);
    StepDiagnostics diag;
    if (opts.use_mood) {
      auto res = mood_step(disc, opts.dec, opts.detector, out.u, dt);
      out.u = std::move(res.u);
      diag.report = std::move(res.report);
      out.n_pad += diag.report.n_pad;
      out.n_cad += diag.report.n_cad;
      out.n_dmp += diag.report.n_dmp;
      out.n_se += diag.report.n_se;
      out.n_bad += diag.report.n_bad;
      out.n_core_cells += diag.report.n_core_cells;
    } else {
      const std::vector<SchemeLevel> scheme(disc.mesh().n_cells(), opts.detector.cascade.front());
      out.u = dec_step(disc, scheme, out.u, dt, opts.dec);
    }
    out.t += dt;
    ++out.steps;
    if (on_step) {
      diag.step = out.steps;
      diag.t = out.t;
      diag.dt = dt;
      on_step(diag, out.u);
    }
  }
  return out;
}

}  // namespace rdmood
