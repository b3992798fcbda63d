// Command-line driver: `rdmood solve` runs one benchmark case and writes CSV
// snapshots plus per-step diagnostics; `rdmood converge` runs a mesh
// refinement study and prints an (h, error, order) table.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "rdmood/bench.hpp"
#include "rdmood/config.hpp"

namespace fs = std::filesystem;
using namespace rdmood;

namespace {

std::string snapshot_name(int step, double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "solution_%06d_t%.6f.csv", step, t);
  return buf;
}

template <int Dim>
void write_snapshot(const fs::path& path, const Mesh<Dim>& mesh,
                    const std::vector<StateVec<Dim>>& u, const std::vector<int>& scheme_level,
                    const GasModel& gas) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.precision(17);
  out << (Dim == 1 ? "x" : "x,y") << ",rho,u" << (Dim == 2 ? ",v" : "") << ",p,E,cell_scheme_level\n";
  const auto sampled = sample_at_dofs(mesh, u);
  for (int d = 0; d < mesh.n_dofs(); ++d) {
    const auto state = ConservedState<Dim>::from_vec(sampled[d]);
    const auto w = primitive_from_conserved(state, gas);
    int level = 2;
    for (int k : mesh.dof_cells(d))
      level = std::min(level, scheme_level.empty() ? 2 : scheme_level[k]);
    for (int c = 0; c < Dim; ++c) out << mesh.dof_coord(d)[c] << ',';
    out << w.rho;
    for (int c = 0; c < Dim; ++c) out << ',' << w.velocity[c];
    out << ',' << w.pressure << ',' << state.energy << ',' << level << '\n';
  }
}

template <int Dim>
int run_case(const RunConfig& cfg, const BenchmarkCase<Dim>& bc) {
  Mesh<Dim> mesh = [&] {
    if (!cfg.mesh_file.empty()) {
      if constexpr (Dim == 1)
        return load_mesh_1d(cfg.mesh_file, cfg.order);
      else
        return load_mesh_2d(cfg.mesh_file, cfg.order);
    }
    return bc.make_mesh(cfg.resolved_cells(Dim), cfg.order);
  }();

  const fs::path out_dir = cfg.out_dir.empty() ? fs::path("rdmood_out") : fs::path(cfg.out_dir);
  fs::create_directories(out_dir);
  {
    std::ofstream echo(out_dir / "config.txt");
    echo << config_to_string(cfg);
  }

  const Discretization<Dim> disc(mesh, bc.gas, cfg.jump_params(Dim));
  const SolverOptions opts = cfg.solver_options(Dim, bc.final_time);
  auto u0 = init_field(mesh, bc);

  std::ofstream diag(out_dir / "diagnostics.csv");
  diag.precision(17);
  diag << "step,t,dt,cells_s2,cells_s1,cells_s0,pad,cad,dmp,se,bad\n";
  std::vector<int> last_levels(mesh.n_cells(), 2);

  auto on_step = [&](const StepDiagnostics& d, const std::vector<StateVec<Dim>>& u_now) {
    std::array<long, 3> per_level{0, 0, 0};
    if (!d.report.scheme_level.empty()) {
      last_levels = d.report.scheme_level;
      for (int lvl : last_levels) per_level[std::clamp(lvl, 0, 2)]++;
    } else {
      per_level[2] = mesh.n_cells();
    }
    diag << d.step << ',' << d.t << ',' << d.dt << ',' << per_level[2] << ',' << per_level[1]
         << ',' << per_level[0] << ',' << d.report.n_pad << ',' << d.report.n_cad << ','
         << d.report.n_dmp << ',' << d.report.n_se << ',' << d.report.n_bad << '\n';
    if (cfg.output_every > 0 && d.step % cfg.output_every == 0)
      write_snapshot(out_dir / snapshot_name(d.step, d.t), mesh, u_now, last_levels, bc.gas);
  };

  const RunResult<Dim> result = run_solver<Dim>(disc, u0, opts, on_step);

  write_snapshot(out_dir / snapshot_name(result.steps, result.t), mesh, result.u, last_levels,
                 bc.gas);

  bool finite = true;
  for (const auto& v : result.u) finite = finite && v.allFinite();
  std::cout << "case " << bc.name << ": " << result.steps << " steps to t = " << result.t
            << ", dofs = " << mesh.n_dofs() << "\n"
            << "detections: pad " << result.n_pad << ", cad " << result.n_cad << ", dmp "
            << result.n_dmp << ", se " << result.n_se << ", recomputed cells " << result.n_bad
            << "\n"
            << "output: " << out_dir.string() << "\n";
  if (!finite) {
    std::cerr << "error: final state contains non-finite values\n";
    return 1;
  }
  return 0;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  if (out.empty()) throw std::runtime_error("empty list: " + csv);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A posteriori limited residual distribution solver for the Euler equations"};
  app.require_subcommand(1);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Run one benchmark case");
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  solve->add_option("--config", config_path, "key=value config file");
  auto add_override = [&](const std::string& key, const std::string& flag,
                          const std::string& help) {
    solve
        ->add_option_function<std::string>(
            flag, [&overrides, key](const std::string& v) { overrides.push_back({key, v}); },
            help)
        ->expected(1);
  };
  add_override("case", "--case", "benchmark case: isentropic|sod|shu_osher|woodward_colella|sod2d");
  add_override("order", "--order", "Bernstein degree (1|2|3)");
  add_override("cells", "--cells", "cells per direction");
  add_override("mesh", "--mesh", "mesh file (exclusive with --cells)");
  add_override("se", "--se", "smoothness extrema variant: cse|lse|none");
  add_override("cascade", "--cascade", "full|reduced");
  add_override("cfl", "--cfl", "CFL number");
  add_override("out", "--out", "output directory");
  add_override("M", "--subintervals", "DeC subintervals M");
  add_override("R", "--corrections", "DeC corrections R");
  add_override("eps1", "--eps1", "DMP relaxation eps1");
  add_override("eps2", "--eps2", "DMP relaxation eps2");
  add_override("theta1", "--theta1", "gradient jump coefficient");
  add_override("theta2", "--theta2", "curvature jump coefficient");
  add_override("variable", "--variable", "detection variable: density|all");
  add_override("mood", "--mood", "a posteriori limiting: on|off");
  add_override("every", "--every", "snapshot cadence in steps (0: final only)");

  // ---- converge ----
  auto* converge = app.add_subcommand("converge", "Mesh refinement study");
  std::string conv_case = "isentropic", orders_csv = "1,2,3", cells_csv = "20,40,80,160";
  double conv_cfl = 0.1;
  converge->add_option("--case", conv_case, "smooth case with exact solution");
  converge->add_option("--orders", orders_csv, "comma-separated degrees");
  converge->add_option("--cells", cells_csv, "comma-separated mesh sizes");
  converge->add_option("--cfl", conv_cfl, "CFL number");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      RunConfig cfg = parse_config_file(config_path);
      for (const auto& [k, v] : overrides) apply_config_entry(cfg, k, v);
      if (cfg.case_name == "sod2d") return run_case<2>(cfg, sod2d_case());
      return run_case<1>(cfg, case_1d_by_name(cfg.case_name));
    }
    // converge
    const BenchmarkCase<1> bc = case_1d_by_name(conv_case);
    if (!bc.exact) throw std::runtime_error("case has no exact solution");
    std::cout << "order,cells,h,l1_rho,observed_order\n";
    for (int order : parse_int_list(orders_csv)) {
      RunConfig cfg;
      cfg.order = order;
      cfg.cfl = conv_cfl;
      const auto rows = convergence_suite(bc, order, parse_int_list(cells_csv),
                                          cfg.solver_options(1, bc.final_time),
                                          cfg.jump_params(1));
      for (const auto& r : rows)
        std::cout << order << ',' << r.cells << ',' << r.h << ',' << r.err << ',' << r.order
                  << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
