// Microbenchmarks for the hot paths: residual assembly per scheme level and a
// full DeC step, in 1D and 2D.

#include <benchmark/benchmark.h>

#include "rdmood/bench.hpp"
#include "rdmood/dec.hpp"

using namespace rdmood;

namespace {

template <int Dim>
struct Setup {
  Mesh<Dim> mesh;
  Discretization<Dim> disc;
  std::vector<StateVec<Dim>> u;

  static Setup make(int n, int degree) {
    if constexpr (Dim == 1) {
      auto bc = sod_case();
      Mesh<1> mesh = bc.make_mesh(n, degree);
      Discretization<1> disc(mesh, bc.gas, JumpParams{1.0, 0.0});
      auto u = init_field(mesh, bc);
      return {std::move(mesh), std::move(disc), std::move(u)};
    } else {
      auto bc = sod2d_case();
      Mesh<2> mesh = bc.make_mesh(n, degree);
      Discretization<2> disc(mesh, bc.gas, JumpParams{0.01, 0.0});
      auto u = init_field(mesh, bc);
      return {std::move(mesh), std::move(disc), std::move(u)};
    }
  }
};

template <int Dim>
void bm_residuals(benchmark::State& state) {
  const auto s = Setup<Dim>::make(Dim == 1 ? 400 : 24, static_cast<int>(state.range(1)));
  const std::vector<SchemeLevel> scheme(s.mesh.n_cells(),
                                        static_cast<SchemeLevel>(state.range(0)));
  std::vector<StateVec<Dim>> r;
  for (auto _ : state) {
    s.disc.nodal_residuals(s.u, scheme, r);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * s.mesh.n_cells());
}

template <int Dim>
void bm_dec_step(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const auto s = Setup<Dim>::make(Dim == 1 ? 400 : 24, degree);
  const std::vector<SchemeLevel> scheme(s.mesh.n_cells(), SchemeLevel::galerkin);
  const double dt = compute_dt(s.mesh, s.disc.gas(), s.u, 0.1);
  for (auto _ : state) {
    auto out = dec_step(s.disc, scheme, s.u, dt, dec_for_degree(degree));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * s.mesh.n_cells());
}

}  // namespace

BENCHMARK(bm_residuals<1>)
    ->ArgsProduct({{0, 1, 2}, {1, 2, 3}})
    ->ArgNames({"scheme", "degree"});
BENCHMARK(bm_residuals<2>)
    ->ArgsProduct({{0, 1, 2}, {1, 2, 3}})
    ->ArgNames({"scheme", "degree"});
BENCHMARK(bm_dec_step<1>)->DenseRange(1, 3)->ArgName("degree");
BENCHMARK(bm_dec_step<2>)->DenseRange(1, 3)->ArgName("degree");

BENCHMARK_MAIN();
