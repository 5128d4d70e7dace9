// Microbenchmarks for the data-parallel core: the OpenMP shift sweep against
// the serial reference loop, plus the one-off factorization cost.

#include <benchmark/benchmark.h>

#include <complex>

#include "paradiag/bdf.hpp"
#include "paradiag/problems.hpp"
#include "paradiag/shift_bank.hpp"
#include "paradiag/time_circulant.hpp"

namespace {

using namespace paradiag;

struct Fixture {
  SpatialProblem p;
  TimeSpectrum sp;
  ShiftBank bank;
  Eigen::MatrixXcd rhs;

  Fixture(int n, int ell, bool conj_pairs)
      : p(heat2d(n)),
        sp(spectrum(bdf_coefficients(1), ell, 1.0)),
        bank(p.K, sp, 1.0 / ell, conj_pairs),
        rhs(Eigen::MatrixXcd::Random(p.n_bar(), ell)) {}
};

void bm_sweep_parallel(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                   false);
  PinTLedger ledger;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx.bank.sweep(fx.rhs, ledger));
  }
  state.counters["n_bar"] = static_cast<double>(fx.p.n_bar());
  state.counters["workers"] = static_cast<double>(resolve_workers());
}

void bm_sweep_serial(benchmark::State& state) {
  const Fixture fx(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                   false);
  PinTLedger ledger;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fx.bank.sweep_serial(fx.rhs, ledger));
  }
  state.counters["n_bar"] = static_cast<double>(fx.p.n_bar());
}

void bm_factorize(benchmark::State& state) {
  const SpatialProblem p = heat2d(static_cast<int>(state.range(0)));
  const int ell = static_cast<int>(state.range(1));
  const bool conj_pairs = state.range(2) != 0;
  const TimeSpectrum sp = spectrum(bdf_coefficients(1), ell, 1.0);
  for (auto _ : state) {
    const ShiftBank bank(p.K, sp, 1.0 / ell, conj_pairs);
    benchmark::DoNotOptimize(bank.factored_count());
  }
  state.counters["factored"] =
      static_cast<double>(ShiftBank(p.K, sp, 1.0 / ell, conj_pairs).factored_count());
}

}  // namespace

BENCHMARK(bm_sweep_parallel)
    ->ArgsProduct({{32, 64}, {16, 32, 64}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sweep_serial)
    ->ArgsProduct({{32, 64}, {16, 32, 64}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_factorize)
    ->Args({32, 32, 0})
    ->Args({32, 32, 1})
    ->Args({64, 32, 0})
    ->Args({64, 32, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
