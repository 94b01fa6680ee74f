// Micro-benchmarks for the hot paths: matrix-free replica application,
// dense eigendecomposition, subsystem sweeps, and the brute-force Pauli
// window oracle.
#include <benchmark/benchmark.h>

#include "magic_spectra/oracle.hpp"
#include "magic_spectra/pauli_replica.hpp"
#include "magic_spectra/skeleton.hpp"
#include "magic_spectra/spectra.hpp"

using namespace msp;

namespace {

struct Setup {
  ImpsState st;
  PauliMps pm;
  ReplicaOperator op;
  Vec ll, rr;
  explicit Setup(ImpsState s, int n = 2)
      : st(std::move(s)), pm(exact_pauli_mps(st)) {
    op = replica_operator(pm, n);
    std::tie(ll, rr) = replicated_boundary(st, pm, n);
  }
};

void bm_replica_apply(benchmark::State& state) {
  const int chi = static_cast<int>(state.range(0));
  Setup s(random_state(2, chi, 1));
  Vec v = Vec::Random(s.op.dim);
  for (auto _ : state) {
    v = s.op.apply(v);
    v /= v.norm();
    benchmark::DoNotOptimize(v.data());
  }
  state.SetLabel("dim " + std::to_string(s.op.dim));
}

void bm_replica_apply_n3(benchmark::State& state) {
  Setup s(chi2_tensors(0.5), 3);
  Vec v = Vec::Random(s.op.dim);
  for (auto _ : state) {
    v = s.op.apply(v);
    v /= v.norm();
    benchmark::DoNotOptimize(v.data());
  }
  state.SetLabel("dim " + std::to_string(s.op.dim));
}

void bm_decompose(benchmark::State& state) {
  Setup s(chi2_tensors(0.5));
  for (auto _ : state) {
    ReplicaSpectrum spec = decompose(s.op, 20, s.ll, s.rr);
    benchmark::DoNotOptimize(spec.mu.data());
  }
}

void bm_subsystem_sweep(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  Setup s(chi2_tensors(0.5));
  for (auto _ : state) {
    double acc = 0.0;
    for (int n_sites = 1; n_sites <= n_max; ++n_sites)
      acc += subsystem_sre(s.op, s.ll, s.rr, n_sites);
    benchmark::DoNotOptimize(acc);
  }
}

void bm_pauli_window_oracle(benchmark::State& state) {
  const int n_sites = static_cast<int>(state.range(0));
  ImpsState st = random_state(2, 2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(window_sre(st, n_sites, 2));
  }
  state.SetLabel(std::to_string(1L << (2 * n_sites)) + " strings");
}

void bm_pure_sre_ed(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  Statevector psi = ground_state(cluster_ising_line(0.7, l));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sre_pure(psi, 2));
  }
}

}  // namespace

BENCHMARK(bm_replica_apply)->Arg(2)->Arg(3);
BENCHMARK(bm_replica_apply_n3);
BENCHMARK(bm_decompose);
BENCHMARK(bm_subsystem_sweep)->Arg(16)->Arg(64);
BENCHMARK(bm_pauli_window_oracle)->Arg(4)->Arg(6);
BENCHMARK(bm_pure_sre_ed)->Arg(8);

BENCHMARK_MAIN();
