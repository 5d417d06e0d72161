// Copyright 2026 The oqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <random>

#include <benchmark/benchmark.h>

#include "oqsim/adjoint.hpp"
#include "oqsim/kernels.hpp"

namespace {

using namespace oqsim;

Matrix random_density(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const long d = 1L << n;
    Matrix a(d, d);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < d; ++j) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

template <void (*Kernel)(const Matrix&, std::span<const kernels::WeightedPauli>, Matrix&)>
void BM_ConjugationSum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix rho = random_density(n, 1);
    std::vector<PauliString> strings;
    for (int i = 0; i < n; ++i) {
        strings.push_back(PauliString::single(n, i, Pauli::Z));
    }
    std::vector<kernels::WeightedPauli> terms;
    for (const auto& s : strings) {
        terms.push_back({0.1, &s});
    }
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (auto _ : state) {
        out.setZero();
        Kernel(rho, terms, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(terms.size()) * rho.size());
}

void BM_ConjugationSerial(benchmark::State& state) { BM_ConjugationSum<kernels::serial::pauli_conjugation_sum>(state); }
void BM_ConjugationOmp(benchmark::State& state) { BM_ConjugationSum<kernels::omp::pauli_conjugation_sum>(state); }
BENCHMARK(BM_ConjugationSerial)->Arg(6)->Arg(8)->Arg(10);
BENCHMARK(BM_ConjugationOmp)->Arg(6)->Arg(8)->Arg(10);

void BM_Trajectories(benchmark::State& state, Execution exec) {
    const int n = static_cast<int>(state.range(0));
    const AdjointChannel ch = build_adjoint(build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.1), 0.05);
    const std::vector<double> angles(static_cast<std::size_t>(n), 0.7);
    const StateVector psi = StateVector::product(angles);
    const std::vector<PauliString> obs = {PauliString::single(n, 0, Pauli::Z)};
    for (auto _ : state) {
        auto batch = sample_trajectories(ch, psi, 20, 2048, 1, obs, exec);
        benchmark::DoNotOptimize(batch);
    }
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK_CAPTURE(BM_Trajectories, serial, Execution::serial)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(BM_Trajectories, omp, Execution::parallel)->Arg(4)->Arg(8);

void BM_ApplyAdjoint(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const AdjointChannel ch = build_adjoint(build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.1), 0.05);
    Matrix rho = random_density(n, 2);
    for (auto _ : state) {
        rho = apply_adjoint(ch, rho);
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(BM_ApplyAdjoint)->Arg(4)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
