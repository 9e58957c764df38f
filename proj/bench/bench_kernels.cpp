// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "conjoint/linalg.hpp"
#include "conjoint/oracle.hpp"
#include "conjoint/random_scenario.hpp"

using namespace conjoint;

namespace {

ComplexMatrix random_square(std::size_t n, std::uint64_t seed) {
    RngStream rng(seed);
    ComplexMatrix m(n, n);
    for (auto& z : m.entries()) {
        z = {rng.next_normal(), rng.next_normal()};
    }
    return m;
}

template <auto Kernel>
void matmul_bench(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_square(n, 1);
    const ComplexMatrix b = random_square(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(a, b));
    }
    state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void tensor_bench(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_square(n, 3);
    const ComplexMatrix b = random_square(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(a, b));
    }
}

template <auto Kernel>
void partial_trace_bench(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix rho = random_square(d * d, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(rho, d, d, Subsystem::A));
    }
}

template <auto Sampler>
void sampler_bench(benchmark::State& state) {
    RngStream rng(6);
    const JointTable table = enumerate_joint(random_joint_scenario(4, 4, rng));
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Sampler(table, n, 7));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

constexpr ComplexMatrix (*kMatmul)(const ComplexMatrix&, const ComplexMatrix&) = &matmul;
constexpr ComplexMatrix (*kMatmulSerial)(const ComplexMatrix&, const ComplexMatrix&) = &serial::matmul;
constexpr ComplexMatrix (*kTensor)(const ComplexMatrix&, const ComplexMatrix&) = &tensor_product;
constexpr ComplexMatrix (*kTensorSerial)(const ComplexMatrix&, const ComplexMatrix&) = &serial::tensor_product;
constexpr SampleRun (*kSample)(const JointTable&, std::uint64_t, std::uint64_t) = &sample_joint;
constexpr SampleRun (*kSampleSerial)(const JointTable&, std::uint64_t, std::uint64_t) = &serial::sample_joint;

}  // namespace

BENCHMARK(matmul_bench<kMatmulSerial>)->Name("matmul/serial")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(matmul_bench<kMatmul>)->Name("matmul/openmp")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(tensor_bench<kTensorSerial>)->Name("tensor_product/serial")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(tensor_bench<kTensor>)->Name("tensor_product/openmp")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(partial_trace_bench<&serial::partial_trace>)->Name("partial_trace/serial")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(partial_trace_bench<&partial_trace>)->Name("partial_trace/openmp")->RangeMultiplier(2)->Range(4, 32);
BENCHMARK(sampler_bench<kSampleSerial>)->Name("sample_joint/serial")->Arg(100'000)->Arg(1'000'000);
BENCHMARK(sampler_bench<kSample>)->Name("sample_joint/openmp")->Arg(100'000)->Arg(1'000'000);

BENCHMARK_MAIN();
