#include <benchmark/benchmark.h>

#include <planarmap/flow.hpp>
#include <planarmap/hamiltonian.hpp>
#include <planarmap/level_tracer.hpp>
#include <planarmap/parse.hpp>

using namespace planarmap;

namespace {

void bm_poly_multiply(benchmark::State& state) {
    const Polynomial a = parse("y-(2*x-y)^4");
    const Polynomial b = parse("1+x-x^2*y");
    for (auto _ : state) {
        benchmark::DoNotOptimize(a * b);
    }
}
BENCHMARK(bm_poly_multiply);

void bm_jacobian_det(benchmark::State& state) {
    const Polynomial f = parse("y-(2*x-y)^4");
    const Polynomial g = parse("2*x-y");
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian_det(f, g));
    }
}
BENCHMARK(bm_jacobian_det);

void bm_compiled_eval(benchmark::State& state) {
    const CompiledPoly cp(parse("y-(2*x-y)^4"));
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cp(1.25 + x, -0.75));
        x += 1e-9;
    }
}
BENCHMARK(bm_compiled_eval);

void bm_integrate_cubic(benchmark::State& state) {
    const PlanarPolyField X = hamiltonian_field(parse("y-x-x^3"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(X, {0.3, -0.2}, 10.0));
    }
}
BENCHMARK(bm_integrate_cubic);

void bm_count_components(benchmark::State& state) {
    const Polynomial f = parse("1+x-x^2*y");
    const Window w{-10, 10, -10, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(count_components(f, 1.0, w, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_count_components)->Arg(128)->Arg(256);

void bm_trace_level(benchmark::State& state) {
    const Polynomial f = parse("1+x-x^2*y");
    const Window w{-10, 10, -10, 10};
    for (auto _ : state) {
        benchmark::DoNotOptimize(trace_level(f, 1.0, w));
    }
}
BENCHMARK(bm_trace_level);

} // namespace

BENCHMARK_MAIN();
