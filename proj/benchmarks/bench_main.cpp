#include <benchmark/benchmark.h>

#include "slowhom/bem.hpp"
#include "slowhom/family.hpp"
#include "slowhom/halfspace.hpp"

using namespace slowhom;

namespace {

void BM_DirectionConstruction(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    IntVector seed(d);
    seed[0] = 1;
    for (auto _ : state) {
        auto cert = construct_bad_direction(Omega1::plain(Modulus::power(0.5)), 4, seed, 10, mpq_class(1, 2));
        benchmark::DoNotOptimize(cert.stages.size());
    }
}
BENCHMARK(BM_DirectionConstruction)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DirectionVerification(benchmark::State& state) {
    const auto cert =
        construct_bad_direction(Omega1::halfspace(Modulus::power(0.5), true), 4, make_int_vector({1, 0}), 10, mpq_class(1, 2));
    for (auto _ : state) benchmark::DoNotOptimize(verify_direction_certificate(cert).pass);
}
BENCHMARK(BM_DirectionVerification)->Unit(benchmark::kMillisecond);

void BM_HalfspaceSchedule(benchmark::State& state) {
    const Modulus w = Modulus::power(0.5);
    const Omega1 om = Omega1::halfspace(w, true);
    const auto data = build_boundary_data(construct_bad_direction(om, 4, make_int_vector({1, 0}), 10, mpq_class(1, 2)), 4);
    for (auto _ : state) benchmark::DoNotOptimize(certify_slow_convergence(data, w, 4, &om).pass);
}
BENCHMARK(BM_HalfspaceSchedule)->Unit(benchmark::kMicrosecond);

void BM_OscillatoryIntegral(benchmark::State& state) {
    const Profile F = gaussian_profile();
    const double a = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(profile_cos_integral(F, a).value);
    state.SetLabel(profile_cos_integral(F, a).backend);
}
BENCHMARK(BM_OscillatoryIntegral)->Arg(10)->Arg(10000)->Arg(100000000)->Unit(benchmark::kMicrosecond);

void BM_NystromSolve(benchmark::State& state) {
    const Domain d = build_prototype_domain(PrototypeParams{1.1, 0.05, 5.0, 1.0});
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        NystromSolver S(d, n);
        auto u = solve_dirichlet_laplace(S, [](const Vec2& y) { return y.x() * y.y(); });
        benchmark::DoNotOptimize(u(d.centroid()));
    }
}
BENCHMARK(BM_NystromSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
