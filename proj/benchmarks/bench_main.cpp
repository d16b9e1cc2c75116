#include <benchmark/benchmark.h>

#include <cmath>

#include "kppwaves/asymptotics.hpp"
#include "kppwaves/pde.hpp"
#include "kppwaves/phase.hpp"
#include "kppwaves/problem.hpp"
#include "kppwaves/profile.hpp"

using namespace kppwaves;

namespace {

const ProblemSpec kExact = ProblemSpec::power_law(1, 1, 1, 0);
const ProblemSpec kClassical = ProblemSpec::power_law(1, 0, 1, 0);
const double kCExact = 1.0 / std::sqrt(2.0);

void bm_solve_phase(benchmark::State& state) {
    CompositeNonlinearity f = composite(kExact);
    for (auto _ : state) {
        PhaseSolution ps = solve_phase(f, kCExact);
        benchmark::DoNotOptimize(ps.y_at_rmin);
    }
}
BENCHMARK(bm_solve_phase);

void bm_critical_speed_exact(benchmark::State& state) {
    CompositeNonlinearity f = composite(kExact);
    for (auto _ : state) {
        SpeedResult sr = critical_speed(f);
        benchmark::DoNotOptimize(sr.c_star);
    }
}
BENCHMARK(bm_critical_speed_exact);

void bm_critical_speed_classical(benchmark::State& state) {
    CompositeNonlinearity f = composite(kClassical);
    for (auto _ : state) {
        SpeedResult sr = critical_speed(f);
        benchmark::DoNotOptimize(sr.c_star);
    }
}
BENCHMARK(bm_critical_speed_classical);

void bm_reconstruct_profile(benchmark::State& state) {
    CompositeNonlinearity f = composite(kExact);
    PhaseSolution ps = solve_phase(f, kCExact);
    for (auto _ : state) {
        WaveProfile wp = reconstruct_profile(kExact, ps);
        benchmark::DoNotOptimize(wp.z1);
    }
}
BENCHMARK(bm_reconstruct_profile);

void bm_classify(benchmark::State& state) {
    for (auto _ : state) {
        ClassificationReport r = classify(kExact);
        benchmark::DoNotOptimize(r.predicted_theta);
    }
}
BENCHMARK(bm_classify);

void bm_pde_step(benchmark::State& state) {
    PdeOptions o;
    o.domain_length = 50.0;
    Simulator sim(kClassical, o);
    double dt = sim.stable_dt();
    for (auto _ : state) {
        sim.step(dt);
        benchmark::DoNotOptimize(sim.time());
    }
}
BENCHMARK(bm_pde_step);

}  // namespace

BENCHMARK_MAIN();
