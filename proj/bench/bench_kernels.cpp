// Serial reference vs OpenMP kernels. Thread count is the second benchmark argument.

#include <benchmark/benchmark.h>

#include <random>

#include "zup/baseline.hpp"
#include "zup/metrics.hpp"
#include "zup/midframe.hpp"
#include "zup/synthetic.hpp"

namespace {

zup::Volume textured_volume(int depth, int size) {
    zup::Volume v(depth, size, size);
    for (int z = 0; z < depth; ++z)
        v.set_slice(z, zup::synth::smooth_texture(size, size, 3.0, 7, 0.5 * z, 0.25 * z));
    return v;
}

void BM_interp_z_serial(benchmark::State& state) {
    const zup::Volume v = textured_volume(17, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zup::serial::interp_z(v, 4));
}

void BM_interp_z_parallel(benchmark::State& state) {
    const zup::Volume v = textured_volume(17, static_cast<int>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(zup::interp_z(v, 4, {}, threads));
}

void BM_upscale_serial(benchmark::State& state) {
    const zup::Volume v = textured_volume(5, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zup::serial::upscale_volume(v, 4));
}

void BM_upscale_parallel(benchmark::State& state) {
    const zup::Volume v = textured_volume(5, static_cast<int>(state.range(0)));
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(zup::upscale_volume(v, 4, {}, {}, threads));
}

void BM_ssim_serial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const zup::Image a = zup::synth::smooth_texture(n, n, 3.0, 1);
    const zup::Image b = zup::synth::smooth_texture(n, n, 3.0, 1, 1.0, 0.0);
    for (auto _ : state) benchmark::DoNotOptimize(zup::serial::ssim(a, b));
}

void BM_ssim_parallel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const zup::Image a = zup::synth::smooth_texture(n, n, 3.0, 1);
    const zup::Image b = zup::synth::smooth_texture(n, n, 3.0, 1, 1.0, 0.0);
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(zup::ssim(a, b, {}, threads));
}

}  // namespace

BENCHMARK(BM_interp_z_serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_interp_z_parallel)->Args({256, 1})->Args({256, 2})->Args({256, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_upscale_serial)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_upscale_parallel)->Args({128, 1})->Args({128, 2})->Args({128, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ssim_serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ssim_parallel)->Args({256, 1})->Args({256, 2})->Args({256, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
