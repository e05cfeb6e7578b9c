// Serial reference vs OpenMP kernels at production sizes. OMP_NUM_THREADS
// sets the parallel width.

#include "cavhhg/config.hpp"
#include "cavhhg/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace cavhhg;
using kernels::cplx;

namespace {

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> v(n);
    for (auto& x : v) x = {u(rng), u(rng)};
    return v;
}

template <bool Parallel>
void floquet_apply(benchmark::State& state) {
    const FloquetOperator op(RunConfig{}.problem());
    const auto in = random_vector(op.dimension(), 1);
    std::vector<cplx> out(op.dimension());
    for (auto _ : state) {
        if constexpr (Parallel) op.apply(in.data(), out.data());
        else op.apply_serial(in.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void channel_pair_sums(benchmark::State& state) {
    const int channels = 81, points = 1024;
    const auto data = random_vector(std::size_t(channels) * points, 2);
    const auto weight = random_vector(points, 3);
    std::vector<int> shifts;
    for (int M = 1; M <= 46; ++M) shifts.push_back(M);
    std::vector<cplx> out(shifts.size());
    const kernels::ChannelView phi{channels, points, data};
    for (auto _ : state) {
        if constexpr (Parallel) kernels::parallel::channel_pair_sums(phi, weight, shifts, out);
        else kernels::serial::channel_pair_sums(phi, weight, shifts, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void cosine_synthesis(benchmark::State& state) {
    std::vector<double> order, amplitude, phase(40, 0.0), t(4 * 4096), field(t.size());
    for (int k = 0; k < 40; ++k) order.push_back(26.5 + 0.5 * k), amplitude.push_back(1.0 / (k + 1));
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = double(j) / 4096;
    for (auto _ : state) {
        if constexpr (Parallel) kernels::parallel::cosine_synthesis(order, amplitude, phase, t, field);
        else kernels::serial::cosine_synthesis(order, amplitude, phase, t, field);
        benchmark::DoNotOptimize(field.data());
    }
}

template <bool Parallel>
void windowed_dft(benchmark::State& state) {
    const double omega = 0.057, dt = 0.05;
    const auto n = std::size_t(24 * 2.0 * M_PI / omega / dt);
    std::vector<double> signal(n), window(n), t(n), order;
    for (std::size_t j = 0; j < n; ++j) {
        t[j] = j * dt;
        signal[j] = std::sin(3.0 * omega * t[j]) + 0.1 * std::sin(15.0 * omega * t[j]);
        window[j] = std::pow(std::sin(M_PI * double(j) / double(n - 1)), 2);
    }
    for (int k = 1; k <= 900; ++k) order.push_back(k / 20.0);
    std::vector<cplx> out(order.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::parallel::windowed_dft(signal, window, t, omega, order, out);
        else kernels::serial::windowed_dft(signal, window, t, omega, order, out);
        benchmark::DoNotOptimize(out.data());
    }
}

} // namespace

BENCHMARK(floquet_apply<false>)->Name("floquet_apply/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(floquet_apply<true>)->Name("floquet_apply/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(channel_pair_sums<false>)->Name("channel_pair_sums/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(channel_pair_sums<true>)->Name("channel_pair_sums/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(cosine_synthesis<false>)->Name("cosine_synthesis/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(cosine_synthesis<true>)->Name("cosine_synthesis/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(windowed_dft<false>)->Name("windowed_dft/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(windowed_dft<true>)->Name("windowed_dft/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
