#pragma once

// Data-parallel inner loops. Every kernel exists twice: `serial` is the
// reference implementation used by the tests, `parallel` is the OpenMP
// version used in production. Each output element is computed by one thread
// with the same operation order as the serial loop, so both variants are
// bit-identical.

#include <complex>
#include <span>

namespace cavhhg::kernels {

using cplx = std::complex<double>;

// Block-banded Floquet operator in grid-major layout: element (i, n) lives at
// i * channels + (n - channel_min).
struct FloquetStencil {
    int points = 0;
    int channels = 0;
    int channel_min = 0;
    double omega = 0.0;
    std::span<const cplx> potential; // diagonal of the atomic block, per grid point
    std::span<const cplx> kinetic;   // kinetic[k] couples i and i +- k; kinetic[0] on the diagonal
    std::span<const cplx> coupling;  // field coupling between channels n and n +- 1, per grid point
};

// Channel functions stored row-major: row n holds phi_n on the grid.
struct ChannelView {
    int channels = 0;
    int points = 0;
    std::span<const cplx> data;

    const cplx* row(int n) const { return data.data() + static_cast<std::size_t>(n) * points; }
};

namespace serial {

void floquet_apply(const FloquetStencil& op, std::span<const cplx> in, std::span<cplx> out);

// out[k] = sum_n sum_i phi_{n + shifts[k]}(x_i) weight(x_i) phi_n(x_i), unscaled by h.
void channel_pair_sums(const ChannelView& phi, std::span<const cplx> weight,
                       std::span<const int> shifts, std::span<cplx> out);

// Bilinear sum between two channel sets with equal shape: sum_n sum_i a_n w b_n.
cplx cross_channel_sum(const ChannelView& a, const ChannelView& b, std::span<const cplx> weight);

// field[j] = sum_k amplitude[k] cos(2 pi order[k] t[j] + phase[k]), t in units of T0.
void cosine_synthesis(std::span<const double> order, std::span<const double> amplitude,
                      std::span<const double> phase, std::span<const double> t,
                      std::span<double> field);

// out[k] = sum_j signal[j] window[j] exp(-i order[k] omega t[j]).
void windowed_dft(std::span<const double> signal, std::span<const double> window,
                  std::span<const double> t, double omega, std::span<const double> order,
                  std::span<cplx> out);

} // namespace serial

namespace parallel {

void floquet_apply(const FloquetStencil& op, std::span<const cplx> in, std::span<cplx> out);
void channel_pair_sums(const ChannelView& phi, std::span<const cplx> weight,
                       std::span<const int> shifts, std::span<cplx> out);
cplx cross_channel_sum(const ChannelView& a, const ChannelView& b, std::span<const cplx> weight);
void cosine_synthesis(std::span<const double> order, std::span<const double> amplitude,
                      std::span<const double> phase, std::span<const double> t,
                      std::span<double> field);
void windowed_dft(std::span<const double> signal, std::span<const double> window,
                  std::span<const double> t, double omega, std::span<const double> order,
                  std::span<cplx> out);

} // namespace parallel

// Thread-count control; no-ops without OpenMP.
void set_threads(int n);
int max_threads();

} // namespace cavhhg::kernels
