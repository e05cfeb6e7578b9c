#include "cavhhg/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace cavhhg::kernels {

void set_threads(int n) {
#if defined(_OPENMP)
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace parallel {

void floquet_apply(const FloquetStencil& op, std::span<const cplx> in, std::span<cplx> out) {
    const int np = op.points, nc = op.channels;
    const int reach = static_cast<int>(op.kinetic.size()) - 1;
    if (in.size() != static_cast<std::size_t>(np) * nc || out.size() != in.size())
        throw std::invalid_argument("floquet_apply: vector length mismatch");
    const cplx* src = in.data();
    cplx* dst = out.data();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < np; ++i) {
        const std::size_t row = static_cast<std::size_t>(i) * nc;
        const cplx diag = op.kinetic[0] + op.potential[i];
        const cplx g = op.coupling[i];
        for (int c = 0; c < nc; ++c) {
            const std::size_t at = row + c;
            const double shift = (op.channel_min + c) * op.omega;
            cplx acc = (diag + shift) * src[at];
            for (int k = 1; k <= reach; ++k) {
                if (i - k >= 0) acc += op.kinetic[k] * src[at - static_cast<std::size_t>(k) * nc];
                if (i + k < np) acc += op.kinetic[k] * src[at + static_cast<std::size_t>(k) * nc];
            }
            cplx neighbours{};
            if (c > 0) neighbours += src[at - 1];
            if (c + 1 < nc) neighbours += src[at + 1];
            dst[at] = acc + g * neighbours;
        }
    }
}

void channel_pair_sums(const ChannelView& phi, std::span<const cplx> weight,
                       std::span<const int> shifts, std::span<cplx> out) {
    if (out.size() != shifts.size()) throw std::invalid_argument("channel_pair_sums: size mismatch");
    const int count = static_cast<int>(shifts.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        const int m = shifts[k];
        cplx total{};
        for (int n = 0; n < phi.channels; ++n) {
            const int up = n + m;
            if (up < 0 || up >= phi.channels) continue;
            const cplx* a = phi.row(up);
            const cplx* b = phi.row(n);
            cplx partial{};
            for (int i = 0; i < phi.points; ++i) partial += a[i] * weight[i] * b[i];
            total += partial;
        }
        out[k] = total;
    }
}

cplx cross_channel_sum(const ChannelView& a, const ChannelView& b, std::span<const cplx> weight) {
    if (a.channels != b.channels || a.points != b.points)
        throw std::invalid_argument("cross_channel_sum: shape mismatch");
    std::vector<cplx> partials(static_cast<std::size_t>(a.channels));
#pragma omp parallel for schedule(static)
    for (int n = 0; n < a.channels; ++n) {
        const cplx* pa = a.row(n);
        const cplx* pb = b.row(n);
        cplx partial{};
        for (int i = 0; i < a.points; ++i) partial += pa[i] * weight[i] * pb[i];
        partials[static_cast<std::size_t>(n)] = partial;
    }
    cplx total{};
    for (const cplx& p : partials) total += p;
    return total;
}

void cosine_synthesis(std::span<const double> order, std::span<const double> amplitude,
                      std::span<const double> phase, std::span<const double> t,
                      std::span<double> field) {
    const long count = static_cast<long>(t.size());
#pragma omp parallel for schedule(static)
    for (long j = 0; j < count; ++j) {
        double f = 0.0;
        for (std::size_t k = 0; k < order.size(); ++k)
            f += amplitude[k] * std::cos(2.0 * std::numbers::pi * order[k] * t[j] + phase[k]);
        field[j] = f;
    }
}

void windowed_dft(std::span<const double> signal, std::span<const double> window,
                  std::span<const double> t, double omega, std::span<const double> order,
                  std::span<cplx> out) {
    const int count = static_cast<int>(order.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        cplx acc{};
        const double w = order[k] * omega;
        for (std::size_t j = 0; j < signal.size(); ++j)
            acc += signal[j] * window[j] * std::polar(1.0, -w * t[j]);
        out[k] = acc;
    }
}

} // namespace parallel
} // namespace cavhhg::kernels
