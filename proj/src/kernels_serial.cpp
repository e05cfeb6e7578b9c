#include "cavhhg/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cavhhg::kernels::serial {

void floquet_apply(const FloquetStencil& op, std::span<const cplx> in, std::span<cplx> out) {
    const int np = op.points, nc = op.channels;
    const int reach = static_cast<int>(op.kinetic.size()) - 1;
    if (in.size() != static_cast<std::size_t>(np) * nc || out.size() != in.size())
        throw std::invalid_argument("floquet_apply: vector length mismatch");
    for (int i = 0; i < np; ++i) {
        for (int c = 0; c < nc; ++c) {
            const std::size_t at = static_cast<std::size_t>(i) * nc + c;
            const double shift = (op.channel_min + c) * op.omega;
            cplx acc = (op.kinetic[0] + op.potential[i] + shift) * in[at];
            for (int k = 1; k <= reach; ++k) {
                if (i - k >= 0) acc += op.kinetic[k] * in[at - static_cast<std::size_t>(k) * nc];
                if (i + k < np) acc += op.kinetic[k] * in[at + static_cast<std::size_t>(k) * nc];
            }
            cplx neighbours{};
            if (c > 0) neighbours += in[at - 1];
            if (c + 1 < nc) neighbours += in[at + 1];
            out[at] = acc + op.coupling[i] * neighbours;
        }
    }
}

void channel_pair_sums(const ChannelView& phi, std::span<const cplx> weight,
                       std::span<const int> shifts, std::span<cplx> out) {
    if (out.size() != shifts.size()) throw std::invalid_argument("channel_pair_sums: size mismatch");
    for (std::size_t k = 0; k < shifts.size(); ++k) {
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
    cplx total{};
    for (int n = 0; n < a.channels; ++n) {
        const cplx* pa = a.row(n);
        const cplx* pb = b.row(n);
        cplx partial{};
        for (int i = 0; i < a.points; ++i) partial += pa[i] * weight[i] * pb[i];
        total += partial;
    }
    return total;
}

void cosine_synthesis(std::span<const double> order, std::span<const double> amplitude,
                      std::span<const double> phase, std::span<const double> t,
                      std::span<double> field) {
    for (std::size_t j = 0; j < t.size(); ++j) {
        double f = 0.0;
        for (std::size_t k = 0; k < order.size(); ++k)
            f += amplitude[k] * std::cos(2.0 * std::numbers::pi * order[k] * t[j] + phase[k]);
        field[j] = f;
    }
}

void windowed_dft(std::span<const double> signal, std::span<const double> window,
                  std::span<const double> t, double omega, std::span<const double> order,
                  std::span<cplx> out) {
    for (std::size_t k = 0; k < order.size(); ++k) {
        cplx acc{};
        const double w = order[k] * omega;
        for (std::size_t j = 0; j < signal.size(); ++j)
            acc += signal[j] * window[j] * std::polar(1.0, -w * t[j]);
        out[k] = acc;
    }
}

} // namespace cavhhg::kernels::serial
