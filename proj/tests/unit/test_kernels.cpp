#include "fixtures.hpp"

#include "cavhhg/floquet.hpp"
#include "cavhhg/kernels.hpp"

#include <doctest.h>

#include <vector>

using namespace cavhhg;

namespace {

std::vector<cplx> random_vector(fixtures::Gen& g, std::size_t n) {
    std::vector<cplx> v(n);
    for (auto& z : v) z = g.complex(-1, 1);
    return v;
}

} // namespace

TEST_CASE("parallel Floquet apply is bit-identical to the serial reference") {
    fixtures::Gen gen(11);
    const FloquetOperator op(fixtures::small_problem());
    const auto in = random_vector(gen, op.dimension());
    std::vector<cplx> a(op.dimension()), b(op.dimension());
    op.apply(in.data(), a.data());
    op.apply_serial(in.data(), b.data());
    CHECK(a == b);
}

TEST_CASE("Floquet apply matches the dense operator") {
    fixtures::Gen gen(12);
    auto p = fixtures::small_problem();
    p.grid.points = 41;
    p.grid.extent = 20.0;
    p.basis = {-3, 3};
    const FloquetOperator op(p);
    const auto in = random_vector(gen, op.dimension());
    std::vector<cplx> out(op.dimension());
    op.apply(in.data(), out.data());
    const Eigen::MatrixXcd D = op.to_dense();
    const Eigen::VectorXcd ref = D * Eigen::Map<const Eigen::VectorXcd>(in.data(), in.size());
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - ref[i]) < 1e-12);
    // complex symmetric, not Hermitian
    CHECK((D - D.transpose()).norm() < 1e-14);
    CHECK((D - D.adjoint()).norm() > 1e-3);
}

TEST_CASE("channel sums, synthesis and DFT kernels agree between variants") {
    fixtures::Gen gen(13);
    const int channels = 9, points = 57;
    const auto data = random_vector(gen, std::size_t(channels) * points);
    const auto other = random_vector(gen, std::size_t(channels) * points);
    const auto weight = random_vector(gen, points);
    const kernels::ChannelView a{channels, points, data}, b{channels, points, other};
    const std::vector<int> shifts{1, 2, 3, 5, 8};
    std::vector<cplx> s1(shifts.size()), s2(shifts.size());
    kernels::serial::channel_pair_sums(a, weight, shifts, s1);
    kernels::parallel::channel_pair_sums(a, weight, shifts, s2);
    CHECK(s1 == s2);
    CHECK(kernels::serial::cross_channel_sum(a, b, weight) ==
          kernels::parallel::cross_channel_sum(a, b, weight));

    std::vector<double> order{27, 29, 31.5}, amp{1.0, 0.5, 0.25}, phase{0.0, 0.3, -1.0}, t(500);
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = j / 125.0;
    std::vector<double> f1(t.size()), f2(t.size());
    kernels::serial::cosine_synthesis(order, amp, phase, t, f1);
    kernels::parallel::cosine_synthesis(order, amp, phase, t, f2);
    CHECK(f1 == f2);

    std::vector<double> win(t.size(), 1.0), ords{1, 2, 3};
    std::vector<cplx> d1(3), d2(3);
    kernels::serial::windowed_dft(f1, win, t, 0.057, ords, d1);
    kernels::parallel::windowed_dft(f1, win, t, 0.057, ords, d2);
    CHECK(d1 == d2);
}
