#include "fixtures.hpp"

#include "cavhhg/atom_grid.hpp"
#include "cavhhg/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

using namespace cavhhg;

TEST_CASE("potential at the origin for unit depth and width 2") {
    AtomModel m;
    m.softcore_width = 2.0;
    SpatialGrid g;
    g.extent = 10.0;
    g.points = 21;
    const CVector v = build_potential(m, g, {0.0});
    CHECK(v[10].real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("unscaled potential is real and even") {
    AtomModel m;
    SpatialGrid g;
    g.extent = 50.0;
    g.points = 101;
    const CVector v = build_potential(m, g, {0.0});
    for (int i = 0; i < g.points; ++i) {
        CHECK(v[i].imag() == 0.0);
        CHECK(v[i] == v[g.mirror(i)]);
    }
}

TEST_CASE("scaled potential is the analytic continuation") {
    AtomModel m;
    SpatialGrid g;
    g.extent = 20.0;
    g.points = 41;
    const ComplexScalingConfig s{0.2};
    const CVector v = build_potential(m, g, s);
    for (int i = 0; i < g.points; ++i) {
        const cplx z = g.x(i) * s.factor();
        CHECK(std::abs(v[i] - (-1.0 / std::sqrt(z * z + m.softcore_width))) < 1e-14);
    }
}

TEST_CASE("finite-difference weights annihilate constants and reproduce x^2") {
    for (int order : {2, 4, 6, 8}) {
        const auto& w = second_derivative_weights(order);
        double sum = w[0], second = 0.0;
        for (std::size_t k = 1; k < w.size(); ++k) {
            sum += 2.0 * w[k];
            second += 2.0 * w[k] * double(k * k);
        }
        CHECK(std::abs(sum) < 1e-13);
        CHECK(second == doctest::Approx(2.0).epsilon(1e-13));
    }
}

TEST_CASE("grid and scaling validation reject invalid values") {
    SpatialGrid g;
    g.points = 2;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g = SpatialGrid{};
    g.fd_order = 5;
    CHECK_THROWS_AS(g.validate(), ConfigError);
    CHECK_THROWS_AS(ComplexScalingConfig{0.8}.validate(), ConfigError);
    CHECK_THROWS_AS(ComplexScalingConfig{-0.1}.validate(), ConfigError);
    AtomModel m;
    m.softcore_width = 0.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

// Oracle: dense diagonalisation of the same FD8 Hamiltonian in scipy.
TEST_CASE("calibrated width reproduces the target ground energy") {
    AtomModel m;
    m.softcore_width = calibrated_softcore_width;
    SpatialGrid g;
    const auto s = solve_field_free(m, g, {0.0}, 2);
    CHECK(s[0].energy.real() == doctest::Approx(calibration_target_energy).epsilon(1e-10));
    CHECK(s[0].energy.imag() == 0.0);

    SpatialGrid small = fixtures::small_problem().grid;
    const auto t = solve_field_free(m, small, {0.0}, 2);
    CHECK(std::abs(t[0].energy.real() - -0.445800683063236) < 1e-11);
    CHECK(std::abs(t[1].energy.real() - -0.217153287343458) < 1e-11);
}

TEST_CASE("bisection recovers the frozen calibration") {
    AtomModel m;
    const double a = calibrate_softcore_width(m, SpatialGrid{}, calibration_target_energy);
    CHECK(a == doctest::Approx(calibrated_softcore_width).epsilon(1e-9));
}

TEST_CASE("field-free states against dense diagonalisation, scaled and unscaled") {
    AtomModel m;
    m.softcore_width = calibrated_softcore_width;
    SpatialGrid g;
    g.extent = 40.0;
    g.points = 161;
    for (double theta : {0.0, 0.15}) {
        const ComplexScalingConfig s{theta};
        const CVector v = build_potential(m, g, s);
        const auto& w = second_derivative_weights(g.fd_order);
        const double h = g.spacing();
        const cplx kin = -0.5 * std::exp(cplx(0, -2 * theta)) / (h * h);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(g.points, g.points);
        for (int i = 0; i < g.points; ++i) {
            H(i, i) = v[i] + kin * w[0];
            for (std::size_t k = 1; k < w.size(); ++k) {
                if (i + int(k) < g.points) H(i, i + k) = H(i + k, i) = kin * w[k];
            }
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
        std::vector<cplx> ev(es.eigenvalues().begin(), es.eigenvalues().end());
        std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        const auto st = solve_field_free(m, g, s, 2);
        CHECK(std::abs(st[0].energy - ev[0]) < 1e-10);
        CHECK(std::abs(st[1].energy - ev[1]) < 1e-10);
    }
}

TEST_CASE("field-free states are c-normalised with alternating parity") {
    AtomModel m;
    m.softcore_width = calibrated_softcore_width;
    const auto p = fixtures::small_problem();
    const auto st = solve_field_free(m, p.grid, p.scaling, 3);
    const Parity expected[] = {Parity::even, Parity::odd, Parity::even};
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(c_product(st[k].wavefunction, st[k].wavefunction, p.grid) - 1.0) < 1e-10);
        CHECK(st[k].parity == expected[k]);
        CHECK(st[k].parity_residual < 1e-8);
    }
}

TEST_CASE("c-product is bilinear without conjugation") {
    fixtures::Gen gen(7);
    SpatialGrid g;
    g.extent = 5.0;
    g.points = 11;
    for (int trial = 0; trial < 100; ++trial) {
        CVector f(g.points), h(g.points);
        for (int i = 0; i < g.points; ++i) {
            f[i] = gen.complex(-1, 1);
            h[i] = gen.complex(-1, 1);
        }
        const cplx a = gen.complex(-2, 2);
        CHECK(std::abs(c_product(f, h, g) - c_product(h, f, g)) < 1e-14);
        CHECK(std::abs(c_product(a * f, h, g) - a * c_product(f, h, g)) < 1e-13);
        cplx direct = 0.0;
        for (int i = 0; i < g.points; ++i) direct += f[i] * h[i];
        CHECK(std::abs(c_product(f, h, g) - direct * g.spacing()) < 1e-13);
    }
}

TEST_CASE("parity classification of symmetric and antisymmetric vectors") {
    CVector f(5), h(5);
    f << 1, 2, 3, 2, 1;
    h << -1, -2, 0, 2, 1;
    double r = 1.0;
    CHECK(classify_parity(f, &r) == Parity::even);
    CHECK(r < 1e-15);
    CHECK(classify_parity(h, &r) == Parity::odd);
    CHECK(r < 1e-15);
}
