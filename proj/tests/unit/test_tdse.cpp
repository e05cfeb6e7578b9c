#include "fixtures.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/tdse.hpp"

#include <doctest.h>

#include <cmath>

using namespace cavhhg;

namespace {

struct Small {
    AtomModel atom;
    SpatialGrid grid;
    DriveField drive;
    PropagationConfig cfg;
    Small() {
        atom.softcore_width = calibrated_softcore_width;
        grid.extent = 100.0;
        grid.points = 256;
        cfg.num_periods = 4;
        cfg.ramp_periods = 1;
        cfg.absorber_width = 30.0;
        cfg.normalization_radius = 20.0;
        cfg.max_order = 15;
    }
};

} // namespace

TEST_CASE("zero field leaves the spectrum at the noise floor") {
    Small s;
    s.drive.amplitude = 0.0;
    const auto r = propagate_and_spectrum(s.atom, s.grid, s.drive, s.cfg);
    double peak = 0.0;
    for (const auto& e : r.spectrum.entries) peak = std::max(peak, e.intensity());
    CHECK(peak < 1e-20);
    CHECK(r.final_norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("forward then backward propagation recovers the initial state") {
    Small s;
    double e0 = 0.0;
    const CVector psi0 = ground_state_imaginary_time(s.atom, s.grid, &e0);
    CVector psi = psi0;
    for (int k = 0; k < 40; ++k) psi[k + 100] += cplx(0.0, 0.01 * k); // not an eigenstate
    const CVector start = psi;
    SplitOperator fwd(s.atom, s.grid, 0.05, 30.0, 0.0), bwd(s.atom, s.grid, -0.05, 30.0, 0.0);
    for (int k = 0; k < 400; ++k) fwd.step(psi, 0.0);
    CHECK((psi - start).norm() > 1e-3);
    for (int k = 0; k < 400; ++k) bwd.step(psi, 0.0);
    CHECK((psi - start).norm() < 1e-8 * start.norm());
}

TEST_CASE("imaginary-time ground state agrees with the finite-difference solver") {
    Small s;
    double e0 = 0.0;
    ground_state_imaginary_time(s.atom, s.grid, &e0);
    const auto ff = solve_field_free(s.atom, s.grid, {0.0}, 1);
    CHECK(e0 == doctest::Approx(ff[0].energy.real()).epsilon(2e-4));
}

TEST_CASE("norm is non-increasing with the absorber on") {
    Small s;
    const auto r = propagate_and_spectrum(s.atom, s.grid, s.drive, s.cfg);
    for (std::size_t k = 1; k < r.norm.size(); ++k) CHECK(r.norm[k] <= r.norm[k - 1] + 1e-14);
    CHECK(r.final_norm < 1.0);
}

TEST_CASE("driven spectrum has odd peaks and suppressed even valleys") {
    Small s;
    s.cfg.num_periods = 12;
    s.cfg.ramp_periods = 2;
    const auto r = propagate_and_spectrum(s.atom, s.grid, s.drive, s.cfg);
    // the turn-on leaves a small admixture of opposite-symmetry states, which
    // radiates at even orders about four decades below the odd peaks
    for (int M = 1; M <= 9; M += 2) CHECK(r.intensity_at(M) > 1e4 * r.intensity_at(M + 1));
}

TEST_CASE("propagation config validation") {
    Small s;
    PropagationConfig c = s.cfg;
    c.time_step = 0.5;
    CHECK_THROWS_AS(c.validate(s.grid, s.drive), ConfigError);
    c = s.cfg;
    c.absorber_width = 60.0;
    CHECK_THROWS_AS(c.validate(s.grid, s.drive), ConfigError);
}

TEST_CASE("excessive ionisation is reported") {
    Small s;
    s.drive.amplitude = 0.15;
    s.cfg.max_norm_loss = 0.05;
    CHECK_THROWS_AS(propagate_and_spectrum(s.atom, s.grid, s.drive, s.cfg), OverIonizationError);
}
