#pragma once

#include "cavhhg/atom_grid.hpp"
#include "cavhhg/floquet.hpp"
#include "cavhhg/hhg_spectrum.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace cavhhg {

struct PropagationConfig {
    double time_step = 0.05;
    int num_periods = 24;
    int ramp_periods = 3;          // sin^2 turn-on before the analysis window
    double absorber_width = 50.0;  // quadratic complex absorbing potential at both edges
    double absorber_strength = 0.05;
    double max_norm_loss = 0.9;
    // The acceleration is divided by the norm inside |x| < radius, so that
    // population already absorbed at the edges does not dilute the signal.
    double normalization_radius = 30.0;
    double max_order = 45.0;
    int orders_per_unit = 20; // fine order grid step 1 / orders_per_unit

    void validate(const SpatialGrid& grid, const DriveField& drive) const;
};

// Strang-split FFT propagator exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with an
// optional absorber. Methodologically independent of the finite-difference
// Floquet operator.
class SplitOperator {
public:
    SplitOperator(const AtomModel& atom, const SpatialGrid& grid, double dt,
                  double absorber_width, double absorber_strength);
    ~SplitOperator();
    SplitOperator(const SplitOperator&) = delete;
    SplitOperator& operator=(const SplitOperator&) = delete;

    // One step with the length-gauge coupling -x * field.
    void step(CVector& psi, double field) const;
    double dt() const { return dt_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double dt_;
};

// Ground state by imaginary-time split-step propagation, normalised to 1 and
// symmetrised to even parity.
CVector ground_state_imaginary_time(const AtomModel& atom, const SpatialGrid& grid,
                                    double* energy = nullptr, double tol = 1e-13);

struct TdseResult {
    HarmonicSpectrum spectrum; // fine order grid, source "tdse"
    std::vector<double> times;
    std::vector<double> acceleration; // normalised by the inner norm
    std::vector<double> norm;         // box norm after each step
    double ground_energy = 0.0;
    double final_norm = 1.0;

    // |c(M)|^2 at an order on the sampling grid.
    double intensity_at(double order) const;
};

TdseResult propagate_and_spectrum(const AtomModel& atom, const SpatialGrid& grid,
                                  const DriveField& drive, const PropagationConfig& config);

} // namespace cavhhg
