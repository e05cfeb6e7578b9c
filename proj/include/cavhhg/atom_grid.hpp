#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <vector>

namespace cavhhg {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

// One-dimensional single-active-electron atom with a soft-core potential
//   V(x) = -softcore_depth / sqrt(x^2 + softcore_width).
struct AtomModel {
    double softcore_depth = 1.0;
    double softcore_width = 2.0;
    std::optional<double> target_ground_energy;

    void validate() const;

    // Analytic continuation of V to a complex coordinate.
    cplx potential(cplx z) const;
    // dV/dz at a complex coordinate.
    cplx potential_derivative(cplx z) const;
};

// Uniform grid x_i = -extent + i * spacing, i = 0..points-1, with Dirichlet
// zeros beyond both ends. fd_order selects the central finite-difference
// order of the kinetic operator (2, 4, 6 or 8).
struct SpatialGrid {
    double extent = 200.0;
    int points = 1024;
    int fd_order = 8;

    void validate() const;

    double spacing() const { return 2.0 * extent / (points - 1); }
    double x(int i) const { return -extent + i * spacing(); }
    int mirror(int i) const { return points - 1 - i; }
    // Stencil half-width: number of off-diagonal neighbours on each side.
    int stencil_reach() const { return fd_order / 2; }
};

// Uniform complex scaling x -> x e^{i theta}. theta = 0 is the unscaled problem.
struct ComplexScalingConfig {
    double theta = 0.15;

    void validate() const;
    cplx factor() const { return std::polar(1.0, theta); }
};

enum class Parity { even, odd };

struct FieldFreeState {
    cplx energy;
    CVector wavefunction;
    Parity parity = Parity::even;
    double parity_residual = 0.0;
};

// Central-difference weights for d^2/dx^2 scaled by h^2: element k is the
// weight of f_{i+k} (and f_{i-k}), element 0 the centre weight.
const std::vector<double>& second_derivative_weights(int fd_order);

// V(x_i e^{i theta}) on the grid.
CVector build_potential(const AtomModel& model, const SpatialGrid& grid,
                        const ComplexScalingConfig& scaling);

// Symmetric bilinear form h * sum_i f_i g_i (trapezoid rule with the
// Dirichlet end points, no complex conjugation).
cplx c_product(const CVector& f, const CVector& g, const SpatialGrid& grid);

// Residual-minimising parity label; residual = ||f - p Rf|| / ||f||.
Parity classify_parity(const CVector& f, double* residual = nullptr);

// Scales f so that c_product(f, f) = 1 and the largest-magnitude entry has a
// non-negative real part.
void c_normalize(CVector& f, const SpatialGrid& grid);

// Lowest `count` eigenpairs of -e^{-2i theta}/2 d^2/dx^2 + V(x e^{i theta}),
// ordered by real part (ties by |Im|).
std::vector<FieldFreeState> solve_field_free(const AtomModel& model, const SpatialGrid& grid,
                                             const ComplexScalingConfig& scaling, int count);

// Bisection on softcore_width (depth held fixed) until the unscaled ground
// energy equals `target` to within `tolerance`.
double calibrate_softcore_width(const AtomModel& model, const SpatialGrid& grid, double target,
                                double lo = 0.5, double hi = 20.0, double tolerance = 1e-12);

} // namespace cavhhg
