#pragma once

#include "cavhhg/atom_grid.hpp"
#include "cavhhg/banded_lu.hpp"
#include "cavhhg/kernels.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cavhhg {

// Monochromatic cw drive eps0 cos(omega0 t).
struct DriveField {
    double amplitude = 0.04;
    double frequency = 0.057;

    void validate() const;
    double period() const;
};

// Fourier channels n = channel_min..channel_max.
struct FloquetBasisSpec {
    int channel_min = -40;
    int channel_max = 40;

    void validate() const;
    int channels() const { return channel_max - channel_min + 1; }
};

struct FloquetProblem {
    AtomModel atom;
    SpatialGrid grid;
    ComplexScalingConfig scaling;
    DriveField drive;
    FloquetBasisSpec basis;

    void validate() const;
    std::size_t dimension() const {
        return static_cast<std::size_t>(grid.points) * static_cast<std::size_t>(basis.channels());
    }
};

enum class DynamicalSymmetry { plus, minus };
enum class StateLabel { FLg, FLe, other };

std::string to_string(DynamicalSymmetry s);
std::string to_string(StateLabel s);

// Resonance Floquet state. Channel functions are stored row-major: row
// (n - channel_min) holds phi_n on the grid.
struct FloquetEigenstate {
    FloquetProblem problem;
    cplx quasienergy;
    std::vector<cplx> channel_data;
    DynamicalSymmetry symmetry = DynamicalSymmetry::plus;
    double symmetry_residual = 0.0;
    cplx target_overlap;
    StateLabel label = StateLabel::other;
    double residual = 0.0;

    int channel_min() const { return problem.basis.channel_min; }
    int channel_max() const { return problem.basis.channel_max; }
    int channels() const { return problem.basis.channels(); }
    int points() const { return problem.grid.points; }

    double energy() const { return quasienergy.real(); }
    double width() const { return -2.0 * quasienergy.imag(); }

    CVector channel(int n) const;
    kernels::ChannelView view() const;
    // Sum over channels of c_product(phi_n, phi_n).
    cplx extended_norm() const;
};

// Block-tridiagonal complex-symmetric Floquet operator in grid-major layout:
// element (x_i, n) is at i * channels + (n - channel_min).
class FloquetOperator {
public:
    static constexpr std::size_t default_memory_budget = std::size_t{3} << 30;

    explicit FloquetOperator(const FloquetProblem& problem,
                             std::size_t memory_budget = default_memory_budget);

    const FloquetProblem& problem() const { return problem_; }
    std::size_t dimension() const { return problem_.dimension(); }
    int bandwidth() const { return problem_.grid.stencil_reach() * problem_.basis.channels(); }
    std::size_t factor_bytes() const;

    void apply(const cplx* in, cplx* out) const;
    void apply_serial(const cplx* in, cplx* out) const;

    // Operator minus shift * I in LAPACK band storage.
    BandedMatrix to_banded(cplx shift) const;
    Eigen::MatrixXcd to_dense() const;

    std::size_t index(int i, int n) const {
        return static_cast<std::size_t>(i) * problem_.basis.channels() +
               static_cast<std::size_t>(n - problem_.basis.channel_min);
    }

    kernels::FloquetStencil stencil() const;

private:
    FloquetProblem problem_;
    std::vector<cplx> potential_;
    std::vector<cplx> kinetic_;
    std::vector<cplx> coupling_;
};

struct ResonanceOptions {
    double overlap_floor = 0.5;
    int krylov_dim = 40;
    int krylov_wanted = 12;
    double krylov_tol = 1e-10;
    int krylov_restarts = 60;
    double residual_tol = 1e-8;
    cplx shift_offset{0.0, -1e-4};
    int max_refinements = 4;
    int inverse_iterations = 12;
    std::size_t dense_threshold = 1000;
    std::size_t memory_budget = FloquetOperator::default_memory_budget;
    StateLabel label = StateLabel::other;
};

struct ResonanceCandidate {
    cplx quasienergy;
    double overlap = 0.0;
    bool converged = true;
};

// Resonance whose eigenvector has the largest |c-overlap| with `seed`
// embedded in channel 0. Throws StateIdentificationError below the floor.
FloquetEigenstate solve_resonance(const FloquetOperator& op, const FieldFreeState& seed,
                                  const ResonanceOptions& options = {},
                                  std::vector<ResonanceCandidate>* candidates = nullptr);

// Picks S minimising the aggregate residual of phi_n(x) = S (-1)^n phi_n(-x);
// stores S and the residual in the state.
DynamicalSymmetry classify_symmetry(FloquetEigenstate& state);

// Per-channel relative parity residual for the stored symmetry label.
std::vector<double> channel_parity_residuals(const FloquetEigenstate& state);

// Targeted resonance (seeded from field-free state `seed_index`) for each theta.
std::vector<std::pair<double, cplx>> theta_trajectory(const FloquetProblem& problem,
                                                      int seed_index,
                                                      const std::vector<double>& thetas,
                                                      const ResonanceOptions& options = {});

// Convenience: field-free seed plus resonance solve for FLg (index 0) or FLe (index 1).
FloquetEigenstate solve_labelled(const FloquetProblem& problem, StateLabel label,
                                 ResonanceOptions options = {});

} // namespace cavhhg
