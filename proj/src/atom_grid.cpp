#include "cavhhg/atom_grid.hpp"

#include "cavhhg/banded_lu.hpp"
#include "cavhhg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cavhhg {

void AtomModel::validate() const {
    std::vector<std::string> errs;
    if (!(softcore_depth > 0.0)) errs.push_back("atom.softcore_depth must be > 0");
    if (!(softcore_width > 0.0)) errs.push_back("atom.softcore_width must be > 0");
    if (target_ground_energy && !(*target_ground_energy < 0.0))
        errs.push_back("atom.target_ground_energy must be negative");
    if (!errs.empty()) throw ConfigError(errs);
}

cplx AtomModel::potential(cplx z) const {
    return -softcore_depth / std::sqrt(z * z + softcore_width);
}

cplx AtomModel::potential_derivative(cplx z) const {
    const cplx s = z * z + softcore_width;
    return softcore_depth * z / (s * std::sqrt(s));
}

void SpatialGrid::validate() const {
    std::vector<std::string> errs;
    if (!(extent > 0.0)) errs.push_back("grid.extent must be > 0");
    if (points < 3) errs.push_back("grid.points must be >= 3");
    if (fd_order != 2 && fd_order != 4 && fd_order != 6 && fd_order != 8)
        errs.push_back("grid.fd_order must be one of 2, 4, 6, 8");
    else if (points <= fd_order) errs.push_back("grid.points must exceed grid.fd_order");
    if (!errs.empty()) throw ConfigError(errs);
}

void ComplexScalingConfig::validate() const {
    if (!(theta >= 0.0 && theta < std::numbers::pi / 4))
        throw ConfigError("scaling.theta must lie in [0, pi/4)");
}

const std::vector<double>& second_derivative_weights(int fd_order) {
    static const std::vector<double> o2{-2.0, 1.0};
    static const std::vector<double> o4{-5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
    static const std::vector<double> o6{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
    static const std::vector<double> o8{-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0,
                                        -1.0 / 560.0};
    switch (fd_order) {
    case 2: return o2;
    case 4: return o4;
    case 6: return o6;
    case 8: return o8;
    default: throw std::invalid_argument("unsupported finite-difference order");
    }
}

CVector build_potential(const AtomModel& model, const SpatialGrid& grid,
                        const ComplexScalingConfig& scaling) {
    CVector v(grid.points);
    if (scaling.theta == 0.0) {
        for (int i = 0; i < grid.points; ++i) v[i] = model.potential(cplx(grid.x(i), 0.0)).real();
        return v;
    }
    const cplx f = scaling.factor();
    for (int i = 0; i < grid.points; ++i) v[i] = model.potential(grid.x(i) * f);
    return v;
}

cplx c_product(const CVector& f, const CVector& g, const SpatialGrid& grid) {
    if (f.size() != g.size() || f.size() != grid.points)
        throw std::invalid_argument("c_product: vectors must be sampled on the same grid");
    cplx s{};
    for (Eigen::Index i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * grid.spacing();
}

Parity classify_parity(const CVector& f, double* residual) {
    const Eigen::Index n = f.size();
    double even = 0.0, odd = 0.0, norm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const cplx a = f[i], b = f[n - 1 - i];
        even += std::norm(a - b);
        odd += std::norm(a + b);
        norm += std::norm(a);
    }
    norm = std::max(norm, 1e-300);
    const double re = std::sqrt(even / norm), ro = std::sqrt(odd / norm);
    if (residual) *residual = std::min(re, ro);
    return re <= ro ? Parity::even : Parity::odd;
}

void c_normalize(CVector& f, const SpatialGrid& grid) {
    const cplx n2 = c_product(f, f, grid);
    if (std::abs(n2) == 0.0) throw NumericalError("atom-grid", "cannot c-normalize a self-orthogonal vector");
    f /= std::sqrt(n2);
    Eigen::Index imax = 0;
    f.cwiseAbs().maxCoeff(&imax);
    if (f[imax].real() < 0.0) f = -f;
}

namespace {

bool energy_less(cplx a, cplx b) {
    const double scale = std::max(1.0, std::max(std::abs(a.real()), std::abs(b.real())));
    if (std::abs(a.real() - b.real()) > 1e-12 * scale) return a.real() < b.real();
    return std::abs(a.imag()) < std::abs(b.imag());
}

struct AtomOperator {
    CVector potential;
    std::vector<cplx> kinetic; // kinetic[k] multiplies f_{i±k}
    int n;

    AtomOperator(const AtomModel& model, const SpatialGrid& grid, const ComplexScalingConfig& s)
        : potential(build_potential(model, grid, s)), n(grid.points) {
        const auto& w = second_derivative_weights(grid.fd_order);
        const double h = grid.spacing();
        const cplx pre = -0.5 * std::polar(1.0, -2.0 * s.theta) / (h * h);
        for (double c : w) kinetic.push_back(pre * c);
    }

    CVector apply(const CVector& f) const {
        const int r = static_cast<int>(kinetic.size()) - 1;
        CVector out(n);
        for (int i = 0; i < n; ++i) {
            cplx acc = (kinetic[0] + potential[i]) * f[i];
            for (int k = 1; k <= r; ++k) {
                if (i - k >= 0) acc += kinetic[k] * f[i - k];
                if (i + k < n) acc += kinetic[k] * f[i + k];
            }
            out[i] = acc;
        }
        return out;
    }
};

// Real symmetric band eigensolve for the unscaled Hamiltonian.
std::vector<FieldFreeState> solve_unscaled(const AtomModel& model, const SpatialGrid& grid,
                                           int count) {
    const int n = grid.points;
    const int kd = grid.stencil_reach();
    const auto& w = second_derivative_weights(grid.fd_order);
    const double h = grid.spacing();
    const int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        ab[static_cast<std::size_t>(j) * ldab + kd] =
            -0.5 * w[0] / (h * h) + model.potential(cplx(grid.x(j), 0.0)).real();
        for (int k = 1; k <= kd && j - k >= 0; ++k)
            ab[static_cast<std::size_t>(j) * ldab + kd - k] = -0.5 * w[k] / (h * h);
    }
    std::vector<double> q(static_cast<std::size_t>(n) * n), evals(n),
        z(static_cast<std::size_t>(n) * count);
    std::vector<lapack_int> ifail(n);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsbevx(
        LAPACK_COL_MAJOR, 'V', 'I', 'U', n, kd, ab.data(), ldab, q.data(), n, 0.0, 0.0, 1, count,
        2.0 * LAPACKE_dlamch('S'), &found, evals.data(), z.data(), n, ifail.data());
    if (info != 0 || found != count)
        throw NumericalError("atom-grid", "dsbevx failed to converge (info = " +
                                              std::to_string(info) + ")");
    std::vector<FieldFreeState> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        FieldFreeState s;
        s.energy = evals[k];
        s.wavefunction = Eigen::Map<const Eigen::VectorXd>(z.data() + static_cast<std::size_t>(k) * n, n)
                             .cast<cplx>();
        c_normalize(s.wavefunction, grid);
        s.parity = classify_parity(s.wavefunction, &s.parity_residual);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<FieldFreeState> solve_dense(const AtomOperator& op, const SpatialGrid& grid, int count) {
    const int n = op.n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    const int r = static_cast<int>(op.kinetic.size()) - 1;
    for (int i = 0; i < n; ++i) {
        m(i, i) = op.kinetic[0] + op.potential[i];
        for (int k = 1; k <= r && i + k < n; ++k) m(i, i + k) = m(i + k, i) = op.kinetic[k];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, true);
    if (es.info() != Eigen::Success)
        throw NumericalError("atom-grid", "dense complex eigensolver did not converge");
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return energy_less(es.eigenvalues()[a], es.eigenvalues()[b]);
    });
    std::vector<FieldFreeState> out;
    for (int k = 0; k < count; ++k) {
        FieldFreeState s;
        s.energy = es.eigenvalues()[order[k]];
        s.wavefunction = es.eigenvectors().col(order[k]);
        c_normalize(s.wavefunction, grid);
        s.parity = classify_parity(s.wavefunction, &s.parity_residual);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

std::vector<FieldFreeState> solve_field_free(const AtomModel& model, const SpatialGrid& grid,
                                             const ComplexScalingConfig& scaling, int count) {
    model.validate();
    grid.validate();
    scaling.validate();
    if (count < 1 || count > grid.points)
        throw std::invalid_argument("solve_field_free: count must lie in [1, points]");

    auto states = solve_unscaled(model, grid, count);
    if (scaling.theta == 0.0) return states;

    const AtomOperator op(model, grid, scaling);
    const bool all_bound = std::all_of(states.begin(), states.end(),
                                       [](const FieldFreeState& s) { return s.energy.real() < 0.0; });
    if (!all_bound) return solve_dense(op, grid, count);

    // Bound states are theta-independent: refine each unscaled state by
    // inverse iteration on the scaled operator shifted to its energy.
    const int r = grid.stencil_reach();
    for (auto& s : states) {
        BandedMatrix a(grid.points, r, r);
        for (int i = 0; i < grid.points; ++i) {
            a.add(i, i, op.kinetic[0] + op.potential[i] - s.energy);
            for (int k = 1; k <= r && i + k < grid.points; ++k) {
                a.add(i, i + k, op.kinetic[k]);
                a.add(i + k, i, op.kinetic[k]);
            }
        }
        const BandedLU lu(std::move(a));
        CVector v = s.wavefunction;
        cplx lambda = s.energy;
        double residual = 1.0;
        for (int it = 0; it < 30 && residual > 1e-12; ++it) {
            lu.solve_in_place({v.data(), static_cast<std::size_t>(v.size())});
            v /= v.norm();
            const CVector hv = op.apply(v);
            lambda = v.transpose() * hv;
            lambda /= cplx(v.transpose() * v);
            residual = (hv - lambda * v).norm();
        }
        if (residual > 1e-9)
            throw NumericalError("atom-grid", "inverse iteration stalled at residual " +
                                                  std::to_string(residual));
        c_normalize(v, grid);
        s.energy = lambda;
        s.wavefunction = std::move(v);
        s.parity = classify_parity(s.wavefunction, &s.parity_residual);
    }
    std::stable_sort(states.begin(), states.end(),
                     [](const auto& a, const auto& b) { return energy_less(a.energy, b.energy); });
    return states;
}

double calibrate_softcore_width(const AtomModel& model, const SpatialGrid& grid, double target,
                                double lo, double hi, double tolerance) {
    const ComplexScalingConfig unscaled{0.0};
    auto ground = [&](double width) {
        AtomModel m = model;
        m.softcore_width = width;
        return solve_field_free(m, grid, unscaled, 1).front().energy.real();
    };
    // The ground energy rises monotonically with the softening width.
    double flo = ground(lo) - target, fhi = ground(hi) - target;
    if (flo * fhi > 0.0)
        throw NumericalError("atom-grid", "calibration bracket does not enclose the target energy");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ground(mid) - target;
        if (std::abs(fm) <= tolerance || hi - lo < 1e-15 * hi) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace cavhhg
