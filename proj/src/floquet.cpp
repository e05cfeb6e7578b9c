#include "cavhhg/floquet.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/krylov.hpp"


#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cavhhg {

void DriveField::validate() const {
    std::vector<std::string> errs;
    if (!(amplitude >= 0.0)) errs.push_back("drive.amplitude must be >= 0");
    if (!(frequency > 0.0)) errs.push_back("drive.frequency must be > 0");
    if (!errs.empty()) throw ConfigError(errs);
}

double DriveField::period() const { return 2.0 * std::numbers::pi / frequency; }

void FloquetBasisSpec::validate() const {
    if (!(channel_min <= 0 && 0 <= channel_max))
        throw ConfigError("basis must satisfy channel_min <= 0 <= channel_max");
}

void FloquetProblem::validate() const {
    std::vector<std::string> errs;
    auto collect = [&](auto&& f) {
        try {
            f();
        } catch (const ConfigError& e) {
            errs.insert(errs.end(), e.violations().begin(), e.violations().end());
        }
    };
    collect([&] { atom.validate(); });
    collect([&] { grid.validate(); });
    collect([&] { scaling.validate(); });
    collect([&] { drive.validate(); });
    collect([&] { basis.validate(); });
    if (!errs.empty()) throw ConfigError(errs);
}

std::string to_string(DynamicalSymmetry s) { return s == DynamicalSymmetry::plus ? "plus" : "minus"; }

std::string to_string(StateLabel s) {
    switch (s) {
    case StateLabel::FLg: return "FLg";
    case StateLabel::FLe: return "FLe";
    default: return "other";
    }
}

CVector FloquetEigenstate::channel(int n) const {
    if (n < channel_min() || n > channel_max())
        throw std::out_of_range("channel index outside the Floquet basis");
    const int np = points();
    return Eigen::Map<const CVector>(channel_data.data() +
                                         static_cast<std::size_t>(n - channel_min()) * np,
                                     np);
}

kernels::ChannelView FloquetEigenstate::view() const {
    return {channels(), points(), channel_data};
}

cplx FloquetEigenstate::extended_norm() const {
    cplx s{};
    for (const cplx& v : channel_data) s += v * v;
    return s * problem.grid.spacing();
}

FloquetOperator::FloquetOperator(const FloquetProblem& problem, std::size_t memory_budget)
    : problem_(problem) {
    problem_.validate();
    if (factor_bytes() > memory_budget) {
        std::ostringstream msg;
        msg << "extended dimension " << dimension() << " with bandwidth " << bandwidth()
            << " needs " << factor_bytes() / (1 << 20) << " MiB for the banded factorisation, over the "
            << memory_budget / (1 << 20) << " MiB budget";
        throw NumericalError("floquet-engine", msg.str());
    }
    const auto& grid = problem_.grid;
    const CVector v = build_potential(problem_.atom, grid, problem_.scaling);
    potential_.assign(v.data(), v.data() + v.size());

    const double h = grid.spacing();
    const cplx pre = -0.5 * std::polar(1.0, -2.0 * problem_.scaling.theta) / (h * h);
    for (double w : second_derivative_weights(grid.fd_order)) kinetic_.push_back(pre * w);

    // Dipole d = -x on the scaled coordinate, half the field amplitude per
    // neighbouring channel.
    const cplx f = problem_.scaling.factor();
    coupling_.resize(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i)
        coupling_[i] = -grid.x(i) * f * (0.5 * problem_.drive.amplitude);
}

std::size_t FloquetOperator::factor_bytes() const {
    const auto kl = static_cast<std::size_t>(bandwidth());
    return BandedMatrix::storage_bytes(dimension(), kl, kl);
}

kernels::FloquetStencil FloquetOperator::stencil() const {
    return {problem_.grid.points, problem_.basis.channels(), problem_.basis.channel_min,
            problem_.drive.frequency, potential_, kinetic_, coupling_};
}

void FloquetOperator::apply(const cplx* in, cplx* out) const {
    kernels::parallel::floquet_apply(stencil(), {in, dimension()}, {out, dimension()});
}

void FloquetOperator::apply_serial(const cplx* in, cplx* out) const {
    kernels::serial::floquet_apply(stencil(), {in, dimension()}, {out, dimension()});
}

BandedMatrix FloquetOperator::to_banded(cplx shift) const {
    const int np = problem_.grid.points, nc = problem_.basis.channels();
    const int reach = static_cast<int>(kinetic_.size()) - 1;
    const int bw = bandwidth();
    BandedMatrix a(static_cast<int>(dimension()), bw, bw);
    for (int i = 0; i < np; ++i) {
        for (int c = 0; c < nc; ++c) {
            const int row = i * nc + c;
            const double w = (problem_.basis.channel_min + c) * problem_.drive.frequency;
            a.add(row, row, kinetic_[0] + potential_[i] + w - shift);
            for (int k = 1; k <= reach && i + k < np; ++k) {
                a.add(row, row + k * nc, kinetic_[k]);
                a.add(row + k * nc, row, kinetic_[k]);
            }
            if (c + 1 < nc) {
                a.add(row, row + 1, coupling_[i]);
                a.add(row + 1, row, coupling_[i]);
            }
        }
    }
    return a;
}

Eigen::MatrixXcd FloquetOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m(n, n);
    CVector e = CVector::Zero(n), col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply_serial(e.data(), col.data());
        m.col(j) = col;
        e[j] = 0.0;
    }
    return m;
}

namespace {

struct Candidate {
    cplx value;
    CVector vector;
    double overlap;
    bool converged = true;
};

// Extended seed: field-free state in channel 0, zero elsewhere.
CVector embed_seed(const FloquetOperator& op, const CVector& seed) {
    const auto& p = op.problem();
    CVector v = CVector::Zero(static_cast<Eigen::Index>(op.dimension()));
    for (int i = 0; i < p.grid.points; ++i) v[static_cast<Eigen::Index>(op.index(i, 0))] = seed[i];
    return v;
}

// |c-overlap| of the c-normalised version of y with the extended seed.
double c_overlap(const CVector& seed_ext, const CVector& y, double h) {
    const cplx norm2 = (y.transpose() * y).value() * h;
    if (std::abs(norm2) < 1e-300) return 0.0;
    const cplx ov = (seed_ext.transpose() * y).value() * h;
    return std::abs(ov / std::sqrt(norm2));
}

double residual_of(const FloquetOperator& op, const CVector& v, cplx lambda) {
    CVector av(v.size());
    op.apply(v.data(), av.data());
    return (av - lambda * v).norm() / v.norm();
}

cplx rayleigh(const FloquetOperator& op, const CVector& v) {
    CVector av(v.size());
    op.apply(v.data(), av.data());
    return (v.transpose() * av).value() / (v.transpose() * v).value();
}

BandedLU factor_at(const FloquetOperator& op, cplx shift) {
    // An exactly singular pivot means the shift hit an eigenvalue to machine
    // precision; nudge it off.
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return BandedLU(op.to_banded(shift));
        } catch (const NumericalError&) {
            shift += cplx(0.0, -1e-12 * std::max(1.0, std::abs(shift)) * std::pow(10.0, attempt));
        }
    }
    throw NumericalError("floquet-engine", "shifted operator is singular at every trial shift");
}

std::vector<Candidate> dense_candidates(const FloquetOperator& op, const CVector& seed_ext) {
    Eigen::MatrixXcd a = op.to_dense();
    const lapack_int n = static_cast<lapack_int>(a.rows());
    CVector w(n);
    Eigen::MatrixXcd vr(n, n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), nullptr,
                                          1, vr.data(), n);
    if (info != 0) throw NumericalError("floquet-engine", "dense eigensolver did not converge");
    const double h = op.problem().grid.spacing();
    std::vector<Candidate> out;
    for (lapack_int k = 0; k < n; ++k) {
        CVector y = vr.col(k);
        const double ov = c_overlap(seed_ext, y, h);
        out.push_back({w[k], std::move(y), ov});
    }
    return out;
}

std::vector<Candidate> krylov_candidates(const FloquetOperator& op, const CVector& seed_ext,
                                         cplx sigma, const ResonanceOptions& opt) {
    const BandedLU lu = factor_at(op, sigma);
    const LinearMap inv = [&](const CVector& x, CVector& y) {
        y = x;
        lu.solve_in_place({y.data(), static_cast<std::size_t>(y.size())});
    };
    KrylovSchurOptions ko;
    ko.wanted = opt.krylov_wanted;
    ko.subspace = opt.krylov_dim;
    ko.tol = opt.krylov_tol;
    ko.max_restarts = opt.krylov_restarts;
    const KrylovSchurResult ks = krylov_schur(inv, seed_ext, ko);
    const double h = op.problem().grid.spacing();
    std::vector<Candidate> out;
    for (const RitzPair& rp : ks.pairs) {
        if (std::abs(rp.value) < 1e-300) continue;
        const double ov = c_overlap(seed_ext, rp.vector, h);
        // Loose acceptance; refinement tightens the residual afterwards.
        const bool ok = rp.residual <= 1e-6 * std::abs(rp.value);
        out.push_back({sigma + 1.0 / rp.value, rp.vector, ov, ok});
    }
    return out;
}

// Inverse iteration about the current estimate until the eigen-residual
// meets the tolerance.
void refine(const FloquetOperator& op, CVector& v, cplx& lambda, double& residual,
            const ResonanceOptions& opt) {
    lambda = rayleigh(op, v);
    residual = residual_of(op, v, lambda);
    for (int r = 0; r < opt.max_refinements && residual > opt.residual_tol; ++r) {
        const BandedLU lu = factor_at(op, lambda);
        for (int it = 0; it < opt.inverse_iterations && residual > opt.residual_tol; ++it) {
            lu.solve_in_place({v.data(), static_cast<std::size_t>(v.size())});
            v /= v.norm();
            lambda = rayleigh(op, v);
            residual = residual_of(op, v, lambda);
        }
    }
    if (residual > opt.residual_tol) {
        std::ostringstream msg;
        msg << "eigenpair residual " << residual << " above tolerance " << opt.residual_tol
            << " near quasienergy " << lambda;
        throw NumericalError("floquet-engine", msg.str());
    }
}

} // namespace

FloquetEigenstate solve_resonance(const FloquetOperator& op, const FieldFreeState& seed,
                                  const ResonanceOptions& opt,
                                  std::vector<ResonanceCandidate>* candidates) {
    const FloquetProblem& p = op.problem();
    if (seed.wavefunction.size() != p.grid.points)
        throw std::invalid_argument("solve_resonance: seed is not sampled on the problem grid");
    const double h = p.grid.spacing();
    const CVector seed_ext = embed_seed(op, seed.wavefunction);

    auto cands = op.dimension() < opt.dense_threshold
                     ? dense_candidates(op, seed_ext)
                     : krylov_candidates(op, seed_ext, seed.energy + opt.shift_offset, opt);
    // Unconverged Ritz vectors can be mixtures with spuriously large
    // overlaps, so converged pairs rank first.
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.converged != b.converged) return a.converged;
        return a.overlap > b.overlap;
    });
    if (candidates) {
        candidates->clear();
        for (const auto& c : cands) candidates->push_back({c.value, c.overlap, c.converged});
    }
    if (cands.empty() || cands.front().overlap < opt.overlap_floor) {
        std::ostringstream msg;
        msg << "no eigenpair has |overlap| above " << opt.overlap_floor << " with the seed at "
            << seed.energy << "; best candidates:";
        for (std::size_t k = 0; k < std::min<std::size_t>(5, cands.size()); ++k)
            msg << " (" << cands[k].value << ", |ov| = " << cands[k].overlap << ")";
        throw StateIdentificationError(msg.str());
    }

    CVector v = std::move(cands.front().vector);
    cplx lambda = cands.front().value;
    double residual = 0.0;
    refine(op, v, lambda, residual, opt);

    const cplx n2 = (v.transpose() * v).value() * h;
    v /= std::sqrt(n2);
    cplx overlap = (seed_ext.transpose() * v).value() * h;
    if (overlap.real() < 0.0) {
        v = -v;
        overlap = -overlap;
    }

    FloquetEigenstate s;
    s.problem = p;
    s.residual = residual;
    s.target_overlap = overlap;
    s.label = opt.label;

    const int np = p.grid.points, nc = p.basis.channels();
    s.channel_data.assign(static_cast<std::size_t>(np) * nc, cplx{});

    // Brillouin-zone representative closest to the seed energy: relabel
    // channels n -> n - k, which shifts the quasienergy by -k omega.
    const double omega = p.drive.frequency;
    const int k = static_cast<int>(std::lround((lambda.real() - seed.energy.real()) / omega));
    for (int c = 0; c < nc; ++c) {
        const int src = c + k;
        if (src < 0 || src >= nc) continue;
        for (int i = 0; i < np; ++i)
            s.channel_data[static_cast<std::size_t>(c) * np + i] =
                v[static_cast<Eigen::Index>(static_cast<std::size_t>(i) * nc + src)];
    }
    s.quasienergy = lambda - static_cast<double>(k) * omega;
    if (k != 0) {
        const cplx n2s = s.extended_norm();
        for (auto& x : s.channel_data) x /= std::sqrt(n2s);
        s.target_overlap = c_product(seed.wavefunction, s.channel(0), p.grid);
    }
    classify_symmetry(s);
    return s;
}

namespace {

// Returns (residual with sign +1, residual with sign -1) of
// phi_n(x) - s (-1)^n phi_n(-x), aggregated over channels.
std::pair<double, double> symmetry_residuals(const FloquetEigenstate& s) {
    const int np = s.points();
    double plus = 0.0, minus = 0.0, norm = 0.0;
    for (int n = s.channel_min(); n <= s.channel_max(); ++n) {
        const cplx* row = s.channel_data.data() + static_cast<std::size_t>(n - s.channel_min()) * np;
        const double alt = (n % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < np; ++i) {
            const cplx a = row[i], b = alt * row[np - 1 - i];
            plus += std::norm(a - b);
            minus += std::norm(a + b);
            norm += std::norm(a);
        }
    }
    norm = std::max(norm, 1e-300);
    return {std::sqrt(plus / norm), std::sqrt(minus / norm)};
}

} // namespace

DynamicalSymmetry classify_symmetry(FloquetEigenstate& state) {
    const auto [rp, rm] = symmetry_residuals(state);
    if (rp > 0.1 && rm > 0.1) {
        std::ostringstream msg;
        msg << "parity residuals " << rp << " (plus) and " << rm << " (minus) both exceed 0.1";
        throw SymmetryBrokenError(msg.str());
    }
    state.symmetry = rp <= rm ? DynamicalSymmetry::plus : DynamicalSymmetry::minus;
    state.symmetry_residual = std::min(rp, rm);
    return state.symmetry;
}

std::vector<double> channel_parity_residuals(const FloquetEigenstate& s) {
    const int np = s.points();
    const double sign = s.symmetry == DynamicalSymmetry::plus ? 1.0 : -1.0;
    std::vector<double> out;
    for (int n = s.channel_min(); n <= s.channel_max(); ++n) {
        const cplx* row = s.channel_data.data() + static_cast<std::size_t>(n - s.channel_min()) * np;
        const double alt = sign * ((n % 2 == 0) ? 1.0 : -1.0);
        double r = 0.0, norm = 0.0;
        for (int i = 0; i < np; ++i) {
            r += std::norm(row[i] - alt * row[np - 1 - i]);
            norm += std::norm(row[i]);
        }
        out.push_back(norm > 0.0 ? std::sqrt(r / norm) : 0.0);
    }
    return out;
}

FloquetEigenstate solve_labelled(const FloquetProblem& problem, StateLabel label,
                                 ResonanceOptions options) {
    const int index = label == StateLabel::FLe ? 1 : 0;
    options.label = label;
    const auto seeds = solve_field_free(problem.atom, problem.grid, problem.scaling, index + 1);
    const FloquetOperator op(problem, options.memory_budget);
    return solve_resonance(op, seeds[index], options);
}

std::vector<std::pair<double, cplx>> theta_trajectory(const FloquetProblem& problem,
                                                      int seed_index,
                                                      const std::vector<double>& thetas,
                                                      const ResonanceOptions& options) {
    if (thetas.empty()) throw std::invalid_argument("theta_trajectory: empty angle list");
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        if (!(thetas[k] > 0.0 && thetas[k] < std::numbers::pi / 4))
            throw ConfigError("theta_trajectory: every angle must lie in (0, pi/4)");
        if (k > 0 && !(thetas[k] > thetas[k - 1]))
            throw ConfigError("theta_trajectory: angles must be strictly increasing");
    }
    std::vector<std::pair<double, cplx>> out;
    for (double theta : thetas) {
        FloquetProblem p = problem;
        p.scaling.theta = theta;
        const auto seeds = solve_field_free(p.atom, p.grid, p.scaling, seed_index + 1);
        const FloquetOperator op(p, options.memory_budget);
        out.emplace_back(theta, solve_resonance(op, seeds[seed_index], options).quasienergy);
    }
    return out;
}

} // namespace cavhhg
