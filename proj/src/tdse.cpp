#include "cavhhg/tdse.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

namespace cavhhg {

namespace {

// Planner calls are not thread-safe in FFTW.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> wavenumbers(const SpatialGrid& grid) {
    const int n = grid.points;
    const double dk = 2.0 * std::numbers::pi / (n * grid.spacing());
    std::vector<double> k(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) k[j] = (j <= (n - 1) / 2 ? j : j - n) * dk;
    return k;
}

} // namespace

void PropagationConfig::validate(const SpatialGrid& grid, const DriveField& drive) const {
    std::vector<std::string> errs;
    if (!(time_step > 0.0)) errs.push_back("tdse.time_step must be > 0");
    else if (!(time_step * drive.frequency < 0.02))
        errs.push_back("tdse.time_step * omega0 must be < 0.02");
    else {
        const double kmax = std::numbers::pi / grid.spacing();
        if (!(0.5 * kmax * kmax * time_step < std::numbers::pi))
            errs.push_back("tdse.time_step too large for the grid: kinetic phase per step exceeds pi");
    }
    if (num_periods < 1) errs.push_back("tdse.num_periods must be >= 1");
    if (ramp_periods < 0) errs.push_back("tdse.ramp_periods must be >= 0");
    if (!(absorber_width > 0.0 && absorber_width < grid.extent / 2))
        errs.push_back("tdse.absorber_width must lie in (0, extent/2)");
    if (!(absorber_strength >= 0.0)) errs.push_back("tdse.absorber_strength must be >= 0");
    if (!(max_norm_loss > 0.0 && max_norm_loss < 1.0)) errs.push_back("tdse.max_norm_loss must lie in (0, 1)");
    if (!(normalization_radius > 0.0 && normalization_radius < grid.extent))
        errs.push_back("tdse.normalization_radius must lie in (0, extent)");
    if (!(max_order > 0.0)) errs.push_back("tdse.max_order must be > 0");
    if (orders_per_unit < 1) errs.push_back("tdse.orders_per_unit must be >= 1");
    if (!errs.empty()) throw ConfigError(errs);
}

struct SplitOperator::Impl {
    int n = 0;
    std::vector<double> x, v;
    std::vector<double> cap;
    std::vector<cplx> kinetic_phase;
    std::vector<cplx> buffer;
    fftw_plan forward = nullptr, backward = nullptr;
};

SplitOperator::SplitOperator(const AtomModel& atom, const SpatialGrid& grid, double dt,
                             double absorber_width, double absorber_strength)
    : impl_(std::make_unique<Impl>()), dt_(dt) {
    auto& d = *impl_;
    d.n = grid.points;
    const double edge = grid.extent - absorber_width;
    for (int i = 0; i < d.n; ++i) {
        const double x = grid.x(i);
        d.x.push_back(x);
        d.v.push_back(atom.potential(cplx(x, 0.0)).real());
        const double s = std::abs(x) > edge ? (std::abs(x) - edge) / absorber_width : 0.0;
        d.cap.push_back(absorber_strength * s * s);
    }
    for (double k : wavenumbers(grid)) d.kinetic_phase.push_back(std::polar(1.0 / d.n, -0.5 * k * k * dt));
    d.buffer.resize(static_cast<std::size_t>(d.n));
    auto* buf = reinterpret_cast<fftw_complex*>(d.buffer.data());
    std::lock_guard lock(planner_mutex());
    d.forward = fftw_plan_dft_1d(d.n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    d.backward = fftw_plan_dft_1d(d.n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SplitOperator::~SplitOperator() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->forward);
    fftw_destroy_plan(impl_->backward);
}

void SplitOperator::step(CVector& psi, double field) const {
    auto& d = *impl_;
    const double half = 0.5 * dt_;
    for (int i = 0; i < d.n; ++i) {
        const double vt = d.v[i] - d.x[i] * field;
        d.buffer[i] = psi[i] * std::polar(std::exp(-d.cap[i] * half), -vt * half);
    }
    fftw_execute(d.forward);
    for (int i = 0; i < d.n; ++i) d.buffer[i] *= d.kinetic_phase[i];
    fftw_execute(d.backward);
    for (int i = 0; i < d.n; ++i) {
        const double vt = d.v[i] - d.x[i] * field;
        psi[i] = d.buffer[i] * std::polar(std::exp(-d.cap[i] * half), -vt * half);
    }
}

CVector ground_state_imaginary_time(const AtomModel& atom, const SpatialGrid& grid, double* energy,
                                    double tol) {
    atom.validate();
    grid.validate();
    const int n = grid.points;
    const double h = grid.spacing();
    const auto k = wavenumbers(grid);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[i] = atom.potential(cplx(grid.x(i), 0.0)).real();

    std::vector<cplx> buf(static_cast<std::size_t>(n));
    auto* b = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan fwd, bwd;
    {
        std::lock_guard lock(planner_mutex());
        fwd = fftw_plan_dft_1d(n, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    auto spectral_energy = [&](const CVector& psi) {
        for (int i = 0; i < n; ++i) buf[i] = psi[i];
        fftw_execute(fwd);
        for (int i = 0; i < n; ++i) buf[i] *= 0.5 * k[i] * k[i] / n;
        fftw_execute(bwd);
        cplx e{};
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) {
            e += std::conj(psi[i]) * (buf[i] + v[i] * psi[i]);
            nrm += std::norm(psi[i]);
        }
        return e.real() / nrm;
    };

    CVector psi(n);
    for (int i = 0; i < n; ++i) psi[i] = std::exp(-0.5 * grid.x(i) * grid.x(i));
    double e_old = 0.0;
    // Shrinking steps remove the splitting error of the coarse stages.
    for (double dtau : {0.2, 0.05, 0.01, 0.002}) {
        std::vector<double> vhalf(static_cast<std::size_t>(n)), kfull(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            vhalf[i] = std::exp(-0.5 * dtau * v[i]);
            kfull[i] = std::exp(-0.5 * k[i] * k[i] * dtau) / n;
        }
        e_old = 1e300;
        for (int it = 0; it < 200000; ++it) {
            for (int i = 0; i < n; ++i) buf[i] = psi[i] * vhalf[i];
            fftw_execute(fwd);
            for (int i = 0; i < n; ++i) buf[i] *= kfull[i];
            fftw_execute(bwd);
            for (int i = 0; i < n; ++i) psi[i] = buf[i] * vhalf[i];
            psi /= std::sqrt(psi.squaredNorm() * h);
            if (it % 20 == 19) {
                const double e = spectral_energy(psi);
                if (std::abs(e - e_old) < tol) break;
                e_old = e;
            }
        }
    }
    for (int i = 0; i < n / 2; ++i) {
        const cplx m = 0.5 * (psi[i] + psi[n - 1 - i]);
        psi[i] = psi[n - 1 - i] = cplx(m.real(), 0.0);
    }
    psi /= std::sqrt(psi.squaredNorm() * h);
    if (energy) *energy = spectral_energy(psi);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    return psi;
}

double TdseResult::intensity_at(double order) const {
    const HarmonicAmplitude* a = spectrum.find(order, 1e-9);
    if (!a) throw std::out_of_range("order not on the TDSE sampling grid");
    return a->intensity();
}

TdseResult propagate_and_spectrum(const AtomModel& atom, const SpatialGrid& grid,
                                  const DriveField& drive, const PropagationConfig& cfg) {
    atom.validate();
    grid.validate();
    drive.validate();
    cfg.validate(grid, drive);

    TdseResult out;
    CVector psi = ground_state_imaginary_time(atom, grid, &out.ground_energy);

    const double period = drive.period();
    const double ramp = cfg.ramp_periods * period;
    const double span = (cfg.ramp_periods + cfg.num_periods) * period;
    const long steps = std::lround(span / cfg.time_step);
    const double dt = span / static_cast<double>(steps); // whole number of steps per run
    auto field = [&](double t) {
        double env = 1.0;
        if (t < ramp) {
            const double s = std::sin(0.5 * std::numbers::pi * t / ramp);
            env = s * s;
        }
        return drive.amplitude * env * std::cos(drive.frequency * t);
    };

    const SplitOperator prop(atom, grid, dt, cfg.absorber_width, cfg.absorber_strength);
    const double h = grid.spacing();
    std::vector<double> force(static_cast<std::size_t>(grid.points));
    std::vector<char> inner(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        force[i] = -atom.potential_derivative(cplx(grid.x(i), 0.0)).real();
        inner[i] = std::abs(grid.x(i)) < cfg.normalization_radius;
    }

    std::vector<double> ta, acc;
    double t = 0.0;
    for (long s = 0; s < steps; ++s) {
        prop.step(psi, field(t + 0.5 * dt));
        t = (s + 1) * dt;
        double nrm = 0.0, nin = 0.0, a = 0.0;
        for (int i = 0; i < grid.points; ++i) {
            const double rho = std::norm(psi[i]);
            nrm += rho;
            if (inner[i]) nin += rho;
            a += rho * force[i];
        }
        nrm *= h;
        nin *= h;
        a = a * h + nrm * field(t);
        out.norm.push_back(nrm);
        if (1.0 - nrm > cfg.max_norm_loss) {
            std::ostringstream msg;
            msg << "survival norm fell to " << nrm << " at t = " << t / period << " T0 (limit "
                << 1.0 - cfg.max_norm_loss << ")";
            throw OverIonizationError(msg.str());
        }
        const double an = nin > 0.0 ? a / nin : 0.0;
        out.times.push_back(t);
        out.acceleration.push_back(an);
        if (t > ramp + 1e-9 * period) {
            ta.push_back(t - ramp);
            acc.push_back(an);
        }
    }
    out.final_norm = out.norm.empty() ? 1.0 : out.norm.back();

    const double tw = cfg.num_periods * period;
    std::vector<double> win(ta.size());
    double wsum = 0.0;
    for (std::size_t j = 0; j < ta.size(); ++j) {
        const double s = std::sin(std::numbers::pi * ta[j] / tw);
        win[j] = s * s * s * s;
        wsum += win[j];
    }
    const int count = static_cast<int>(std::floor(cfg.max_order * cfg.orders_per_unit + 1e-9));
    std::vector<double> orders;
    for (int k = 1; k <= count; ++k) orders.push_back(static_cast<double>(k) / cfg.orders_per_unit);
    std::vector<cplx> amp(orders.size());
    kernels::parallel::windowed_dft(acc, win, ta, drive.frequency, orders, amp);
    out.spectrum.drive_frequency = drive.frequency;
    for (std::size_t k = 0; k < orders.size(); ++k)
        out.spectrum.entries.push_back({orders[k], amp[k] / wsum, {}});
    return out;
}

} // namespace cavhhg
