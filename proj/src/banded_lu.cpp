#include "cavhhg/banded_lu.hpp"

#include "cavhhg/errors.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <stdexcept>
#include <string>

namespace cavhhg {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(static_cast<std::size_t>(2 * kl + ku + 1)) {
    if (n <= 0 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad dimensions");
    ab_.assign(ld_ * static_cast<std::size_t>(n), {0.0, 0.0});
}

void BandedMatrix::add(int i, int j, std::complex<double> v) {
    if (!in_band(i, j)) throw std::out_of_range("BandedMatrix: entry outside band");
    ab_[index(i, j)] += v;
}

std::complex<double> BandedMatrix::get(int i, int j) const {
    return in_band(i, j) ? ab_[index(i, j)] : std::complex<double>{};
}

std::size_t BandedMatrix::storage_bytes(std::size_t n, std::size_t kl, std::size_t ku) {
    return (2 * kl + ku + 1) * n * sizeof(std::complex<double>);
}

BandedLU::BandedLU(BandedMatrix a) : a_(std::move(a)), pivots_(static_cast<std::size_t>(a_.n_)) {
    static_assert(sizeof(lapack_int) == sizeof(int));
    const lapack_int info =
        LAPACKE_zgbtrf(LAPACK_COL_MAJOR, a_.n_, a_.n_, a_.kl_, a_.ku_, a_.ab_.data(),
                       static_cast<lapack_int>(a_.ld_), pivots_.data());
    if (info > 0)
        throw NumericalError("banded-lu", "exactly singular pivot at row " + std::to_string(info));
    if (info < 0) throw NumericalError("banded-lu", "zgbtrf argument " + std::to_string(-info));
}

void BandedLU::solve_in_place(std::span<std::complex<double>> rhs) const {
    if (rhs.size() != static_cast<std::size_t>(a_.n_))
        throw std::invalid_argument("BandedLU: right-hand side length mismatch");
    const lapack_int info = LAPACKE_zgbtrs(
        LAPACK_COL_MAJOR, 'N', a_.n_, a_.kl_, a_.ku_, 1,
        const_cast<std::complex<double>*>(a_.ab_.data()), static_cast<lapack_int>(a_.ld_),
        pivots_.data(), rhs.data(), a_.n_);
    if (info != 0) throw NumericalError("banded-lu", "zgbtrs failed");
}

} // namespace cavhhg
