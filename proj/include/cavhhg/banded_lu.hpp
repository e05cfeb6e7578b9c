#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cavhhg {

// Square complex band matrix in LAPACK general-band layout with room for the
// fill-in produced by partial pivoting (leading dimension 2*kl + ku + 1).
class BandedMatrix {
public:
    BandedMatrix(int n, int kl, int ku);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
    void add(int i, int j, std::complex<double> v);
    std::complex<double> get(int i, int j) const;

    static std::size_t storage_bytes(std::size_t n, std::size_t kl, std::size_t ku);

private:
    friend class BandedLU;
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * ld_;
    }

    int n_, kl_, ku_;
    std::size_t ld_;
    std::vector<std::complex<double>> ab_;
};

// LU factorisation with partial pivoting (zgbtrf); solves reuse the factors.
class BandedLU {
public:
    explicit BandedLU(BandedMatrix a);

    int size() const { return a_.size(); }
    void solve_in_place(std::span<std::complex<double>> rhs) const;

private:
    BandedMatrix a_;
    std::vector<int> pivots_;
};

} // namespace cavhhg
