#include "cavhhg/krylov.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cavhhg {

namespace {

std::vector<int> by_magnitude(const Eigen::VectorXcd& values) {
    std::vector<int> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return std::abs(values[a]) > std::abs(values[b]); });
    return idx;
}

} // namespace

KrylovSchurResult krylov_schur(const LinearMap& op, const Eigen::VectorXcd& start,
                               const KrylovSchurOptions& opt) {
    const Eigen::Index n = start.size();
    const double start_norm = start.norm();
    if (n == 0 || start_norm == 0.0) throw std::invalid_argument("krylov_schur: zero start vector");
    const int ncv = static_cast<int>(std::min<Eigen::Index>(opt.subspace, n));
    const int nev = std::max(1, std::min(opt.wanted, ncv - 1));
    const int keep = std::min(ncv - 1, std::max(nev, (nev + ncv) / 2));

    Eigen::MatrixXcd v(n, ncv + 1);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ncv + 1, ncv);
    v.col(0) = start / start_norm;

    KrylovSchurResult out;
    Eigen::VectorXcd w(n);
    int k = 0;
    for (;;) {
        int m = ncv;
        bool invariant = false;
        for (int j = k; j < ncv; ++j) {
            op(v.col(j), w);
            ++out.applications;
            const double wnorm = w.norm();
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXcd c = v.leftCols(j + 1).adjoint() * w;
                w.noalias() -= v.leftCols(j + 1) * c;
                h.col(j).head(j + 1) += c;
            }
            const double beta = w.norm();
            h(j + 1, j) = beta;
            if (beta <= 1e-13 * std::max(wnorm, 1e-300)) {
                m = j + 1;
                invariant = true;
                break;
            }
            v.col(j + 1) = w / beta;
        }

        const Eigen::MatrixXcd hm = h.topLeftCorner(m, m);
        const Eigen::RowVectorXcd r = invariant ? Eigen::RowVectorXcd::Zero(m)
                                                : Eigen::RowVectorXcd(h.row(m).head(m));

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hm, true);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("krylov_schur: projected eigenproblem did not converge");
        const auto order = by_magnitude(es.eigenvalues());
        const int check = std::min(nev, m);
        bool converged = true;
        for (int q = 0; q < check; ++q) {
            const int i = order[q];
            const Eigen::VectorXcd s = es.eigenvectors().col(i).normalized();
            if (std::abs((r * s).value()) > opt.tol * std::abs(es.eigenvalues()[i])) converged = false;
        }

        if (converged || invariant || out.restarts >= opt.max_restarts) {
            out.converged = converged || invariant;
            for (int i : order) {
                const Eigen::VectorXcd s = es.eigenvectors().col(i).normalized();
                RitzPair p;
                p.value = es.eigenvalues()[i];
                p.vector = v.leftCols(m) * s;
                p.residual = std::abs((r * s).value());
                out.pairs.push_back(std::move(p));
            }
            return out;
        }

        // Thick restart: reorder the Schur form so the `keep` largest Ritz
        // values lead, and compress the basis onto them.
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(hm, true);
        Eigen::MatrixXcd t = schur.matrixT();
        Eigen::MatrixXcd q = schur.matrixU();
        const auto torder = by_magnitude(t.diagonal());
        std::vector<lapack_logical> select(static_cast<std::size_t>(m), 0);
        for (int i = 0; i < keep; ++i) select[static_cast<std::size_t>(torder[i])] = 1;
        Eigen::VectorXcd eig(m);
        lapack_int msel = 0;
        double s_dummy = 0.0, sep_dummy = 0.0;
        const lapack_int info = LAPACKE_ztrsen(LAPACK_COL_MAJOR, 'N', 'V', select.data(), m,
                                               t.data(), m, q.data(), m, eig.data(), &msel,
                                               &s_dummy, &sep_dummy);
        if (info != 0) throw std::runtime_error("krylov_schur: Schur reordering failed");

        const Eigen::MatrixXcd kept = v.leftCols(m) * q.leftCols(keep);
        v.col(keep) = v.col(m);
        v.leftCols(keep) = kept;
        const Eigen::RowVectorXcd b = r * q.leftCols(keep);
        h.setZero();
        h.topLeftCorner(keep, keep) = t.topLeftCorner(keep, keep).triangularView<Eigen::Upper>();
        h.row(keep).head(keep) = b;
        k = keep;
        ++out.restarts;
    }
}

} // namespace cavhhg
