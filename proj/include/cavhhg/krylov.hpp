#pragma once

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace cavhhg {

using LinearMap = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct RitzPair {
    std::complex<double> value;
    Eigen::VectorXcd vector; // unit 2-norm
    double residual = 0.0;   // ||A y - value y||, estimated from the factorisation
};

struct KrylovSchurOptions {
    int wanted = 12;       // eigenvalues of largest magnitude
    int subspace = 40;     // maximum basis size
    double tol = 1e-10;    // convergence: residual <= tol * |value|
    int max_restarts = 60;
};

struct KrylovSchurResult {
    std::vector<RitzPair> pairs; // ordered by decreasing |value|
    int restarts = 0;
    int applications = 0;
    bool converged = false;
};

// Thick-restart Krylov-Schur iteration for the largest-magnitude eigenvalues
// of a general complex operator. Gram-Schmidt is applied twice per step.
KrylovSchurResult krylov_schur(const LinearMap& op, const Eigen::VectorXcd& start,
                               const KrylovSchurOptions& options = {});

} // namespace cavhhg
