#pragma once

#include "cavhhg/config.hpp"
#include "cavhhg/floquet.hpp"

#include <cstdint>
#include <random>

namespace fixtures {

// Small problem shared by the Floquet, spectrum and cache tests: 201 points on
// [-60, 60], channels -8..8, weak drive. Dense fallback applies (dim 3417).
inline cavhhg::FloquetProblem small_problem(double amplitude = 0.02) {
    cavhhg::FloquetProblem p;
    p.atom.softcore_width = cavhhg::calibrated_softcore_width;
    p.grid.extent = 60.0;
    p.grid.points = 201;
    p.scaling.theta = 0.15;
    p.drive.amplitude = amplitude;
    p.drive.frequency = 0.057;
    p.basis = {-8, 8};
    return p;
}

inline const cavhhg::FloquetEigenstate& small_ground() {
    static const cavhhg::FloquetEigenstate s =
        cavhhg::solve_labelled(small_problem(), cavhhg::StateLabel::FLg);
    return s;
}

inline const cavhhg::FloquetEigenstate& small_excited() {
    static const cavhhg::FloquetEigenstate s = [] {
        cavhhg::ResonanceOptions o;
        o.overlap_floor = 0.2;
        return cavhhg::solve_labelled(small_problem(), cavhhg::StateLabel::FLe, o);
    }();
    return s;
}

// Seeded generator for the hand-rolled property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    std::complex<double> complex(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
};

} // namespace fixtures
