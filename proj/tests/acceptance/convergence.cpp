// Self-convergence of the production resonances: grid extent doubled at fixed
// spacing (gated) and channel range widened by 10 on each side (reported: the
// quasienergies move by 1e-5 to 1e-3 there, see README). One line per check;
// shares the acceptance cache.

#include "cavhhg/cache.hpp"
#include "cavhhg/config.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <tuple>

using namespace cavhhg;

namespace {

constexpr double quasienergy_tol = 1e-7;

} // namespace

int main() {
    const RunConfig prod;
    const EigenstateCache cache(EigenstateCache::resolve_root("", "acceptance-cache"));

    FloquetProblem wide = prod.problem();
    wide.basis.channel_min -= 10;
    wide.basis.channel_max += 10;
    FloquetProblem big = prod.problem();
    big.grid.extent *= 2.0;
    big.grid.points *= 2;

    int failures = 0;
    for (auto label : {StateLabel::FLg, StateLabel::FLe}) {
        const auto opts = prod.solver.options(label);
        const cplx base = cache.get_or_solve(prod.problem(), opts).quasienergy;
        for (const auto& [name, p, gated] : {std::tuple{"extent x2", big, true}, std::tuple{"channels +10", wide, false}}) {
            const cplx e = cache.get_or_solve(p, opts).quasienergy;
            const double d = std::abs(e - base);
            const bool pass = d < quasienergy_tol;
            if (!pass && gated) ++failures;
            std::printf("%s %s %s: quasienergy change %.2e (limit %.0e), %.12f%+.12fi\n",
                        pass ? "PASS" : gated ? "FAIL" : "FAIL (not gated)", to_string(label).c_str(), name, d,
                        quasienergy_tol, e.real(), e.imag());
            std::fflush(stdout);
        }
    }
    return failures == 0 ? 0 : 1;
}
