#include "synthetic.hpp"

#include "cavhhg/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace cavhhg;

namespace {

CavityConfig shifted(double eps, double shift) {
    CavityConfig c{6.45 * 0.057, eps, 0.0, shift};
    return c;
}

double min_gap(const HarmonicSpectrum& s) {
    double g = 1e9;
    for (std::size_t k = 1; k < s.entries.size(); ++k) g = std::min(g, s.entries[k].order - s.entries[k - 1].order);
    return g;
}

} // namespace

TEST_CASE("single-member chain equals the cavity spectrum") {
    fixtures::Gen gen(51);
    const auto in = fixtures::random_inputs(gen, 21);
    const CavityConfig c = shifted(0.229, 1.0);
    const auto a = chain_spectrum({{c}}, in, 21);
    const auto b = single_cavity(c, in, 21).composed;
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
        CHECK(a.entries[k].order == b.entries[k].order);
        CHECK(a.entries[k].amplitude == b.entries[k].amplitude);
    }
}

TEST_CASE("chain is the order-wise sum of its members") {
    fixtures::Gen gen(52);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = fixtures::random_inputs(gen, 15);
        CavityChain ch;
        const int n = gen.integer(1, 5);
        for (int k = 0; k < n; ++k) {
            CavityConfig c = shifted(gen.uniform(0, 0.3), 0.1 * gen.integer(1, 10));
            c.phase = gen.uniform(-1, 1);
            ch.cavities.push_back(c);
        }
        const auto sum = chain_spectrum(ch, in, 15);
        std::vector<HarmonicAmplitude> all;
        for (const auto& c : ch.cavities) {
            const auto s = single_cavity(c, in, 15).composed;
            all.insert(all.end(), s.entries.begin(), s.entries.end());
        }
        const auto ref = merge_entries(all, 0.057);
        REQUIRE(sum.entries.size() == ref.entries.size());
        for (std::size_t k = 0; k < sum.entries.size(); ++k) {
            CHECK(std::abs(sum.entries[k].order - ref.entries[k].order) < 1e-12);
            CHECK(std::abs(sum.entries[k].amplitude - ref.entries[k].amplitude) <
                  1e-12 * (1 + std::abs(ref.entries[k].amplitude)));
        }
    }
}

TEST_CASE("two shifts of 1.0 and 0.5 give half-integer spacing") {
    fixtures::Gen gen(53);
    const auto in = fixtures::random_inputs(gen, 21);
    const auto s = chain_spectrum({{shifted(0.229, 1.0), shifted(0.235, 0.5)}}, in, 21);
    CHECK(min_gap(s) == doctest::Approx(0.5).epsilon(1e-9));
    for (double o = 0.5; o <= 21.5; o += 0.5) CHECK(s.find(o) != nullptr);
}

TEST_CASE("ten shifts 0.1..1.0 give spacing of a tenth") {
    fixtures::Gen gen(54);
    const auto in = fixtures::random_inputs(gen, 21);
    CavityChain ch;
    for (int k = 0; k < 10; ++k) ch.cavities.push_back(shifted(0.238 + 0.002 * k, 0.1 * (k + 1)));
    const auto s = chain_spectrum(ch, in, 21);
    for (std::size_t k = 1; k < s.entries.size(); ++k)
        CHECK(s.entries[k].order - s.entries[k - 1].order == doctest::Approx(0.1).epsilon(1e-9));
    for (int j = 1; j <= 220; ++j) CHECK(s.find(0.1 * j) != nullptr);
}

TEST_CASE("filter removes blocked orders and is idempotent") {
    fixtures::Gen gen(55);
    const auto in = fixtures::random_inputs(gen, 21);
    const auto s = single_cavity(shifted(0.235, 0.5), in, 21).composed;
    const auto f = SpectralFilter::odd_integers(23);
    const auto once = apply_filter(s, f);
    const auto twice = apply_filter(once, f);
    CHECK(once.entries.size() == twice.entries.size());
    for (const auto& e : once.entries) {
        const double frac = e.order - std::floor(e.order);
        const bool even_integer = frac == 0.0 && int(e.order) % 2 == 0;
        CHECK((frac == 0.5 || even_integer));
    }
    CHECK(apply_filter(s, SpectralFilter{}).entries.size() == s.entries.size());
    SpectralFilter all;
    for (const auto& e : s.entries) all.blocked_orders.push_back(e.order);
    const auto none = apply_filter(s, all);
    CHECK(none.entries.empty());
    CHECK(total_intensity(none) == 0.0);
    CHECK_THROWS_AS((SpectralFilter{{1.0}, 0.0}.validate()), ConfigError);
}

TEST_CASE("sweep shape, zero-coupling row and point purity") {
    fixtures::Gen gen(56);
    const auto in = fixtures::random_inputs(gen, 15);
    const std::vector<double> eps{0.0, 0.05, 0.1, 0.2}, omegas{3.45, 6.45, 7.45};
    const auto rows = sweep_total_intensity({}, eps, omegas, in, 15);
    REQUIRE(rows.size() == eps.size() * omegas.size());
    const double bare = total_intensity(in.A_g);
    for (std::size_t w = 0; w < omegas.size(); ++w) {
        for (std::size_t e = 0; e < eps.size(); ++e) {
            const auto& r = rows[w * eps.size() + e];
            CHECK(r.omega_ratio == omegas[w]);
            CHECK(r.eps_cav == eps[e]);
            CHECK(r.status == "ok");
            if (eps[e] == 0.0) CHECK(r.total == bare);
            const auto alone = sweep_total_intensity({}, {eps[e]}, {omegas[w]}, in, 15, false);
            CHECK(alone[0].total == r.total);
        }
    }
}

TEST_CASE("sweep records per-point failures and continues") {
    fixtures::Gen gen(57);
    const auto in = fixtures::random_inputs(gen, 9);
    const auto rows = sweep_total_intensity({}, {0.1}, {6.0, 6.45}, in, 9);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status.rfind("error", 0) == 0);
    CHECK(std::isnan(rows[0].total));
    CHECK(rows[1].status == "ok");
}
