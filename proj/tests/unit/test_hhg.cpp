#include "fixtures.hpp"

#include "cavhhg/errors.hpp"
#include "cavhhg/hhg_spectrum.hpp"

#include <doctest.h>

#include <sstream>

using namespace cavhhg;

TEST_CASE("length prefactor scales as the square of the order") {
    fixtures::Gen gen(31);
    for (int t = 0; t < 100; ++t) {
        const int M = gen.integer(1, 60);
        const double w = gen.uniform(0.01, 0.2);
        CHECK(length_prefactor(2 * M, w) == doctest::Approx(4.0 * length_prefactor(M, w)).epsilon(1e-14));
        CHECK(length_prefactor(M, w) < 0.0);
    }
}

// Oracle: the scipy prototype evaluates the length form on its own eigenvector.
TEST_CASE("length-form intensities match the independent oracle") {
    const auto s = spectrum(fixtures::small_ground(), 7, DipoleForm::length);
    const std::pair<int, double> ref[] = {{1, 4.2916061867e-07}, {3, 1.8121019462e-07},
                                          {5, 1.7810244865e-07}};
    for (auto [M, I] : ref) CHECK(s.find(M)->intensity() == doctest::Approx(I).epsilon(1e-6));
    CHECK(s.find(2)->intensity() < 1e-30);
}

TEST_CASE("length and acceleration forms agree for a converged weak-field state") {
    const auto& g = fixtures::small_ground();
    for (int M : {1, 3, 5}) {
        const cplx a = harmonic_amplitude(g, M, DipoleForm::acceleration);
        const cplx l = harmonic_amplitude(g, M, DipoleForm::length);
        CHECK(std::abs(a - l) < 0.05 * std::abs(l));
    }
}

TEST_CASE("intensities are invariant under a global phase of the state") {
    FloquetEigenstate s = fixtures::small_ground();
    const auto before = spectrum(s, 7);
    const cplx phase = std::polar(1.0, 0.7);
    for (auto& z : s.channel_data) z *= phase;
    const auto after = spectrum(s, 7);
    for (std::size_t k = 0; k < before.entries.size(); ++k)
        CHECK(after.entries[k].intensity() ==
              doctest::Approx(before.entries[k].intensity()).epsilon(1e-12));
}

TEST_CASE("serial and parallel spectra are identical") {
    const auto& g = fixtures::small_ground();
    const auto a = spectrum(g, 12, DipoleForm::acceleration, false);
    const auto b = spectrum(g, 12, DipoleForm::acceleration, true);
    for (std::size_t k = 0; k < a.entries.size(); ++k) CHECK(a.entries[k].amplitude == b.entries[k].amplitude);
}

TEST_CASE("zero field gives an all-zero spectrum") {
    const auto s = solve_labelled(fixtures::small_problem(0.0), StateLabel::FLg);
    const auto sp = spectrum(s, 10);
    CHECK(sp.entries.size() == 10);
    CHECK(total_intensity(sp) < 1e-30);
}

TEST_CASE("orders beyond the channel span are rejected") {
    CHECK_THROWS_AS(harmonic_amplitude(fixtures::small_ground(), 17), std::out_of_range);
}

TEST_CASE("merging sums coincident orders and joins tags") {
    std::vector<HarmonicAmplitude> e{{3.0, {1, 0}, "odd"}, {2.0, {0, 1}, "side_minus"},
                                     {3.0 + 1e-12, {0.5, 0}, "side_plus"}};
    const auto m = merge_entries(e, 0.057);
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].order == 2.0);
    CHECK(m.entries[1].amplitude == cplx(1.5, 0));
    CHECK(m.entries[1].tag == "odd+side_plus");
    m.validate();
}

TEST_CASE("dipole form parsing") {
    CHECK(dipole_form_from_string("length") == DipoleForm::length);
    CHECK(dipole_form_from_string("acceleration") == DipoleForm::acceleration);
    CHECK_THROWS_AS(dipole_form_from_string("velocity"), ConfigError);
}

TEST_CASE("CSV and JSON writers embed provenance") {
    HarmonicSpectrum s;
    s.drive_frequency = 0.057;
    s.entries = {{1.0, {0.5, -0.25}, "odd"}};
    OutputMetadata m;
    m.digest = "0123456789abcdef";
    std::ostringstream csv, js;
    write_spectrum_csv(csv, s, m, true);
    write_spectrum_json(js, s, m);
    CHECK(csv.str().find("digest=0123456789abcdef") != std::string::npos);
    CHECK(csv.str().find("version=cavhhg") != std::string::npos);
    CHECK(csv.str().find("order,re_amplitude,im_amplitude,intensity,tag\n1,0.5,-0.25,0.3125,odd") !=
          std::string::npos);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j["digest"] == "0123456789abcdef");
    CHECK(j["entries"][0]["intensity"] == 0.3125);
}
