#include "fixtures.hpp"

#include "cavhhg/cache.hpp"
#include "cavhhg/config.hpp"
#include "cavhhg/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cavhhg;
using nlohmann::json;

namespace {

std::vector<std::string> violations_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& x : v)
        if (x.find(s) != std::string::npos) return true;
    return false;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("cavhhg_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("empty config resolves to the defaults") {
    const RunConfig a = parse_config(json::object());
    const RunConfig b;
    CHECK(a.digest() == b.digest());
    CHECK(a.atom.softcore_width == calibrated_softcore_width);
    CHECK(a.drive.frequency == 0.057);
    CHECK(a.drive.amplitude == 0.04);
    CHECK(a.cavities.size() == 1);
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("digest ignores key order and output settings but tracks physics") {
    const json a = json::parse(R"({"drive": {"amplitude": 0.03, "frequency": 0.06}, "grid": {"points": 512}})");
    const json b = json::parse(R"({"grid": {"points": 512}, "drive": {"frequency": 0.06, "amplitude": 0.03}, "output_dir": "elsewhere"})");
    CHECK(parse_config(a).digest() == parse_config(b).digest());
    json c = a;
    c["drive"]["amplitude"] = 0.0300001;
    CHECK(parse_config(a).digest() != parse_config(c).digest());
    CHECK(parse_config(a).digest().size() == 16);
}

TEST_CASE("resolved config round-trips") {
    RunConfig c;
    c.cavities[0].cavity.delta_m_override = 0.5;
    c.filter.block_odd = true;
    const RunConfig d = parse_config(c.to_json());
    CHECK(d.digest() == c.digest());
    CHECK(d.cavities[0].cavity.delta_m_override == 0.5);
}

TEST_CASE("every violation is reported at once") {
    const json j = json::parse(R"({
        "grid": {"points": 2, "spacing": 1},
        "drive": {"frequency": -1},
        "scaling": {"theta": 1.0},
        "nonsense": true,
        "cavities": [{"coupling": 0.1}]
    })");
    const auto v = violations_of(j);
    CHECK(mentions(v, "unknown key grid.spacing"));
    CHECK(mentions(v, "unknown key nonsense"));
    CHECK(mentions(v, "grid.points"));
    CHECK(mentions(v, "drive.frequency"));
    CHECK(mentions(v, "theta"));
    CHECK(mentions(v, "exactly one of omega_ratio or frequency"));
    CHECK(v.size() >= 6);
}

TEST_CASE("wrong types are violations, not crashes") {
    const auto v = violations_of(json::parse(R"({"grid": {"points": "many"}, "cache": {"enabled": 3}})"));
    CHECK(mentions(v, "grid.points"));
    CHECK(mentions(v, "cache.enabled"));
}

TEST_CASE("convenience units convert at load") {
    const RunConfig c = parse_config(json::parse(R"({"drive": {"wavelength_nm": 800, "intensity_W_cm2": 5e13}})"));
    CHECK(c.drive.frequency == doctest::Approx(45.5634 / 800));
    CHECK(c.drive.amplitude == doctest::Approx(std::sqrt(5e13 / 3.50945e16)));
    CHECK(c.drive.amplitude == doctest::Approx(0.0377).epsilon(1e-2));
    CHECK(mentions(violations_of(json::parse(R"({"drive": {"wavelength_nm": 800, "frequency": 0.057}})")),
                   "either frequency or wavelength_nm"));
}

TEST_CASE("width and calibration target are exclusive") {
    CHECK(mentions(violations_of(json::parse(R"({"atom": {"softcore_width": 2, "target_ground_energy": -0.5}})")),
                   "either softcore_width or target_ground_energy"));
}

TEST_CASE("calibration target sets the width") {
    const RunConfig c = parse_config(json::parse(R"({"grid": {"extent": 60, "points": 201}, "atom": {"target_ground_energy": -0.5}, "tdse": {"absorber_width": 20, "normalization_radius": 20}})"));
    const auto s = solve_field_free(c.atom, c.grid, {0.0}, 1);
    CHECK(s[0].energy.real() == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("cavity entries accept a frequency or a ratio") {
    const RunConfig c = parse_config(json::parse(R"({"cavities": [{"frequency": 0.36765, "coupling": 0.2}, {"omega_ratio": 5.45, "coupling": 0.1, "phase": 0.3}]})"));
    REQUIRE(c.cavities.size() == 2);
    CHECK(c.cavities[0].omega_ratio == doctest::Approx(6.45));
    CHECK(c.cavities[1].cavity.frequency == doctest::Approx(5.45 * 0.057));
    CHECK(c.cavities[1].cavity.phase == 0.3);
}

TEST_CASE("load_config reports unreadable and malformed files") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
    const auto dir = scratch("badjson");
    std::ofstream(dir / "c.json") << "{ not json";
    CHECK_THROWS_AS(load_config((dir / "c.json").string()), ConfigError);
}

TEST_CASE("eigenstate archive round-trips bit-exactly") {
    const auto& s = fixtures::small_ground();
    const ResonanceOptions o;
    const auto key = eigenstate_key(s.problem, o);
    std::stringstream buf;
    write_eigenstate(buf, s, key);
    const auto r = read_eigenstate(buf, s.problem, key);
    REQUIRE(r.has_value());
    CHECK(r->quasienergy == s.quasienergy);
    CHECK(r->channel_data == s.channel_data);
    CHECK(r->symmetry == s.symmetry);
    CHECK(r->label == s.label);
    CHECK(r->target_overlap == s.target_overlap);
}

TEST_CASE("archive rejects truncation, trailing bytes, wrong key and wrong version") {
    const auto& s = fixtures::small_ground();
    const ResonanceOptions o;
    const auto key = eigenstate_key(s.problem, o);
    std::stringstream full;
    write_eigenstate(full, s, key);
    const std::string bytes = full.str();
    std::string why;

    std::stringstream cut(bytes.substr(0, bytes.size() / 2));
    CHECK_FALSE(read_eigenstate(cut, s.problem, key, &why).has_value());
    CHECK(why == "truncated payload");

    std::stringstream extra(bytes + "x");
    CHECK_FALSE(read_eigenstate(extra, s.problem, key, &why).has_value());
    CHECK(why == "trailing bytes");

    std::stringstream other(bytes);
    CHECK_FALSE(read_eigenstate(other, s.problem, key + 1, &why).has_value());
    CHECK(why == "key mismatch");

    std::string bumped = bytes;
    bumped[8] = static_cast<char>(bumped[8] + 1);
    std::stringstream ver(bumped);
    CHECK_FALSE(read_eigenstate(ver, s.problem, key, &why).has_value());
    CHECK(why == "format version mismatch");

    std::stringstream junk("garbage");
    CHECK_FALSE(read_eigenstate(junk, s.problem, key, &why).has_value());
    CHECK(why == "bad magic");
}

TEST_CASE("cache key tracks drive amplitude and solver options") {
    const auto p = fixtures::small_problem();
    ResonanceOptions o;
    auto q = p;
    q.drive.amplitude += 1e-9;
    CHECK(eigenstate_key(p, o) != eigenstate_key(q, o));
    auto o2 = o;
    o2.label = StateLabel::FLe;
    CHECK(eigenstate_key(p, o) != eigenstate_key(p, o2));
    CHECK(eigenstate_key(p, o) == eigenstate_key(fixtures::small_problem(), ResonanceOptions{}));
}

TEST_CASE("cache hit, corrupt archive recompute and miss on changed drive") {
    const auto dir = scratch("cache");
    const EigenstateCache cache(dir);
    ResonanceOptions o;
    o.label = StateLabel::FLg;
    const auto p = fixtures::small_problem();
    bool hit = true;
    const auto first = cache.get_or_solve(p, o, &hit);
    CHECK_FALSE(hit);
    const auto second = cache.get_or_solve(p, o, &hit);
    CHECK(hit);
    CHECK(second.channel_data == first.channel_data);

    const auto path = cache.path_for(o.label, eigenstate_key(p, o));
    std::filesystem::resize_file(path, std::filesystem::file_size(path) / 3);
    const auto third = cache.get_or_solve(p, o, &hit);
    CHECK_FALSE(hit);
    CHECK(third.quasienergy == first.quasienergy);
    cache.get_or_solve(p, o, &hit);
    CHECK(hit);

    auto q = p;
    q.drive.amplitude = 0.021;
    cache.get_or_solve(q, o, &hit);
    CHECK_FALSE(hit);
}

TEST_CASE("cache root resolution order") {
    CHECK(EigenstateCache::resolve_root("explicit", "fallback") == "explicit");
    ::setenv("CAVHHG_CACHE_DIR", "from_env", 1);
    CHECK(EigenstateCache::resolve_root("", "fallback") == "from_env");
    ::unsetenv("CAVHHG_CACHE_DIR");
    CHECK(EigenstateCache::resolve_root("", "fallback") == "fallback");
}
