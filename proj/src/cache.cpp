#include "cavhhg/cache.hpp"

#include "cavhhg/config.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cavhhg {

namespace {

constexpr char magic[8] = {'C', 'A', 'V', 'H', 'H', 'G', 'E', 'S'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool take(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

} // namespace

std::uint64_t eigenstate_key(const FloquetProblem& p, const ResonanceOptions& o) {
    std::ostringstream s;
    s.precision(17);
    s << "atom " << p.atom.softcore_depth << ' ' << p.atom.softcore_width << " grid " << p.grid.extent
      << ' ' << p.grid.points << ' ' << p.grid.fd_order << " theta " << p.scaling.theta << " drive "
      << p.drive.amplitude << ' ' << p.drive.frequency << " basis " << p.basis.channel_min << ' '
      << p.basis.channel_max << " solver " << o.overlap_floor << ' ' << o.krylov_dim << ' '
      << o.krylov_wanted << ' ' << o.krylov_tol << ' ' << o.residual_tol << ' ' << o.shift_offset
      << ' ' << o.dense_threshold << " label " << to_string(o.label);
    return fnv1a64(s.str());
}

void write_eigenstate(std::ostream& os, const FloquetEigenstate& s, std::uint64_t key) {
    os.write(magic, sizeof magic);
    put(os, cache_format_version);
    put(os, key);
    put(os, static_cast<std::int32_t>(s.points()));
    put(os, static_cast<std::int32_t>(s.channel_min()));
    put(os, static_cast<std::int32_t>(s.channel_max()));
    put(os, s.quasienergy);
    put(os, s.target_overlap);
    put(os, s.symmetry_residual);
    put(os, s.residual);
    put(os, static_cast<std::int32_t>(s.symmetry == DynamicalSymmetry::plus ? 1 : -1));
    put(os, static_cast<std::int32_t>(s.label));
    put(os, static_cast<std::uint64_t>(s.channel_data.size()));
    os.write(reinterpret_cast<const char*>(s.channel_data.data()),
             static_cast<std::streamsize>(s.channel_data.size() * sizeof(cplx)));
}

std::optional<FloquetEigenstate> read_eigenstate(std::istream& is, const FloquetProblem& problem,
                                                 std::uint64_t key, std::string* why) {
    auto fail = [&](const char* reason) -> std::optional<FloquetEigenstate> {
        if (why) *why = reason;
        return std::nullopt;
    };
    char m[sizeof magic];
    if (!is.read(m, sizeof m) || std::memcmp(m, magic, sizeof magic) != 0) return fail("bad magic");
    std::uint32_t version = 0;
    std::uint64_t stored_key = 0;
    if (!take(is, version)) return fail("truncated header");
    if (version != cache_format_version) return fail("format version mismatch");
    if (!take(is, stored_key)) return fail("truncated header");
    if (stored_key != key) return fail("key mismatch");

    std::int32_t points = 0, cmin = 0, cmax = 0, sym = 0, label = 0;
    FloquetEigenstate s;
    std::uint64_t count = 0;
    if (!take(is, points) || !take(is, cmin) || !take(is, cmax) || !take(is, s.quasienergy) ||
        !take(is, s.target_overlap) || !take(is, s.symmetry_residual) || !take(is, s.residual) ||
        !take(is, sym) || !take(is, label) || !take(is, count))
        return fail("truncated header");
    if (points != problem.grid.points || cmin != problem.basis.channel_min ||
        cmax != problem.basis.channel_max || count != problem.dimension())
        return fail("shape mismatch");
    if ((sym != 1 && sym != -1) || label < 0 || label > 2) return fail("corrupt header");
    s.problem = problem;
    s.symmetry = sym == 1 ? DynamicalSymmetry::plus : DynamicalSymmetry::minus;
    s.label = static_cast<StateLabel>(label);
    s.channel_data.resize(count);
    if (!is.read(reinterpret_cast<char*>(s.channel_data.data()),
                 static_cast<std::streamsize>(count * sizeof(cplx))))
        return fail("truncated payload");
    if (is.peek() != std::char_traits<char>::eof()) return fail("trailing bytes");
    return s;
}

std::filesystem::path EigenstateCache::resolve_root(const std::string& configured,
                                                    const std::filesystem::path& fallback) {
    if (!configured.empty()) return configured;
    if (const char* env = std::getenv("CAVHHG_CACHE_DIR"); env && *env) return env;
    return fallback;
}

std::filesystem::path EigenstateCache::path_for(StateLabel label, std::uint64_t key) const {
    return root_ / (to_string(label) + "_" + hex64(key) + ".bin");
}

std::optional<FloquetEigenstate> EigenstateCache::load(const FloquetProblem& problem,
                                                       const ResonanceOptions& options) const {
    const std::uint64_t key = eigenstate_key(problem, options);
    const auto path = path_for(options.label, key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string why;
    auto s = read_eigenstate(in, problem, key, &why);
    if (!s) std::cerr << "warning: ignoring cache archive " << path << " (" << why << "), recomputing\n";
    return s;
}

void EigenstateCache::store(const FloquetEigenstate& s, const ResonanceOptions& options) const {
    const std::uint64_t key = eigenstate_key(s.problem, options);
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    const auto path = path_for(options.label, key);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "warning: cannot write cache archive " << path << "\n";
            return;
        }
        write_eigenstate(out, s, key);
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::cerr << "warning: cannot finalise cache archive " << path << ": " << ec.message() << "\n";
}

FloquetEigenstate EigenstateCache::get_or_solve(const FloquetProblem& problem,
                                                const ResonanceOptions& options, bool* hit) const {
    if (auto s = load(problem, options)) {
        if (hit) *hit = true;
        return *s;
    }
    if (hit) *hit = false;
    FloquetEigenstate s = solve_labelled(problem, options.label, options);
    store(s, options);
    return s;
}

} // namespace cavhhg
