#pragma once

#include "cavhhg/floquet.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace cavhhg {

inline constexpr std::uint32_t cache_format_version = 1;

// Content hash of everything that determines a resonance: atom, grid,
// scaling, drive, basis, solver options and the label.
std::uint64_t eigenstate_key(const FloquetProblem& problem, const ResonanceOptions& options);

void write_eigenstate(std::ostream& os, const FloquetEigenstate& s, std::uint64_t key);

// Returns nothing when the archive is truncated, corrupt, of another format
// version or for another key. `why` receives the reason.
std::optional<FloquetEigenstate> read_eigenstate(std::istream& is, const FloquetProblem& problem,
                                                 std::uint64_t key, std::string* why = nullptr);

class EigenstateCache {
public:
    explicit EigenstateCache(std::filesystem::path root) : root_(std::move(root)) {}

    // Cache root: explicit dir, else $CAVHHG_CACHE_DIR, else `fallback`.
    static std::filesystem::path resolve_root(const std::string& configured,
                                              const std::filesystem::path& fallback);

    std::filesystem::path path_for(StateLabel label, std::uint64_t key) const;

    std::optional<FloquetEigenstate> load(const FloquetProblem& problem,
                                          const ResonanceOptions& options) const;
    void store(const FloquetEigenstate& s, const ResonanceOptions& options) const;

    // Load on hit; otherwise solve, store and return. Unusable archives are
    // reported on stderr and recomputed.
    FloquetEigenstate get_or_solve(const FloquetProblem& problem, const ResonanceOptions& options,
                                   bool* hit = nullptr) const;

private:
    std::filesystem::path root_;
};

} // namespace cavhhg
