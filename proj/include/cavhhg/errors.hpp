#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cavhhg {

// Invalid parameters or configuration. Carries every violation found, not just the first.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> violations);
    explicit ConfigError(const std::string& violation)
        : ConfigError(std::vector<std::string>{violation}) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Numerical failure attributed to the module that raised it.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

class StateIdentificationError : public NumericalError {
public:
    explicit StateIdentificationError(const std::string& what)
        : NumericalError("floquet-engine", "state identification failed: " + what) {}
};

class SymmetryBrokenError : public NumericalError {
public:
    explicit SymmetryBrokenError(const std::string& what)
        : NumericalError("floquet-engine", "symmetry-broken state: " + what) {}
};

class DegeneratePairError : public NumericalError {
public:
    explicit DegeneratePairError(const std::string& what)
        : NumericalError("cavity-polariton", "degenerate pair: " + what) {}
};

class OverIonizationError : public NumericalError {
public:
    explicit OverIonizationError(const std::string& what)
        : NumericalError("tdse-oracle", "over-ionization: " + what) {}
};

inline ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument([&] {
          std::string msg = "invalid configuration";
          for (const auto& v : violations) msg += "\n  - " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

} // namespace cavhhg
