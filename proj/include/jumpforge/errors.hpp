#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpforge {

/// Invalid user-supplied configuration (sizes, rates, indices, flags).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operator sent the state to the zero vector (e.g. lowering on |0>).
/// Distinct from ConfigError: reaching it from the sampler indicates a bug.
struct Annihilation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two channels could not be erased because their photons are distinguishable.
struct ErasureMismatch : ConfigError {
    using ConfigError::ConfigError;
};

/// Channel set whose total decay operator is not diagonal.
struct UnsupportedConfiguration : ConfigError {
    using ConfigError::ConfigError;
};

/// Sampler picked a channel that annihilates the state.
struct SamplerFault : std::logic_error {
    using std::logic_error::logic_error;
};

struct ProtocolIncomplete : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LogCorruption : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tableau rows no longer form a symplectic basis.
struct IntegrityError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Integrator step too coarse for the requested accuracy.
struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Text input error carrying the offending 1-based line number.
struct ParseError : ConfigError {
    ParseError(std::size_t line, const std::string& what)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace jumpforge
