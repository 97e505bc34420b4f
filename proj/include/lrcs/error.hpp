#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrcs {

/// Base class for all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Inconsistent or malformed data (exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

/// Numerical failure inside a solver, e.g. a rank-deficient least-squares system (exit code 4).
class SolverError : public Error {
public:
    using Error::Error;
};

/// Malformed container file. Carries the byte offset at which parsing failed.
class ContainerError : public DataError {
public:
    ContainerError(const std::string& what, std::uint64_t offset)
        : DataError(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

}  // namespace lrcs
