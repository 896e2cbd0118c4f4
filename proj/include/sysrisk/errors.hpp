#pragma once

#include <stdexcept>
#include <string>

namespace sysrisk {

// Error taxonomy mirrored by the CLI exit codes:
//   ConfigError  -> 2  (bad parameters or parameter combinations)
//   DataError    -> 3  (malformed, inconsistent or degenerate input data)
//   NumericError -> 4  (failures arising during computation)

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sysrisk
