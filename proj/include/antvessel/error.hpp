#pragma once

#include <stdexcept>
#include <string>

namespace antvessel {

/// Bad or inconsistent input data: missing files, undecodable rasters,
/// dimension mismatches, degenerate sample sets. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid arguments or parameter ranges. Maps to CLI exit code 1.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace antvessel
