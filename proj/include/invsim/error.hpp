#pragma once

#include <stdexcept>
#include <string>

namespace invsim {

// Bad invocation: unknown command, unknown policy name, malformed option value.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Input data or parameters that violate a documented invariant.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace invsim
