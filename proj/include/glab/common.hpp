#pragma once

#include <stdexcept>
#include <string>

namespace glab {

inline constexpr const char* kVersion = "0.1.0";

/// Invalid command line, unreadable or malformed input files. CLI exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition or numerical contract. CLI exit code 2.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace glab
