#pragma once

#include <stdexcept>
#include <string>

namespace hlog {

/// Raised when a configuration file or CLI argument is malformed.
/// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a computation fails a numeric precondition or certificate
/// (non-finite input, support violation, solver breakdown, ...).
/// The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hlog
