#pragma once

#include <stdexcept>
#include <string>

namespace nsga3oj {

/// Caller violated a documented precondition (bad sizes, out-of-range index,
/// invalid parameters).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters are valid but outside the range where a closed-form result is
/// known to hold.
class RegimeError : public UsageError {
public:
    using UsageError::UsageError;
};

/// File could not be read or written. The message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nsga3oj
