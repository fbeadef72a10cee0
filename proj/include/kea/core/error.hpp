#pragma once

#include <stdexcept>
#include <string>

namespace kea {

// Raised when a caller breaks a documented precondition (shape, range, state).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Raised when a computation produces a non-finite value.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const char* message) {
    if (!condition) {
        throw ContractViolation(message);
    }
}

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw ContractViolation(message);
    }
}

}  // namespace kea
