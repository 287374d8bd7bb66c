#pragma once

#include <stdexcept>
#include <string>

namespace dualband {

/// Malformed or invalid configuration. `field()` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An allocator could not produce a feasible allocation.
class AllocationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An exhaustive oracle was asked to enumerate more than its budget allows.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dualband
