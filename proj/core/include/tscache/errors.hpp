#pragma once

#include <stdexcept>
#include <string>

namespace tscache {

// Invalid argument to a model operation (non-positive moments, bad shapes...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation called outside its precondition (e.g. asymmetric caps for shrink_factor).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Table lookup miss, e.g. a supply voltage without a CK row.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed trace input. Carries the 1-based line number.
class IngestionError : public std::runtime_error {
public:
    IngestionError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A simulated read broke a guarantee the model must uphold.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace tscache
