#pragma once

#include <stdexcept>
#include <string>

namespace af {

// Every failure carries a stable machine-readable condition slug next to the
// human message.  CLI exit codes key off the class: hypothesis violations -> 2,
// numeric/indeterminate failures -> 3, bad arguments/config -> 4.
class Error : public std::runtime_error {
public:
    Error(std::string condition, const std::string& what)
        : std::runtime_error(what), condition_(std::move(condition)) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

// A mathematical hypothesis of a construction does not hold for the inputs.
class HypothesisError : public Error {
public:
    using Error::Error;
};

// A numeric routine left its domain of validity (no convergence, contraction
// factor >= 1, tolerance not reachable, ...).
class NumericDomainError : public Error {
public:
    using Error::Error;
};

// The answer is genuinely on a decision boundary at working precision.
class IndeterminateError : public NumericDomainError {
public:
    using NumericDomainError::NumericDomainError;
};

// An exact predicate was asked of data it cannot decide exactly.
class ExactnessError : public NumericDomainError {
public:
    using NumericDomainError::NumericDomainError;
};

// Malformed user input (CLI flags, config files, out-of-range parameters).
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace af
