#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sas {

enum class ErrorCode {
    NonStochasticRow,
    EmptySubsetPossible,
    BadDiscount,
    DimensionMismatch,
    NonFiniteValue,
    BadProbability,
    UnsupportedModel,
    BadSampleCount,
    BadParameter,
    BadPrecision,
    TooLarge,
    EmptySet,
    UnavailableAction,
    NotConverged,
    SingularSystem,
    Infeasible,
    Unbounded,
    Cycling,
    MaxRoundsExceeded,
    DisconnectedGraph,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure reported by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct ValidationIssue {
    ErrorCode code;
    std::string message;
};

/// Thrown by validate(); carries every violated invariant, not just the first.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);

    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

} // namespace sas
