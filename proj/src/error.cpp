#include "sas/error.hpp"

namespace sas {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonStochasticRow: return "NonStochasticRow";
    case ErrorCode::EmptySubsetPossible: return "EmptySubsetPossible";
    case ErrorCode::BadDiscount: return "BadDiscount";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::BadSampleCount: return "BadSampleCount";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::BadPrecision: return "BadPrecision";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::UnavailableAction: return "UnavailableAction";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::Cycling: return "Cycling";
    case ErrorCode::MaxRoundsExceeded: return "MaxRoundsExceeded";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

namespace {
std::string summarize(const std::vector<ValidationIssue>& issues) {
    std::string out = "instance failed validation";
    for (const auto& issue : issues) {
        out += "\n  ";
        out += to_string(issue.code);
        out += ": ";
        out += issue.message;
    }
    return out;
}
} // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(issues.empty() ? ErrorCode::BadParameter : issues.front().code, summarize(issues)),
      issues_(std::move(issues)) {}

} // namespace sas
